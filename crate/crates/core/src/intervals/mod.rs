//! Approximation sets `A_n` (coprime numerators) and `E_n` (all numerators)
//! as exact interval unions, their measures, and the counting function
//! `S(N, alpha)`.
//!
//! `count_solutions` takes `alpha` as an exact rational. When it stands in for
//! an irrational number, boundary cases `|alpha - a/n| = psi(n)/n` can change
//! under a different approximant.

mod support;
mod union;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::euler_phi;
use crate::rational::{self, Rational};

pub use support::SupportFunction;
pub use union::{intersect_measure, measure, union_measure, Interval, IntervalUnion};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("psi({n}) = {value} lies outside [0, 1/2]")]
    PsiOutOfRange { n: u64, value: String },
    #[error("approximation functions are indexed by positive integers")]
    ZeroIndex,
    #[error("alpha = {0} lies outside [0, 1]")]
    AlphaOutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `A_n`: numerators coprime to `n`.
    Coprime,
    /// `E_n`: every numerator `0 <= a <= n`.
    All,
}

/// Union of `[a/n - psi/n, a/n + psi/n] ∩ [0, 1]` over the admissible `a`.
pub fn build_set(n: u64, psi_n: &Rational, mode: Mode) -> Result<IntervalUnion, IntervalError> {
    if n == 0 {
        return Err(IntervalError::ZeroIndex);
    }
    if psi_n.is_negative() || *psi_n > rational::ratio(1, 2) {
        return Err(IntervalError::PsiOutOfRange {
            n,
            value: rational::format(psi_n),
        });
    }
    if psi_n.is_zero() {
        return Ok(IntervalUnion::empty());
    }
    let den = BigInt::from(n) * psi_n.denom();
    let r = psi_n.numer().clone();
    let s = psi_n.denom().clone();
    let pieces = (0..=n)
        .filter(|&a| mode == Mode::All || a.gcd(&n) == 1)
        .map(|a| {
            let centre = BigInt::from(a) * &s;
            Interval::new(
                Rational::new(&centre - &r, den.clone()),
                Rational::new(&centre + &r, den.clone()),
            )
        })
        .collect();
    Ok(IntervalUnion::from_intervals(pieces))
}

/// `A_n` for every `n` in the support.
pub fn coprime_sets(psi: &SupportFunction) -> Vec<(u64, IntervalUnion)> {
    psi.iter()
        .map(|(n, v)| (n, build_set(n, v, Mode::Coprime).expect("validated support")))
        .collect()
}

/// `Psi(N) = sum_{n <= N} 2 phi(n) psi(n) / n`.
pub fn psi_mass(big_n: u64, psi: &SupportFunction) -> Rational {
    rational::sum(
        psi.iter()
            .take_while(|&(n, _)| n <= big_n)
            .map(|(n, v)| v * rational::int(2 * euler_phi(n)) / rational::int(n)),
    )
}

/// `S(N, alpha)`: coprime pairs `(a, n)` with `1 <= n <= N`, `0 <= a <= n` and
/// `|alpha - a/n| <= psi(n)/n`. Indices with `psi(n) = 0` contribute nothing,
/// matching the empty `A_n`.
pub fn count_solutions(alpha: &Rational, big_n: u64, psi: &SupportFunction) -> Result<u64, IntervalError> {
    if alpha.is_negative() || *alpha > rational::int(1) {
        return Err(IntervalError::AlphaOutOfRange(rational::format(alpha)));
    }
    let small = (
        alpha.numer().to_u64(),
        alpha.denom().to_u64(),
    );
    let mut count = 0;
    for (n, v) in psi.iter().take_while(|&(n, _)| n <= big_n) {
        // Only floor(n alpha) and floor(n alpha) + 1 can be within 1/2 of n alpha.
        count += match (small, v.numer().to_u64(), v.denom().to_u64()) {
            ((Some(r), Some(s)), Some(pn), Some(pd)) => count_at_small(n, r, s, pn, pd),
            _ => count_at_big(n, alpha, v),
        };
    }
    Ok(count)
}

fn count_at_small(n: u64, r: u64, s: u64, pn: u64, pd: u64) -> u64 {
    let nr = n as u128 * r as u128;
    let a0 = (nr / s as u128) as u64;
    let mut c = 0;
    for a in [a0, a0 + 1] {
        if a > n || a.gcd(&n) != 1 {
            continue;
        }
        let as_ = a as u128 * s as u128;
        let diff = nr.abs_diff(as_);
        if diff * pd as u128 <= pn as u128 * s as u128 {
            c += 1;
        }
    }
    c
}

fn count_at_big(n: u64, alpha: &Rational, v: &Rational) -> u64 {
    let x = alpha * rational::int(n);
    let a0 = rational::floor(&x).to_u64().expect("a <= n fits");
    let mut c = 0;
    for a in [a0, a0 + 1] {
        if a > n || a.gcd(&n) != 1 {
            continue;
        }
        if (&x - rational::int(a)).abs() <= *v {
            c += 1;
        }
    }
    c
}
