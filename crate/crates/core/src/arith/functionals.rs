use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sieve::{factorize, Sieve};
use super::ArithError;
use crate::rational::{int, Rational};

/// `max(w psi_v, v theta_w) / gcd(v, w)`.
pub fn big_d(v: u64, w: u64, psi_v: &Rational, theta_w: &Rational) -> Rational {
    let g = v.gcd(&w);
    let a = psi_v * int(w);
    let b = theta_w * int(v);
    let m = if a >= b { a } else { b };
    m / int(g)
}

/// `D <= bound` decided without forming the quotient.
pub fn big_d_at_most(v: u64, w: u64, psi_v: &Rational, theta_w: &Rational, bound: &Rational) -> bool {
    let gu = v.gcd(&w);
    if let (Some(a), Some(b)) = (scaled_le(psi_v, w, bound, gu), scaled_le(theta_w, v, bound, gu)) {
        return a && b;
    }
    let g = int(gu);
    let cap = bound * g;
    psi_v * int(w) <= cap && theta_w * int(v) <= cap
}

/// `x k <= bound g` in 128-bit arithmetic, `None` when an operand is too wide.
fn scaled_le(x: &Rational, k: u64, bound: &Rational, g: u64) -> Option<bool> {
    let parts = |r: &Rational| -> Option<(i128, u128)> {
        Some((i128::try_from(r.numer()).ok()?, u128::try_from(r.denom()).ok()?))
    };
    let (xn, xd) = parts(x)?;
    let (bn, bd) = parts(bound)?;
    let lhs = xn.checked_mul(k as i128)?.checked_mul(i128::try_from(bd).ok()?)?;
    let rhs = bn.checked_mul(g as i128)?.checked_mul(i128::try_from(xd).ok()?)?;
    Some(lhs <= rhs)
}

/// `v w / gcd(v, w)^2` as a big integer (it can exceed `u64`).
pub fn coprime_quotient(v: u64, w: u64) -> BigUint {
    let g = v.gcd(&w);
    BigUint::from(v / g) * BigUint::from(w / g)
}

/// Distinct primes dividing `v w / gcd(v, w)^2`, i.e. primes with
/// `nu_p(v) != nu_p(w)`.
pub fn quotient_primes(v: u64, w: u64) -> Vec<u64> {
    let g = v.gcd(&w);
    let sieve = Sieve::global();
    let mut ps = sieve.prime_divisors(v / g);
    ps.extend(sieve.prime_divisors(w / g));
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// `L_x(n, m) = sum of 1/p over primes p >= x dividing n m / gcd(n, m)^2`.
pub fn l_sum(n: u64, m: u64, x: f64) -> Rational {
    reciprocal_sum(quotient_primes(n, m).into_iter().filter(|&p| p as f64 >= x))
}

/// Float estimate of [`l_sum`] (used to skip exact work far from a cutoff).
pub fn l_sum_f64(n: u64, m: u64, x: f64) -> f64 {
    quotient_primes(n, m)
        .into_iter()
        .filter(|&p| p as f64 >= x)
        .map(|p| 1.0 / p as f64)
        .sum()
}

/// `sum 1/p` for distinct primes. The reduced denominator is the product of
/// the primes, so the value is assembled without gcd work.
pub fn reciprocal_sum<I: IntoIterator<Item = u64>>(primes: I) -> Rational {
    let primes: Vec<u64> = primes.into_iter().collect();
    if primes.is_empty() {
        return Rational::zero();
    }
    let (num, den) = reciprocal_tree(&primes);
    Rational::new_raw(BigInt::from(num), BigInt::from(den))
}

fn reciprocal_tree(primes: &[u64]) -> (BigUint, BigUint) {
    if primes.len() == 1 {
        return (BigUint::one(), BigUint::from(primes[0]));
    }
    let (l, r) = primes.split_at(primes.len() / 2);
    let (ln, ld) = reciprocal_tree(l);
    let (rn, rd) = reciprocal_tree(r);
    (ln * &rd + rn * &ld, ld * rd)
}

/// `sum_{p <= x} 1/p`, exact.
pub fn mertens_sum(x: f64) -> Rational {
    if x < 2.0 {
        return Rational::zero();
    }
    let bound = x.floor() as u64;
    reciprocal_sum(primes_up_to(bound))
}

/// Primes `p <= x`, using the global table when it reaches that far.
pub fn primes_up_to(x: u64) -> Vec<u64> {
    let global = Sieve::global();
    if x <= global.limit() {
        global.primes_up_to(x).to_vec()
    } else {
        Sieve::new(x).primes_up_to(x).to_vec()
    }
}

/// Primes in the real interval `[lo, hi]`.
pub fn primes_in_range(lo: f64, hi: f64) -> Vec<u64> {
    if hi < 2.0 || hi < lo {
        return Vec::new();
    }
    primes_up_to(hi.floor() as u64)
        .into_iter()
        .filter(|&p| p as f64 >= lo)
        .collect()
}

/// `F_rho(x) = exp((log x)^(1/2 - rho))` for `x > 1`.
pub fn f_rho(x: f64, rho: f64) -> Result<f64, ArithError> {
    if !(x > 1.0) {
        return Err(ArithError::FRhoDomain(x));
    }
    Ok(x.ln().powf(0.5 - rho).exp())
}

/// [`f_rho`] continued by `F_rho(x) = 1` for `x <= 1`, where `log x <= 0`
/// has no real fractional power.
pub fn f_rho_extended(x: f64, rho: f64) -> f64 {
    f_rho(x, rho).unwrap_or(1.0)
}

/// `v = N v+ / v-` with squarefree, coprime `v-` and `v+`, `v- | N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlusMinusDecomposition {
    pub v_minus: u64,
    pub v_plus: u64,
}

impl PlusMinusDecomposition {
    /// `N v+ / v-` (exact when the decomposition came from `pm_decompose`).
    pub fn reconstruct(&self, modulus: u64) -> Rational {
        int(modulus) * int(self.v_plus) / int(self.v_minus)
    }
}

/// Splits `v / N` into primes of valuation `-1` and `+1`.
pub fn pm_decompose(v: u64, modulus: u64) -> Result<PlusMinusDecomposition, ArithError> {
    assert!(v >= 1 && modulus >= 1, "pm_decompose needs positive inputs");
    let g = v.gcd(&modulus);
    let up = factorize(v / g);
    let down = factorize(modulus / g);
    let mut v_plus = 1u64;
    let mut v_minus = 1u64;
    for (p, e) in up.iter() {
        if e > 1 {
            return Err(ArithError::ValuationTooLarge {
                prime: p,
                valuation: e as i64,
            });
        }
        v_plus *= p;
    }
    for (p, e) in down.iter() {
        if e > 1 {
            return Err(ArithError::ValuationTooLarge {
                prime: p,
                valuation: -(e as i64),
            });
        }
        v_minus *= p;
    }
    Ok(PlusMinusDecomposition { v_minus, v_plus })
}

/// `nu_p(v / N)` as a signed exponent.
pub fn ratio_valuation(v: u64, modulus: u64, p: u64) -> i64 {
    super::sieve::valuation(v, p) as i64 - super::sieve::valuation(modulus, p) as i64
}

/// `epsilon` with its conjugate exponents `q = 2/(1-2 eps)` and
/// `q' = 2/(1+2 eps)`, plus the configured threshold prime `p0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonParams {
    epsilon: Rational,
    q: Rational,
    q_prime: Rational,
    p0: u64,
}

impl EpsilonParams {
    pub fn new(epsilon: Rational, p0: u64) -> Result<Self, ArithError> {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        if !epsilon.is_positive() || epsilon >= half {
            return Err(ArithError::EpsilonRange(crate::rational::format(&epsilon)));
        }
        let two = int(2);
        let q = &two / (Rational::one() - &two * &epsilon);
        let q_prime = &two / (Rational::one() + &two * &epsilon);
        Ok(Self {
            epsilon,
            q,
            q_prime,
            p0,
        })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn q_prime(&self) -> &Rational {
        &self.q_prime
    }

    pub fn p0(&self) -> u64 {
        self.p0
    }

    /// `1/q = 1/2 - eps`.
    pub fn inv_q(&self) -> Rational {
        self.q.recip()
    }

    /// `1/q' = 1/2 + eps`, the exponent in the main bilinear bound.
    pub fn inv_q_prime(&self) -> Rational {
        self.q_prime.recip()
    }
}
