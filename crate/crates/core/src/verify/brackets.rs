//! Rational brackets for the transcendental factors that show up in the
//! checked inequalities.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::Decision;
use crate::rational::{int, Rational};

const MAX_TERMS: u64 = 1 << 13;

/// `lo < e^k < hi` from `n + 1` Taylor terms; the tail is bounded by a
/// geometric series, so `n + 2 > k` is required.
pub fn exp_int_bracket(k: u64, n: u64) -> (Rational, Rational) {
    assert!(n + 2 > k, "the tail bound needs n + 2 > k");
    let kk = int(k);
    let mut term = Rational::one();
    let mut lo = Rational::one();
    for j in 1..=n {
        term = term * &kk / int(j);
        lo += &term;
    }
    let next = term * &kk / int(n + 1);
    let tail = next / (Rational::one() - Rational::new(k.into(), (n + 2).into()));
    let hi = &lo + tail;
    (lo, hi)
}

/// Orders `x` against `e^k`. `e^k` is irrational for `k >= 1`, so only the
/// term cap can leave the answer open.
pub fn compare_exp(x: &Rational, k: u64) -> Option<Ordering> {
    if k == 0 {
        return Some(x.cmp(&Rational::one()));
    }
    if *x <= Rational::zero() {
        return Some(Ordering::Less);
    }
    let mut n = (2 * k + 8).max(16);
    while n <= MAX_TERMS {
        let (lo, hi) = exp_int_bracket(k, n);
        if *x <= lo {
            return Some(Ordering::Less);
        }
        if *x >= hi {
            return Some(Ordering::Greater);
        }
        n *= 2;
    }
    None
}

/// Decides `lhs <= rhs` from natural logs known to about 1e-12 relative
/// accuracy. Values inside the guard band are left indeterminate.
pub fn ln_le(ln_lhs: f64, ln_rhs: f64) -> Decision {
    if ln_lhs == f64::NEG_INFINITY {
        return Decision::Holds;
    }
    if ln_lhs.is_nan() || ln_rhs.is_nan() {
        return Decision::Indeterminate;
    }
    let guard = 1e-9 * ln_rhs.abs().max(ln_lhs.abs()).max(1.0);
    if ln_lhs <= ln_rhs - guard {
        Decision::Holds
    } else if ln_lhs > ln_rhs + guard {
        Decision::Fails
    } else {
        Decision::Indeterminate
    }
}
