//! Helpers around [`BigRational`]: parsing, `p/q` formatting, logarithms of
//! arbitrarily large values and balanced summation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational (expected `p/q` or an integer)")]
pub struct ParseRationalError(pub String);

pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p/q`, `-p/q` or a bare integer. Decimal literals such as `0.25` are
/// accepted too and converted exactly.
pub fn parse(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let num = BigInt::from_str(&digits).map_err(|_| err())?;
        let den = num_traits::pow(BigInt::from(10u32), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| err())
}

/// Always `p/q`, including `n/1` for integers.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(x) if x.is_finite() && (x != 0.0 || r.is_zero()) => x,
        _ => {
            let l = ln(&r.abs());
            let v = l.exp();
            if r.is_negative() {
                -v
            } else {
                v
            }
        }
    }
}

/// Natural logarithm of a positive big integer, accurate to a few ulps even
/// when the value overflows `f64`.
pub fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a rational; `-inf` for zero, NaN for negatives.
pub fn ln(r: &Rational) -> f64 {
    match r.numer().sign() {
        Sign::NoSign => f64::NEG_INFINITY,
        Sign::Minus => f64::NAN,
        Sign::Plus => ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude()),
    }
}

/// Sums in a balanced tree. Denominators grow like an lcm, so sequential
/// accumulation pays a quadratic gcd at every step; the tree keeps operands
/// of similar size.
pub fn sum<I: IntoIterator<Item = Rational>>(items: I) -> Rational {
    let mut level: Vec<Rational> = items.into_iter().collect();
    if level.is_empty() {
        return Rational::zero();
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a + b),
                None => next.push(a),
            }
        }
        level = next;
    }
    level.pop().unwrap()
}

/// `floor(r)` as a big integer.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Exact test `r <= x` for a float threshold `x`.
pub fn le_f64(r: &Rational, x: f64) -> bool {
    if x.is_nan() {
        return false;
    }
    if x == f64::INFINITY {
        return true;
    }
    if x == f64::NEG_INFINITY {
        return false;
    }
    *r <= from_f64(x)
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    let mut result = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        e >>= 1;
        if e > 0 {
            b = &b * &b;
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse("-3").unwrap(), ratio(-3, 1));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert_eq!(format(&ratio(3, 1)), "3/1");
        assert_eq!(format(&ratio(-2, 6)), "-1/3");
    }

    #[test]
    fn ln_of_huge_values() {
        let big = pow(&int(10), 400);
        assert!((ln(&big) - 400.0 * 10f64.ln()).abs() < 1e-9);
        assert!((ln(&big.recip()) + 400.0 * 10f64.ln()).abs() < 1e-9);
        assert_eq!(ln(&Rational::zero()), f64::NEG_INFINITY);
        assert!((to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn tree_sum_matches_sequential() {
        let terms: Vec<Rational> = (1..=50).map(|n| ratio(1, n)).collect();
        let seq = terms.iter().fold(Rational::zero(), |a, b| a + b);
        assert_eq!(sum(terms), seq);
        assert_eq!(sum(Vec::new()), Rational::zero());
    }

    #[test]
    fn float_threshold_comparison() {
        assert!(le_f64(&ratio(1, 2), 0.5));
        assert!(!le_f64(&ratio(1, 3), 0.333));
        assert!(le_f64(&int(7), f64::INFINITY));
    }
}
