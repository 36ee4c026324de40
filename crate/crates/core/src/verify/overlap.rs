use num_traits::{One, Zero};
use rayon::prelude::*;

use super::VerifyError;
use crate::arith::{big_d, f_rho, quotient_primes};
use crate::intervals::{build_set, coprime_sets, psi_mass, Mode, SupportFunction};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OverlapMode {
    /// `prod_{p | nm/gcd^2, p > D} (1 + 1/p)`.
    Constant,
    /// `(1 + u^{-u/2} + T^u log(D + 2) log T / D) prod_{p > T} (1 + 1/(p - 1))`.
    General { u: f64, t: f64 },
    /// The general form at `u = sqrt(log D)`, `T = F_rho(D)`, whose error
    /// term is `F_rho(D)^{-1}`.
    Optimized { rho: f64 },
}

/// The non-constant factor of an overlap bound, split into its exact prime
/// product and its transcendental error term.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapRhs {
    pub d: Rational,
    pub product: Rational,
    /// `None` for the constant mode.
    pub error_term: Option<f64>,
    /// The `(u, T)` actually used.
    pub parameters: Option<(f64, f64)>,
    /// `(1 + error_term) * product` as a float.
    pub factor: f64,
    /// `lambda(A_n) lambda(A_m)` and `lambda(A_n ∩ A_m)`, for monitoring.
    pub independent: Rational,
    pub overlap: Rational,
}

impl OverlapRhs {
    /// `lambda(A_n ∩ A_m) / (lambda(A_n) lambda(A_m) factor)`.
    pub fn ratio(&self) -> Option<f64> {
        if self.independent.is_zero() {
            return None;
        }
        Some(rational::to_f64(&(&self.overlap / &self.independent)) / self.factor)
    }
}

fn product_above<F: Fn(u64) -> bool>(primes: &[u64], above: F, shift: u64) -> Rational {
    let mut out = Rational::one();
    for &p in primes {
        if above(p) {
            out *= Rational::one() + Rational::new(1.into(), (p - shift).into());
        }
    }
    out
}

pub fn overlap_rhs(n: u64, m: u64, psi: &SupportFunction, mode: OverlapMode) -> Result<OverlapRhs, VerifyError> {
    if n == m {
        return Err(VerifyError::EqualIndices);
    }
    let (pn, pm) = (psi.get(n), psi.get(m));
    let d = big_d(n, m, &pn, &pm);
    let primes = quotient_primes(n, m);
    let a_n = build_set(n, &pn, Mode::Coprime)?;
    let a_m = build_set(m, &pm, Mode::Coprime)?;
    let overlap = a_n.intersect_measure(&a_m);
    let independent = a_n.measure() * a_m.measure();
    let df = rational::to_f64(&d);

    let (product, error_term, parameters) = match mode {
        OverlapMode::Constant => (product_above(&primes, |p| int(p) > d, 0), None, None),
        OverlapMode::General { u, t } => {
            if d.is_zero() {
                return Err(VerifyError::InvalidInstance("D = 0 leaves the error term undefined".into()));
            }
            if !(u > 0.0 && t > 1.0) {
                return Err(VerifyError::InvalidInstance("need u > 0 and T > 1".into()));
            }
            let err = u.powf(-u / 2.0) + t.powf(u) * (df + 2.0).ln() * t.ln() / df;
            (product_above(&primes, |p| p as f64 > t, 1), Some(err), Some((u, t)))
        }
        OverlapMode::Optimized { rho } => {
            if !(df > 1.0) {
                return Err(VerifyError::InvalidInstance("the optimized form needs D > 1".into()));
            }
            let t = f_rho(df, rho)?;
            let u = df.ln().sqrt();
            (product_above(&primes, |p| p as f64 > t, 1), Some(1.0 / t), Some((u, t)))
        }
    };
    let factor = (1.0 + error_term.unwrap_or(0.0)) * rational::to_f64(&product);
    Ok(OverlapRhs {
        d,
        product,
        error_term,
        parameters,
        factor,
        independent,
        overlap,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondMoment {
    /// `sum_{n, m <= N} lambda(A_n ∩ A_m)`.
    pub sum: Rational,
    pub psi_mass: Rational,
    pub ratio_to_psi_sq: Option<f64>,
}

/// The diagonal plus twice the strict upper triangle, rows in parallel.
pub fn second_moment(big_n: u64, psi: &SupportFunction) -> Result<SecondMoment, VerifyError> {
    if big_n == 0 {
        return Err(VerifyError::InvalidInstance("N must be positive".into()));
    }
    let sets: Vec<_> = coprime_sets(&psi.restrict(1.0, big_n as f64));
    let rows: Vec<(Rational, Rational)> = (0..sets.len())
        .into_par_iter()
        .map(|i| {
            let a = &sets[i].1;
            let off = rational::sum(sets[i + 1..].iter().map(|(_, b)| a.intersect_measure(b)));
            (a.measure(), off)
        })
        .collect();
    let diag = rational::sum(rows.iter().map(|(d, _)| d.clone()));
    let off = rational::sum(rows.into_iter().map(|(_, o)| o));
    let sum = diag + int(2) * off;
    let mass = psi_mass(big_n, psi);
    let ratio_to_psi_sq = if mass.is_zero() {
        None
    } else {
        Some(rational::to_f64(&(&sum / (&mass * &mass))))
    };
    Ok(SecondMoment {
        sum,
        psi_mass: mass,
        ratio_to_psi_sq,
    })
}
