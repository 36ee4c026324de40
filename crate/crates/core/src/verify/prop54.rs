use num_traits::Zero;

use super::VerifyError;
use crate::arith::MultiplicativeWeight;
use crate::intervals::SupportFunction;
use crate::measures::{build_scaled_edge_set, mu_pairs};
use crate::rational::{self, int, Rational};
use crate::report::{Quantity, RatioReport};

/// Anatomy level in the definition of `E_t`: `sum_{p >= t} 1/p >= 10`.
pub const PROP54_ANATOMY_LEVEL: i64 = 10;

/// `sum_{X <= n <= Y} psi(n) phi(n) / n`.
pub fn normalization(psi: &SupportFunction, x: f64, y: f64) -> Rational {
    let phi = MultiplicativeWeight::totient();
    rational::sum(
        psi.restrict(x, y)
            .iter()
            .map(|(n, v)| phi.eval(n) * v / int(n)),
    )
}

/// `E_t` as in the statement: `D(v, w) <= t` and anatomy mass at least 10.
pub fn prop54_check(id: &str, psi: &SupportFunction, x: f64, y: f64, t: f64) -> Result<RatioReport, VerifyError> {
    prop54_check_with(id, psi, x, y, t, &int(PROP54_ANATOMY_LEVEL as u64))
}

/// Same monitor with the anatomy level `c` of `E_t` as a parameter; `c <= 0`
/// leaves only `D(v, w) <= t`.
pub fn prop54_check_with(
    id: &str,
    psi: &SupportFunction,
    x: f64,
    y: f64,
    t: f64,
    c: &Rational,
) -> Result<RatioReport, VerifyError> {
    let norm = normalization(psi, x, y);
    if norm < int(1) || norm > int(2) {
        return Err(VerifyError::Normalization(rational::format(&norm)));
    }
    if !(t >= 1.0) {
        return Err(VerifyError::InvalidInstance(format!("t = {t} must be at least 1")));
    }
    let phi = MultiplicativeWeight::totient();
    let e = build_scaled_edge_set(psi, x, y, t, c);
    let tt = rational::from_f64(t);
    // The scaled weights carry a factor 1/t each.
    let lhs = mu_pairs(&e, &phi, &phi) * &tt * &tt;
    Ok(RatioReport::new(id, lhs, Quantity::Exact(tt.recip())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop54Sweep {
    pub reports: Vec<RatioReport>,
    /// Smallest and largest `lhs t` over the sweep.
    pub min: f64,
    pub max: f64,
    /// Every `lhs` vanished, so the band check says nothing.
    pub vacuous: bool,
    pub within_band: bool,
}

pub fn prop54_sweep(
    psi: &SupportFunction,
    x: f64,
    y: f64,
    ts: &[f64],
    c: &Rational,
    band: f64,
) -> Result<Prop54Sweep, VerifyError> {
    let mut reports = ts
        .iter()
        .map(|&t| prop54_check_with(&format!("prop54/t={t}"), psi, x, y, t, c))
        .collect::<Result<Vec<_>, _>>()?;
    crate::report::stamp_sweep_max(&mut reports);
    let ratios: Vec<f64> = reports.iter().filter_map(|r| r.ratio).collect();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let vacuous = reports.iter().all(|r| r.lhs.is_zero());
    Ok(Prop54Sweep {
        reports,
        min,
        max,
        vacuous,
        within_band: max <= band * min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big_d;
    use crate::rational::ratio;

    #[test]
    fn zero_psi_fails_normalization() {
        let psi = SupportFunction::zero();
        assert!(matches!(
            prop54_check("z", &psi, 1.0, 50.0, 1.0),
            Err(VerifyError::Normalization(_))
        ));
    }

    #[test]
    fn large_t_takes_every_pair() {
        let psi = SupportFunction::constant(ratio(1, 2), 1, 4).unwrap();
        let norm = normalization(&psi, 1.0, 4.0);
        assert_eq!(norm, ratio(4, 3));
        let r = prop54_check_with("all", &psi, 1.0, 4.0, 64.0, &Rational::zero()).unwrap();
        assert_eq!(r.lhs, &norm * &norm);
        assert!(r.lhs <= int(4));
    }

    #[test]
    fn lhs_is_the_direct_pair_sum() {
        let psi = SupportFunction::inverse(ratio(1, 2), 1, 60).unwrap();
        let phi = MultiplicativeWeight::totient();
        for t in [1.0, 3.0] {
            let r = prop54_check_with("d", &psi, 1.0, 60.0, t, &Rational::zero()).unwrap();
            let mut terms = Vec::new();
            for v in 1..=60u64 {
                for w in 1..=60u64 {
                    if big_d(v, w, &psi.get(v), &psi.get(w)) <= rational::from_f64(t) {
                        let a = phi.eval(v) * psi.get(v) / int(v);
                        let b = phi.eval(w) * psi.get(w) / int(w);
                        terms.push(a * b);
                    }
                }
            }
            assert_eq!(r.lhs, rational::sum(terms));
        }
    }

    #[test]
    fn anatomy_level_ten_is_empty_at_desk_scale() {
        let psi = SupportFunction::inverse(ratio(1, 2), 1, 60).unwrap();
        let r = prop54_check("ten", &psi, 1.0, 60.0, 2.0).unwrap();
        assert!(r.lhs.is_zero());
    }
}
