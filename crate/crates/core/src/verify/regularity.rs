use super::VerifyError;
use crate::arith::{big_d_at_most, factorize, pm_decompose, ratio_valuation, EpsilonParams, MultiplicativeWeight};
use crate::measures::{mu_pairs, mu_set, PairSet};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityOutcome {
    pub holds: bool,
    /// Left vertices `v` with `mu(Γ(v)) < mu(E) / (q' mu(V'))`.
    pub left_witnesses: Vec<u64>,
    pub right_witnesses: Vec<u64>,
}

/// Both one-sided regularity inequalities
/// `mu_theta(Γ(v)) >= mu(E) / (q' mu_psi(V'))` and its mirror, over
/// `V' = E|_V`, `W' = E|_W`.
pub fn regularity_check(
    e: &PairSet,
    f: &MultiplicativeWeight,
    g: &MultiplicativeWeight,
    eps: &EpsilonParams,
) -> Result<RegularityOutcome, VerifyError> {
    if e.is_empty() {
        return Err(VerifyError::EmptyEdgeSet);
    }
    let total = mu_pairs(e, f, g);
    let mu_v = mu_set(e.psi(), f, e.left_vertices());
    let mu_w = mu_set(e.theta(), g, e.right_vertices());
    if mu_v == Rational::default() || mu_w == Rational::default() {
        return Err(VerifyError::InvalidInstance("V' or W' has zero measure".into()));
    }
    let inv_qp = eps.inv_q_prime();
    let left_need = &inv_qp * &total / &mu_v;
    let right_need = &inv_qp * &total / &mu_w;

    let left_witnesses: Vec<u64> = e
        .by_left()
        .into_iter()
        .filter(|(_, ws)| mu_set(e.theta(), g, ws.iter().copied()) < left_need)
        .map(|(v, _)| v)
        .collect();
    let right_witnesses: Vec<u64> = e
        .by_right()
        .into_iter()
        .filter(|(_, vs)| mu_set(e.psi(), f, vs.iter().copied()) < right_need)
        .map(|(w, _)| w)
        .collect();
    Ok(RegularityOutcome {
        holds: left_witnesses.is_empty() && right_witnesses.is_empty(),
        left_witnesses,
        right_witnesses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdOutcome {
    pub holds: bool,
    /// `(v, w, p)` with `|nu_p(v/N)| + |nu_p(w/N)| >= 2`.
    pub valuation_witnesses: Vec<(u64, u64, u64)>,
    /// Edges breaking `psi(v) <= 1/(v- w+)` or `theta(w) <= 1/(v+ w-)`.
    pub bound_witnesses: Vec<(u64, u64)>,
}

/// Valuation structure relative to `N` on every edge, then the bounds that
/// `D <= 1` forces once `v = N v+/v-` and `w = N w+/w-`.
pub fn gcd_consequence_check(e: &PairSet, modulus: u64) -> Result<GcdOutcome, VerifyError> {
    if modulus == 0 {
        return Err(VerifyError::InvalidInstance("N must be positive".into()));
    }
    let one = int(1);
    for &(v, w) in e.edges() {
        if !big_d_at_most(v, w, &e.psi().get(v), &e.theta().get(w), &one) {
            return Err(VerifyError::DOverOne { v, w });
        }
    }
    let mut valuation_witnesses = Vec::new();
    let mut bound_witnesses = Vec::new();
    for &(v, w) in e.edges() {
        let mut primes: Vec<u64> = factorize(v)
            .primes()
            .chain(factorize(w).primes())
            .chain(factorize(modulus).primes())
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let bad: Vec<u64> = primes
            .into_iter()
            .filter(|&p| ratio_valuation(v, modulus, p).abs() + ratio_valuation(w, modulus, p).abs() > 1)
            .collect();
        if !bad.is_empty() {
            valuation_witnesses.extend(bad.into_iter().map(|p| (v, w, p)));
            continue;
        }
        let dv = pm_decompose(v, modulus)?;
        let dw = pm_decompose(w, modulus)?;
        let psi_cap = Rational::new(1.into(), (dv.v_minus as u128 * dw.v_plus as u128).into());
        let theta_cap = Rational::new(1.into(), (dv.v_plus as u128 * dw.v_minus as u128).into());
        if e.psi().get(v) > psi_cap || e.theta().get(w) > theta_cap {
            bound_witnesses.push((v, w));
        }
    }
    Ok(GcdOutcome {
        holds: valuation_witnesses.is_empty() && bound_witnesses.is_empty(),
        valuation_witnesses,
        bound_witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intervals::SupportFunction;
    use crate::rational::ratio;

    fn eps() -> EpsilonParams {
        EpsilonParams::new(ratio(1, 4), 10).unwrap()
    }

    #[test]
    fn complete_and_single_edge_sets_are_regular() {
        let phi = MultiplicativeWeight::totient();
        let psi = SupportFunction::constant(ratio(1, 3), 1, 8).unwrap();
        let full = PairSet::complete(psi.clone(), psi.clone());
        assert!(regularity_check(&full, &phi, &phi, &eps()).unwrap().holds);
        let one = PairSet::new([(4, 6)], psi.clone(), psi).unwrap();
        assert!(regularity_check(&one, &phi, &phi, &eps()).unwrap().holds);
    }

    #[test]
    fn lopsided_star_fails() {
        let phi = MultiplicativeWeight::totient();
        // Left 1 sees a heavy and a light right vertex; left 2 sees only the light one.
        let psi = SupportFunction::from_pairs([(1, ratio(1, 2)), (2, ratio(1, 2))]).unwrap();
        let theta = SupportFunction::from_pairs([(3, ratio(1, 2)), (101, ratio(1, 1000))]).unwrap();
        let e = PairSet::new([(1, 3), (1, 101), (2, 101)], psi, theta).unwrap();
        let out = regularity_check(&e, &phi, &phi, &eps()).unwrap();
        assert!(!out.holds);
        assert_eq!(out.left_witnesses, vec![2]);
    }

    #[test]
    fn empty_edge_set_errors() {
        let phi = MultiplicativeWeight::totient();
        let psi = SupportFunction::constant(ratio(1, 3), 1, 3).unwrap();
        let e = PairSet::empty(psi.clone(), psi);
        assert_eq!(regularity_check(&e, &phi, &phi, &eps()).unwrap_err(), VerifyError::EmptyEdgeSet);
    }

    #[test]
    fn gcd_consequences() {
        let psi = SupportFunction::from_pairs([(12, ratio(1, 2))]).unwrap();
        let e = PairSet::new([(12, 12)], psi.clone(), psi).unwrap();
        let out = gcd_consequence_check(&e, 12).unwrap();
        assert!(out.holds);

        let psi = SupportFunction::from_pairs([(2, ratio(1, 2)), (3, ratio(1, 2))]).unwrap();
        let e = PairSet::new([(2, 3)], psi.clone(), psi).unwrap();
        assert_eq!(gcd_consequence_check(&e, 6).unwrap_err(), VerifyError::DOverOne { v: 2, w: 3 });
    }

    #[test]
    fn full_ds_pair_breaks_valuations() {
        let psi = SupportFunction::from_pairs([(3, ratio(1, 280)), (5, ratio(1, 168))]).unwrap();
        let e = PairSet::new([(3, 5)], psi.clone(), psi).unwrap();
        let out = gcd_consequence_check(&e, 105).unwrap();
        assert!(!out.holds);
        assert_eq!(out.valuation_witnesses, vec![(3, 5, 7)]);
    }
}
