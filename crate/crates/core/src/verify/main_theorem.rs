use std::collections::BTreeSet;

use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::brackets::ln_le;
use super::{Decision, VerifyError};
use crate::arith::{ensure_admissible, factorize, primes_up_to, EpsilonParams, MultiplicativeWeight};
use crate::intervals::SupportFunction;
use crate::measures::{build_edge_set, edge_condition, mu_pairs, mu_set, PairSet};
use crate::rational::{self, ratio, Rational};
use crate::report::{Quantity, RatioReport};

/// A main-theorem evaluation: the ratio against the core
/// `(mu(V) mu(W) e^{-Ct})^{1/2+eps}` and the decided absolute bound
/// `mu(E) <= 1000^P core`.
#[derive(Debug, Clone, PartialEq)]
pub struct MainOutcome {
    pub report: RatioReport,
    /// `P = p0 + #{p <= p0 : p divides some v w}`.
    pub p_count: u64,
    pub absolute_bound: Decision,
    pub edges: usize,
}

/// Distinct primes `<= p0` dividing some `v w` with `v ∈ supp psi`,
/// `w ∈ supp theta`.
fn small_primes_hit(psi: &SupportFunction, theta: &SupportFunction, p0: u64) -> usize {
    if psi.is_empty() || theta.is_empty() {
        return 0;
    }
    let small: BTreeSet<u64> = primes_up_to(p0).into_iter().collect();
    let mut hit = BTreeSet::new();
    for n in psi.support().into_iter().chain(theta.support()) {
        for p in factorize(n).primes() {
            if small.contains(&p) {
                hit.insert(p);
            }
        }
        if hit.len() == small.len() {
            break;
        }
    }
    hit.len()
}

fn check_admissible(f: &MultiplicativeWeight, limit: u64) -> Result<(), VerifyError> {
    let a = ensure_admissible(f, limit);
    match a.witness {
        Some((n, _)) if !a.holds => Err(VerifyError::NotAdmissible {
            name: f.name().to_string(),
            n,
        }),
        _ => Ok(()),
    }
}

pub fn main_theorem_ratio(
    instance_id: &str,
    e: &PairSet,
    f: &MultiplicativeWeight,
    g: &MultiplicativeWeight,
    eps: &EpsilonParams,
    t: f64,
    c: &Rational,
) -> Result<MainOutcome, VerifyError> {
    for &(v, w) in e.edges() {
        let (pv, tw) = (e.psi().get(v), e.theta().get(w));
        if !edge_condition(v, w, &pv, &tw, t, c) {
            return Err(VerifyError::NotInEdgeSet { v, w });
        }
    }
    check_admissible(f, e.psi().max_index().unwrap_or(1))?;
    check_admissible(g, e.theta().max_index().unwrap_or(1))?;

    let lhs = mu_pairs(e, f, g);
    let mu_v = mu_set(e.psi(), f, e.psi().support());
    let mu_w = mu_set(e.theta(), g, e.theta().support());
    let exponent = rational::to_f64(&eps.inv_q_prime());
    let ln_rhs = exponent * (rational::ln(&mu_v) + rational::ln(&mu_w) - rational::to_f64(c) * t);
    let p_count = eps.p0() + small_primes_hit(e.psi(), e.theta(), eps.p0()) as u64;
    let ln_absolute = p_count as f64 * 1000f64.ln() + ln_rhs;
    let absolute_bound = if lhs.is_positive() {
        ln_le(rational::ln(&lhs), ln_absolute)
    } else {
        Decision::Holds
    };
    let report = RatioReport::with_ln_rhs(instance_id, lhs, Quantity::Float(ln_rhs.exp()), ln_rhs);
    Ok(MainOutcome {
        report,
        p_count,
        absolute_bound,
        edges: e.len(),
    })
}

/// One instance of the calibration sweep: the full edge set `E^{t,C}`.
#[derive(Debug, Clone)]
pub struct SweepInstance {
    pub id: String,
    pub psi: SupportFunction,
    pub theta: SupportFunction,
    pub t: f64,
    pub c: Rational,
}

const LEVELS: [(i64, i64); 3] = [(1, 8), (1, 4), (1, 2)];

fn patterned(support: &[u64], pattern: usize) -> SupportFunction {
    let pairs = support.iter().enumerate().map(|(i, &n)| {
        let (a, b) = if pattern < 3 { LEVELS[pattern] } else { LEVELS[i % 3] };
        (n, ratio(a, b))
    });
    SupportFunction::from_pairs(pairs).expect("levels lie in (0, 1/2]")
}

fn random_weights(rng: &mut ChaCha8Rng, support: &[u64]) -> SupportFunction {
    let pairs = support.iter().map(|&n| {
        let (a, b) = LEVELS[rng.gen_range(0..3)];
        (n, ratio(a, b))
    });
    SupportFunction::from_pairs(pairs).expect("levels lie in (0, 1/2]")
}

fn random_support(rng: &mut ChaCha8Rng, hi: u64) -> Vec<u64> {
    let mut all: Vec<u64> = (1..=hi).collect();
    all.shuffle(rng);
    let size = rng.gen_range(1..=hi as usize);
    let mut s = all[..size].to_vec();
    s.sort_unstable();
    s
}

/// The calibration family on `[1, hi]`: interval, divisor and multiple
/// supports with constant and cyclic weights (both `psi = theta` and mixed),
/// plus seeded random supports and weights. Each is paired with every
/// `(t, C) ∈ {1, 2} x {0, 1}`.
pub fn calibration_instances(hi: u64, random: usize, seed: u64) -> Vec<SweepInstance> {
    let mut supports: Vec<(String, Vec<u64>)> = Vec::new();
    for a in 1..=hi {
        for b in a..=hi {
            supports.push((format!("int[{a},{b}]"), (a..=b).collect()));
        }
    }
    for n in 2..=hi {
        supports.push((format!("div[{n}]"), factorize(n).divisors()));
    }
    for d in 2..=hi / 2 {
        supports.push((format!("mul[{d}]"), (d..=hi).step_by(d as usize).collect()));
    }

    let mut bases: Vec<(String, SupportFunction, SupportFunction)> = Vec::new();
    for (name, s) in &supports {
        for pp in 0..4 {
            for tp in 0..4 {
                bases.push((format!("{name}/p{pp}/t{tp}"), patterned(s, pp), patterned(s, tp)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 0..random {
        let sp = random_support(&mut rng, hi);
        let psi = random_weights(&mut rng, &sp);
        let theta = if r % 2 == 0 {
            psi.clone()
        } else {
            let sq = random_support(&mut rng, hi);
            random_weights(&mut rng, &sq)
        };
        bases.push((format!("rand[{r}]"), psi, theta));
    }

    let mut out = Vec::with_capacity(bases.len() * 4);
    for (name, psi, theta) in bases {
        for t in [1u64, 2] {
            for c in [0i64, 1] {
                out.push(SweepInstance {
                    id: format!("{name}/t{t}/C{c}"),
                    psi: psi.clone(),
                    theta: theta.clone(),
                    t: t as f64,
                    c: Rational::from_integer(c.into()),
                });
            }
        }
    }
    out
}

/// Evaluates every instance on its full edge set, in parallel; the output
/// order follows the input order.
pub fn run_main_sweep(
    instances: &[SweepInstance],
    f: &MultiplicativeWeight,
    g: &MultiplicativeWeight,
    eps: &EpsilonParams,
) -> Result<Vec<MainOutcome>, VerifyError> {
    let limit = instances
        .iter()
        .flat_map(|i| i.psi.max_index().into_iter().chain(i.theta.max_index()))
        .max()
        .unwrap_or(1);
    check_admissible(f, limit)?;
    check_admissible(g, limit)?;
    instances
        .par_iter()
        .map(|inst| {
            let e = build_edge_set(&inst.psi, &inst.theta, inst.t, &inst.c);
            main_theorem_ratio(&inst.id, &e, f, g, eps, inst.t, &inst.c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::mu_point;
    use num_traits::Zero;

    fn eps() -> EpsilonParams {
        EpsilonParams::new(ratio(2, 5), 10).unwrap()
    }

    #[test]
    fn empty_edge_set() {
        let phi = MultiplicativeWeight::totient();
        let psi = SupportFunction::constant(ratio(1, 4), 1, 5).unwrap();
        let e = PairSet::empty(psi.clone(), psi);
        let out = main_theorem_ratio("empty", &e, &phi, &phi, &eps(), 1.0, &Rational::zero()).unwrap();
        assert_eq!(out.report.ratio, Some(0.0));
        assert_eq!(out.absolute_bound, Decision::Holds);
    }

    #[test]
    fn single_edge_formula() {
        let phi = MultiplicativeWeight::totient();
        let psi = SupportFunction::from_pairs([(6, ratio(1, 4))]).unwrap();
        let theta = SupportFunction::from_pairs([(6, ratio(1, 2))]).unwrap();
        let e = build_edge_set(&psi, &theta, 1.0, &Rational::zero());
        assert_eq!(e.len(), 1);
        let out = main_theorem_ratio("one", &e, &phi, &phi, &eps(), 1.0, &Rational::zero()).unwrap();
        let mu = rational::to_f64(&(mu_point(&psi, &phi, 6) * mu_point(&theta, &phi, 6)));
        let expect = mu.powf(0.1);
        assert!((out.report.ratio.unwrap() - expect).abs() < 1e-12 * expect);
        assert!(expect <= 1.0);
        // p0 = 10 and 6 = 2 * 3.
        assert_eq!(out.p_count, 12);
    }

    #[test]
    fn rejects_pairs_outside_the_edge_set() {
        let phi = MultiplicativeWeight::totient();
        let psi = SupportFunction::constant(ratio(1, 2), 1, 4).unwrap();
        let e = PairSet::new([(1, 4)], psi.clone(), psi).unwrap();
        let err = main_theorem_ratio("bad", &e, &phi, &phi, &eps(), 1.0, &Rational::zero()).unwrap_err();
        assert_eq!(err, VerifyError::NotInEdgeSet { v: 1, w: 4 });
    }

    #[test]
    fn rejects_inadmissible_weights() {
        let id = MultiplicativeWeight::identity();
        let psi = SupportFunction::constant(ratio(1, 2), 1, 4).unwrap();
        let e = PairSet::empty(psi.clone(), psi);
        let err = main_theorem_ratio("id", &e, &id, &id, &eps(), 1.0, &Rational::zero()).unwrap_err();
        assert!(matches!(err, VerifyError::NotAdmissible { n: 2, .. }));
    }

    #[test]
    fn small_sweep_is_deterministic() {
        let phi = MultiplicativeWeight::totient();
        let a = calibration_instances(6, 5, 7);
        let b = calibration_instances(6, 5, 7);
        assert_eq!(a.len(), b.len());
        let ra = run_main_sweep(&a, &phi, &phi, &eps()).unwrap();
        let rb = run_main_sweep(&b, &phi, &phi, &eps()).unwrap();
        assert_eq!(ra, rb);
        assert!(ra.iter().all(|o| o.absolute_bound == Decision::Holds));
    }
}
