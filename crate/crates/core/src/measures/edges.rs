use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;

use super::PairSet;
use crate::arith::{big_d_at_most, factorize, quotient_primes, reciprocal_sum};
use crate::intervals::SupportFunction;
use crate::rational::{self, Rational};

/// `sum_{p >= t, p | vw/gcd^2} 1/p >= c`.
pub fn anatomy_at_least(v: u64, w: u64, t: f64, c: &Rational) -> bool {
    if !c.is_positive() {
        return true;
    }
    let primes: Vec<u64> = quotient_primes(v, w)
        .into_iter()
        .filter(|&p| p as f64 >= t)
        .collect();
    let approx: f64 = primes.iter().map(|&p| 1.0 / p as f64).sum();
    let cf = rational::to_f64(c);
    if approx > cf * (1.0 + 1e-9) + 1e-12 {
        return true;
    }
    if approx < cf * (1.0 - 1e-9) - 1e-12 {
        return false;
    }
    reciprocal_sum(primes) >= *c
}

/// Membership in `E^{t,C}_{psi,theta}` for a single pair.
pub fn edge_condition(
    v: u64,
    w: u64,
    psi_v: &Rational,
    theta_w: &Rational,
    t: f64,
    c: &Rational,
) -> bool {
    big_d_at_most(v, w, psi_v, theta_w, &rational::int(1)) && anatomy_at_least(v, w, t, c)
}

/// All pairs in `supp psi x supp theta` with `D <= 1` and anatomy mass at
/// least `c` over primes `>= t`.
///
/// `D(v, w) <= 1` forces `w psi(v) <= gcd(v, w)`, so for each divisor `g` of
/// `v` only `w = g k` with `k <= 1/psi(v)` and `gcd(v/g, k) = 1` can qualify.
pub fn build_edge_set(psi: &SupportFunction, theta: &SupportFunction, t: f64, c: &Rational) -> PairSet {
    assert!(t >= 1.0, "edge sets need t >= 1");
    let rights = theta.support();
    let lefts: Vec<(u64, Rational)> = psi.iter().map(|(v, p)| (v, p.clone())).collect();
    let found: Vec<Vec<(u64, u64)>> = lefts
        .par_iter()
        .map(|(v, pv)| edges_from(*v, pv, theta, &rights, t, c))
        .collect();
    let edges = found.into_iter().flatten();
    PairSet::new(edges, psi.clone(), theta.clone()).expect("edges drawn from the supports")
}

fn edges_from(
    v: u64,
    pv: &Rational,
    theta: &SupportFunction,
    rights: &[u64],
    t: f64,
    c: &Rational,
) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let test = |w: u64, out: &mut Vec<(u64, u64)>| {
        if let Some(tw) = theta.get_ref(w) {
            if edge_condition(v, w, pv, tw, t, c) {
                out.push((v, w));
            }
        }
    };
    let k_max = rational::floor(&pv.recip()).to_u64().unwrap_or(u64::MAX);
    let divisors = factorize(v).divisors();
    let candidates = (divisors.len() as u128) * (k_max as u128);
    if candidates > rights.len() as u128 {
        for &w in rights {
            test(w, &mut out);
        }
    } else {
        let w_max = rights.last().copied().unwrap_or(0);
        for &g in &divisors {
            let cof = v / g;
            for k in 1..=k_max {
                let w = match g.checked_mul(k) {
                    Some(w) if w <= w_max => w,
                    _ => break,
                };
                if cof.gcd(&k) == 1 {
                    test(w, &mut out);
                }
            }
        }
    }
    out
}

/// The rescaled edge set `E^{t,C}_{psi~,psi~}` with
/// `psi~ = 1_{[x, y]} psi / t`, i.e. `D_psi(v, w) <= t` on `[x, y]`.
pub fn build_scaled_edge_set(psi: &SupportFunction, x: f64, y: f64, t: f64, c: &Rational) -> PairSet {
    let scaled = psi.restrict(x, y).scale_down(&rational::from_f64(t));
    build_edge_set(&scaled, &scaled, t, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{big_d, l_sum, mertens_sum};
    use crate::rational::ratio;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn brute(psi: &SupportFunction, theta: &SupportFunction, t: f64, c: &Rational) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for (v, pv) in psi.iter() {
            for (w, tw) in theta.iter() {
                if big_d(v, w, pv, tw) <= rational::int(1) && l_sum(v, w, t) >= *c {
                    out.push((v, w));
                }
            }
        }
        out
    }

    #[test]
    fn examples() {
        let psi = SupportFunction::from_pairs([(2, ratio(1, 2)), (3, ratio(1, 2))]).unwrap();
        assert!(build_edge_set(&psi, &psi, 1.0, &ratio(1, 2)).is_empty());
        let all = build_edge_set(&psi, &psi, 1.0, &Rational::zero());
        assert_eq!(all.edges().iter().copied().collect::<Vec<_>>(), vec![(2, 2), (3, 3)]);

        let wide = SupportFunction::constant(ratio(1, 4), 1, 40).unwrap();
        let c = mertens_sum(40.0) + ratio(1, 1000);
        assert!(build_edge_set(&wide, &wide, 1.0, &c).is_empty());
    }

    #[test]
    fn scaled_set_is_d_at_most_t() {
        let psi = SupportFunction::constant(ratio(1, 2), 1, 30).unwrap();
        let e = build_scaled_edge_set(&psi, 1.0, 30.0, 2.0, &Rational::zero());
        let mut expect = Vec::new();
        for v in 1..=30 {
            for w in 1..=30 {
                if big_d(v, w, &ratio(1, 2), &ratio(1, 2)) <= rational::int(2) {
                    expect.push((v, w));
                }
            }
        }
        assert_eq!(e.edges().iter().copied().collect::<Vec<_>>(), expect);
        let same = build_scaled_edge_set(&psi, 1.0, 30.0, 1.0, &Rational::zero());
        assert_eq!(same, build_edge_set(&psi, &psi, 1.0, &Rational::zero()));
    }

    #[test]
    fn matches_brute_force_up_to_500() {
        let cases = [
            (SupportFunction::constant(ratio(1, 2), 1, 500).unwrap(), 1.0, Rational::zero()),
            (SupportFunction::constant(ratio(1, 8), 200, 500).unwrap(), 2.0, ratio(1, 3)),
            (SupportFunction::inverse(ratio(1, 2), 1, 300).unwrap(), 3.0, ratio(1, 5)),
            (SupportFunction::constant(ratio(1, 3), 1, 400).unwrap(), 1.0, ratio(-1, 1)),
        ];
        for (psi, t, c) in cases {
            let fast = build_edge_set(&psi, &psi, t, &c);
            assert_eq!(fast.edges().iter().copied().collect::<Vec<_>>(), brute(&psi, &psi, t, &c));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn random_supports_match_brute_force(
            psi_pts in prop::collection::btree_map(1u64..=500, 1i64..=8, 1..25),
            theta_pts in prop::collection::btree_map(1u64..=500, 1i64..=8, 1..25),
            t in 1.0f64..8.0,
            c_num in -2i64..6,
        ) {
            let psi = SupportFunction::from_pairs(psi_pts.into_iter().map(|(n, d)| (n, ratio(1, 2 * d)))).unwrap();
            let theta = SupportFunction::from_pairs(theta_pts.into_iter().map(|(n, d)| (n, ratio(1, d + 1)))).unwrap();
            let c = ratio(c_num, 6);
            let fast = build_edge_set(&psi, &theta, t, &c);
            prop_assert_eq!(fast.edges().iter().copied().collect::<Vec<_>>(), brute(&psi, &theta, t, &c));
        }
    }
}
