use std::collections::BTreeSet;

use proptest::prelude::*;

use dslab_core::arith::{valuation, MultiplicativeWeight};
use dslab_core::intervals::{psi_mass, SupportFunction};
use dslab_core::measures::{layer_matrix, mu_pairs, mu_point, mu_set, PairSet};
use dslab_core::rational::{self, int, ratio, Rational};

fn support_function(max: u64) -> impl Strategy<Value = SupportFunction> {
    prop::collection::btree_map(1..=max, 1i64..=12, 1..20)
        .prop_map(|m| SupportFunction::from_pairs(m.into_iter().map(|(n, k)| (n, ratio(k, 24)))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn complete_pairs_factor(psi in support_function(200), theta in support_function(200)) {
        let phi = MultiplicativeWeight::totient();
        let e = PairSet::complete(psi.clone(), theta.clone());
        let want = mu_set(&psi, &phi, psi.support()) * mu_set(&theta, &phi, theta.support());
        prop_assert_eq!(mu_pairs(&e, &phi, &phi), want);
    }

    #[test]
    fn mu_pairs_matches_direct_sum(psi in support_function(100), theta in support_function(100), keep in prop::collection::vec(any::<bool>(), 400)) {
        let phi = MultiplicativeWeight::totient();
        let all = PairSet::complete(psi.clone(), theta.clone());
        let sub: Vec<(u64, u64)> = all.edges().iter().zip(keep.iter().cycle()).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
        let e = PairSet::new(sub.iter().copied(), psi.clone(), theta.clone()).unwrap();
        let mut direct = Rational::default();
        for &(v, w) in &sub {
            direct += mu_point(&psi, &phi, v) * mu_point(&theta, &phi, w);
        }
        prop_assert_eq!(mu_pairs(&e, &phi, &phi), direct);
    }

    #[test]
    fn mu_pairs_monotone_under_inclusion(psi in support_function(100), theta in support_function(100), cut in 0usize..400) {
        let phi = MultiplicativeWeight::totient();
        let all = PairSet::complete(psi.clone(), theta.clone());
        let small = PairSet::new(all.edges().iter().copied().take(cut), psi, theta).unwrap();
        prop_assert!(mu_pairs(&small, &phi, &phi) <= mu_pairs(&all, &phi, &phi));
    }

    #[test]
    fn layer_marginals(psi in support_function(200), theta in support_function(200), p in prop::sample::select(vec![2u64, 3, 5])) {
        let phi = MultiplicativeWeight::totient();
        let e = PairSet::complete(psi.clone(), theta.clone());
        let total = mu_pairs(&e, &phi, &phi);
        let mm = layer_matrix(&e, &phi, &phi, p).unwrap();
        let rows: BTreeSet<u32> = psi.support().into_iter().map(|v| valuation(v, p)).collect();
        for i in rows {
            let row = rational::sum(mm.entries().iter().filter(|((a, _), _)| *a == i).map(|(_, x)| x.clone()));
            let layer = e.filter(|v, _| valuation(v, p) == i);
            prop_assert_eq!(row * &total, mu_pairs(&layer, &phi, &phi));
        }
    }

    #[test]
    fn phi_mass_is_half_psi_mass(values in prop::collection::vec(0i64..=12, 1..200)) {
        let phi = MultiplicativeWeight::totient();
        let big_n = values.len() as u64;
        let psi = SupportFunction::from_pairs(values.iter().enumerate().map(|(i, &k)| (i as u64 + 1, ratio(k, 24)))).unwrap();
        prop_assert_eq!(int(2) * mu_set(&psi, &phi, psi.support()), psi_mass(big_n, &psi));
    }
}
