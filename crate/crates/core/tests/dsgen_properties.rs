use proptest::prelude::*;

use dslab_core::arith::MultiplicativeWeight;
use dslab_core::dsgen::{build_family, family_diagnostics, valuation_structure, DsError, Variant};
use dslab_core::intervals::{build_set, Mode};
use dslab_core::rational::{int, ratio};
use dslab_core::verify::{gcd_consequence_check, regularity_check};

/// Prime windows whose products stay small enough for exact diagnostics.
fn window() -> impl Strategy<Value = (u64, u64)> {
    prop::sample::select(vec![(2, 3), (2, 8), (3, 8), (3, 12), (5, 14), (7, 14), (2, 12)])
}

#[test]
fn full_family_sets_nest_in_the_top_set() {
    let fam = build_family(3, 3, 12, Variant::Full).unwrap();
    let top = build_set(fam.modulus, &fam.psi.get(fam.modulus), Mode::All).unwrap();
    for (n, v) in fam.psi.iter() {
        assert!(top.contains(&build_set(n, v, Mode::All).unwrap()), "E_{n}");
    }
}

#[test]
fn refined_pairs_satisfy_gcd_consequences_off_the_diagonal() {
    let fam = build_family(3, 3, 12, Variant::Refined).unwrap();
    let out = gcd_consequence_check(&fam.to_pair_set(false), fam.modulus).unwrap();
    assert!(out.holds, "{out:?}");
    let full = build_family(3, 3, 8, Variant::Full).unwrap();
    let out = gcd_consequence_check(&full.to_pair_set(false), full.modulus).unwrap();
    assert!(out.valuation_witnesses.contains(&(3, 5, 7)));
}

#[test]
fn pair_sets_are_regular_and_complete() {
    let phi = MultiplicativeWeight::totient();
    let fam = build_family(3, 3, 12, Variant::Refined).unwrap();
    let e = fam.to_pair_set(true);
    assert_eq!(e.len(), 16);
    let eps = dslab_core::arith::EpsilonParams::new(ratio(1, 4), 10).unwrap();
    assert!(regularity_check(&e, &phi, &phi, &eps).unwrap().holds);
}

#[test]
fn psi_above_half_is_rejected() {
    let err = dslab_core::dsgen::build_family_with_eps(1, 2, 3, Variant::Full, int(1)).unwrap_err();
    assert!(matches!(err, DsError::Interval(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn block_identities(k in 1u32..8, (n0, n1) in window(), refined in any::<bool>()) {
        let variant = if refined { Variant::Refined } else { Variant::Full };
        let fam = build_family(k, n0, n1, variant).unwrap();
        let d = family_diagnostics(&fam).unwrap();
        let two_eps = int(2) * &fam.eps_k;
        prop_assert!(d.consistent);
        prop_assert!(d.sum_a <= two_eps.clone());
        if variant == Variant::Full {
            prop_assert_eq!(&d.union_e, &two_eps);
            for (n, v) in fam.psi.iter() {
                prop_assert_eq!(v / int(n), &fam.eps_k / int(fam.modulus));
            }
        } else {
            prop_assert!(valuation_structure(&fam).0);
        }
    }
}
