use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use dslab_core::arith::euler_phi;
use dslab_core::intervals::{build_set, count_solutions, intersect_measure, psi_mass, Mode, SupportFunction};
use dslab_core::rational::{int, ratio, Rational};
use dslab_core::verify::second_moment;

fn psi_value() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|k| ratio(k, 24))
}

fn brute_count(alpha: &Rational, big_n: u64, psi: &SupportFunction) -> u64 {
    let mut c = 0;
    for n in 1..=big_n {
        let v = psi.get(n);
        if v.is_zero() {
            continue;
        }
        for a in 0..=n {
            if a.gcd(&n) == 1 && (alpha - Rational::new(a.into(), n.into())).abs() <= &v / int(n) {
                c += 1;
            }
        }
    }
    c
}

#[test]
fn measure_identities_to_300() {
    for v in [ratio(1, 8), ratio(1, 3), ratio(1, 2)] {
        for n in 1..=300u64 {
            let a = build_set(n, &v, Mode::Coprime).unwrap();
            let e = build_set(n, &v, Mode::All).unwrap();
            assert_eq!(a.measure(), int(2 * euler_phi(n)) * &v / int(n));
            assert_eq!(e.measure(), int(2) * &v);
            assert!(e.contains(&a));
        }
    }
}

#[test]
fn count_matches_double_loop() {
    let psis = [
        SupportFunction::constant(ratio(1, 2), 1, 200).unwrap(),
        SupportFunction::inverse(ratio(1, 2), 1, 200).unwrap(),
        SupportFunction::from_pairs((1..=200u64).map(|n| (n, ratio((n % 5) as i64, 10)))).unwrap(),
    ];
    for psi in &psis {
        for (p, q) in [(0, 1), (1, 1), (1, 3), (3, 10), (7, 19), (141, 1000), (31_415, 99_999)] {
            let alpha = ratio(p, q);
            for big_n in [1, 17, 200] {
                assert_eq!(count_solutions(&alpha, big_n, psi).unwrap(), brute_count(&alpha, big_n, psi), "alpha = {alpha}, N = {big_n}, psi(1) = {}", psi.get(1));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn coprime_set_inside_full_set(n in 1u64..400, v in psi_value()) {
        let a = build_set(n, &v, Mode::Coprime).unwrap();
        let e = build_set(n, &v, Mode::All).unwrap();
        prop_assert!(e.contains(&a));
    }

    #[test]
    fn divisibility_nesting(n in 1u64..60, k in 1u64..8, vn in psi_value(), vm in psi_value()) {
        let m = n * k;
        prop_assume!(&vn / int(n) <= &vm / int(m));
        let en = build_set(n, &vn, Mode::All).unwrap();
        let em = build_set(m, &vm, Mode::All).unwrap();
        prop_assert!(em.contains(&en));
    }

    #[test]
    fn intersection_measure_laws(n in 1u64..80, m in 1u64..80, vn in psi_value(), vm in psi_value()) {
        let a = build_set(n, &vn, Mode::Coprime).unwrap();
        let b = build_set(m, &vm, Mode::Coprime).unwrap();
        let ab = intersect_measure(&a, &b);
        prop_assert_eq!(&ab, &intersect_measure(&b, &a));
        prop_assert!(ab <= a.measure() && ab <= b.measure());
        prop_assert_eq!(intersect_measure(&a, &a), a.measure());
    }

    #[test]
    fn second_moment_dominates(values in prop::collection::vec(psi_value(), 1..30)) {
        let psi = SupportFunction::from_pairs(values.iter().enumerate().map(|(i, v)| (i as u64 + 1, v.clone()))).unwrap();
        let big_n = values.len() as u64;
        let s = second_moment(big_n, &psi).unwrap();
        let mass = psi_mass(big_n, &psi);
        prop_assert_eq!(&s.psi_mass, &mass);
        prop_assert!(s.sum >= &mass * &mass);
        prop_assert!(s.sum >= mass);
    }

    #[test]
    fn count_matches_brute_on_random_alpha(p in 0i64..=1000, q in 1i64..=1000, big_n in 1u64..60, vs in prop::collection::vec(psi_value(), 60)) {
        let alpha = ratio(p.min(q), q);
        let psi = SupportFunction::from_pairs(vs.into_iter().enumerate().map(|(i, v)| (i as u64 + 1, v))).unwrap();
        prop_assert_eq!(count_solutions(&alpha, big_n, &psi).unwrap(), brute_count(&alpha, big_n, &psi));
    }
}
