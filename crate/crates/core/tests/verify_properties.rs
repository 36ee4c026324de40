use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dslab_core::arith::{EpsilonParams, MultiplicativeWeight};
use dslab_core::intervals::SupportFunction;
use dslab_core::measures::{build_edge_set, mu_pairs};
use dslab_core::rational::{int, ratio, Rational};
use dslab_core::verify::{
    anatomy_count, anatomy_divisor_sum, threshold_shift_containment, classify_quantities, concentration_check,
    main_theorem_ratio, random_instance, Decision, ELabel, PairClassifier, QuantityInput,
};

fn trial_primes(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn oracle_count(x: u64, t: f64, c: &Rational) -> u64 {
    (1..=x)
        .filter(|&n| {
            let mass: Rational = trial_primes(n)
                .into_iter()
                .filter(|&p| p as f64 >= t)
                .map(|p| ratio(1, p as i64))
                .sum();
            mass >= *c
        })
        .count() as u64
}

fn level() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![ratio(1, 8), ratio(1, 4), ratio(1, 2)])
}

fn support_function(max: u64) -> impl Strategy<Value = SupportFunction> {
    prop::collection::btree_map(1..=max, level(), 1..12)
        .prop_map(|m| SupportFunction::from_pairs(m).unwrap())
}

fn eps() -> EpsilonParams {
    EpsilonParams::new(ratio(2, 5), 10).unwrap()
}

#[test]
fn anatomy_count_matches_double_loop() {
    for x in [1u64, 30, 97, 1000, 10_000] {
        for t in [1.0, 2.0, 3.0, 7.0, 40.0] {
            for c in [ratio(1, 10), ratio(1, 3), ratio(1, 2), int(1)] {
                let got = anatomy_count(x as f64, t, &c).unwrap().value;
                assert_eq!(got, int(oracle_count(x, t, &c)), "x = {x}, t = {t}, c = {c}");
            }
        }
    }
}

#[test]
fn divisor_sum_without_threshold_is_m() {
    let phi = MultiplicativeWeight::totient();
    for m in 1..=10_000u64 {
        assert_eq!(anatomy_divisor_sum(m, &phi, 2.0, &Rational::zero()).unwrap().value, int(m));
    }
}

#[test]
fn larger_c_can_raise_the_main_ratio() {
    // psi = 1/8 on {5, 6}: C = 1 keeps only (5, 6) and (6, 5), and the
    // core shrinks by e^{-0.9} while mu(E) drops by less.
    let phi = MultiplicativeWeight::totient();
    let psi = SupportFunction::constant(ratio(1, 8), 5, 6).unwrap();
    let ratio_at = |c: i64| {
        let c = int(c as u64);
        let e = build_edge_set(&psi, &psi, 1.0, &c);
        main_theorem_ratio("c", &e, &phi, &phi, &eps(), 1.0, &c).unwrap().report.ratio.unwrap()
    };
    assert!(ratio_at(1) > ratio_at(0));
}

#[test]
fn containment_grid_to_1e5() {
    let mut ran = 0;
    for t in [2.0, 5.0, 20.0] {
        for c in [ratio(1, 2), int(1)] {
            for eps in [ratio(1, 4), ratio(1, 3)] {
                if let Ok(out) = threshold_shift_containment(100_000, t, &c, &eps) {
                    assert!(out.contained);
                    assert!(out.count_at_t <= out.count_at_shift);
                    ran += 1;
                }
            }
        }
    }
    assert!(ran > 0);
}

#[test]
fn concentration_bound_on_seeded_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        assert!(concentration_check(&random_instance(&mut rng)).unwrap().c1_bound_holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn absolute_bound_and_lhs_monotone_in_c(psi in support_function(30), theta in support_function(30), t in 1u64..=2) {
        let phi = MultiplicativeWeight::totient();
        let t = t as f64;
        let mut lhs = Vec::new();
        for c in [int(0), ratio(1, 2), int(1)] {
            let e = build_edge_set(&psi, &theta, t, &c);
            let out = main_theorem_ratio("p", &e, &phi, &phi, &eps(), t, &c).unwrap();
            prop_assert_eq!(out.absolute_bound, Decision::Holds);
            lhs.push(mu_pairs(&e, &phi, &phi));
        }
        prop_assert!(lhs[0] >= lhs[1] && lhs[1] >= lhs[2]);
    }

    #[test]
    fn anatomy_count_monotone(x in 1u64..3000, t in 1.0f64..20.0, dt in 0.0f64..20.0, a in 0i64..20, da in 0i64..20) {
        let c = ratio(a, 10);
        let c2 = ratio(a + da, 10);
        let base = anatomy_count(x as f64, t, &c).unwrap().value;
        prop_assert!(anatomy_count(x as f64, t, &c2).unwrap().value <= base);
        prop_assert!(anatomy_count(x as f64, t + dt, &c).unwrap().value <= base);
    }

    #[test]
    fn partition_is_total(vals in prop::collection::vec(0i64..=12, 40), delta in 0.001f64..0.2) {
        let big_n = vals.len() as u64;
        let psi = SupportFunction::from_pairs(vals.iter().enumerate().map(|(i, &k)| (i as u64 + 1, ratio(k, 24)))).unwrap();
        let cls = PairClassifier::new(&psi, big_n, delta).unwrap();
        let labels = cls.classify_all();
        prop_assert_eq!(labels.len() as u64, big_n * big_n);
        for ((n, m), label) in labels {
            prop_assert_eq!(label.e == ELabel::E1, n == m);
            if label.e == ELabel::E5 {
                prop_assert!(!label.f.is_empty());
            }
        }
    }

    #[test]
    fn e5_quantities_carry_an_f_label(d in 1u64..10_000_000, l1 in 0u64..100, l2 in 0u64..100, l3 in 0u64..400, mass in 1u64..1_000_000, delta in 0.001f64..0.2) {
        let q = QuantityInput {
            equal: false,
            d: int(d) + ratio(1, 3),
            psi_mass: int(mass),
            l_psi: ratio(l1 as i64, 10),
            l_f_delta: ratio(l2 as i64, 10),
            l_sqrt_d: ratio(l3 as i64, 20),
            delta,
        };
        let label = classify_quantities(&q);
        if label.e == ELabel::E5 {
            prop_assert!(!label.f.is_empty());
        }
    }
}
