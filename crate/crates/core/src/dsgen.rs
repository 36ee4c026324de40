//! Finite blocks of the Duffin–Schaeffer counterexample: `N_k` is the product
//! of the primes in `[N0, N1)`, and `psi_k` lives on the divisors of `N_k`
//! (full variant) or on `N_k / p` (refined variant).

use num_traits::One;
use rayon::prelude::*;

use crate::arith::{euler_phi, factorize, primes_in_range, ratio_valuation};
use crate::intervals::{build_set, union_measure, IntervalError, Mode, SupportFunction};
use crate::measures::PairSet;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `psi(N/d) = eps/d` for every proper quotient `N/d`, `d | N`, `d != N`.
    Full,
    /// `psi(N/p) = eps/p` for primes `p | N`.
    Refined,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Self::Full),
            "refined" => Ok(Self::Refined),
            other => Err(format!("unknown variant `{other}` (expected full or refined)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DsError {
    #[error("no primes in [{0}, {1})")]
    EmptyRange(u64, u64),
    #[error("k must be positive")]
    ZeroK,
    #[error("N_k overflows 64 bits")]
    Overflow,
    #[error("too many primes ({0}) for the full divisor support")]
    TooManyDivisors(usize),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DsFamily {
    pub k: u32,
    pub n0: u64,
    pub n1: u64,
    pub modulus: u64,
    pub primes: Vec<u64>,
    pub eps_k: Rational,
    pub psi: SupportFunction,
    pub variant: Variant,
}

/// Block `k` with `eps_k = 2^{-k}`.
pub fn build_family(k: u32, n0: u64, n1: u64, variant: Variant) -> Result<DsFamily, DsError> {
    if k == 0 {
        return Err(DsError::ZeroK);
    }
    let eps = Rational::new(1.into(), num_bigint::BigInt::from(2).pow(k));
    build_family_with_eps(k, n0, n1, variant, eps)
}

/// Same construction with an arbitrary `eps_k`.
pub fn build_family_with_eps(
    k: u32,
    n0: u64,
    n1: u64,
    variant: Variant,
    eps_k: Rational,
) -> Result<DsFamily, DsError> {
    let primes = if n1 > n0 {
        primes_in_range(n0 as f64, (n1 - 1) as f64)
    } else {
        Vec::new()
    };
    if primes.is_empty() {
        return Err(DsError::EmptyRange(n0, n1));
    }
    let modulus = primes
        .iter()
        .try_fold(1u64, |acc, &p| acc.checked_mul(p))
        .ok_or(DsError::Overflow)?;
    let pairs: Vec<(u64, Rational)> = match variant {
        Variant::Full => {
            if primes.len() > 24 {
                return Err(DsError::TooManyDivisors(primes.len()));
            }
            factorize(modulus)
                .divisors()
                .into_iter()
                .filter(|&d| d != modulus)
                .map(|d| (modulus / d, &eps_k / int(d)))
                .collect()
        }
        Variant::Refined => primes.iter().map(|&p| (modulus / p, &eps_k / int(p))).collect(),
    };
    let psi = SupportFunction::from_pairs(pairs)?;
    Ok(DsFamily {
        k,
        n0,
        n1,
        modulus,
        primes,
        eps_k,
        psi,
        variant,
    })
}

impl DsFamily {
    /// `prod_{p | N_k} (1 + 1/p)`.
    pub fn mass(&self) -> Rational {
        self.primes
            .iter()
            .map(|&p| Rational::one() + Rational::new(1.into(), p.into()))
            .product()
    }

    /// Every ordered pair of support elements; `D <= eps_k` on all of them.
    pub fn to_pair_set(&self, diagonal: bool) -> PairSet {
        let support = self.psi.support();
        let edges = support
            .iter()
            .flat_map(|&v| support.iter().map(move |&w| (v, w)))
            .filter(|&(v, w)| diagonal || v != w);
        PairSet::new(edges, self.psi.clone(), self.psi.clone()).expect("pairs drawn from the support")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDiagnostics {
    /// `lambda(union of E_n)` from the interval engine.
    pub union_e: Rational,
    pub sum_e: Rational,
    pub sum_a: Rational,
    /// `2 eps_k` for the full variant; no closed form for the refined one.
    pub closed_union_e: Option<Rational>,
    pub closed_sum_e: Rational,
    pub closed_sum_a: Rational,
    pub mass: Rational,
    /// Interval-engine values equal the closed forms.
    pub consistent: bool,
}

pub fn family_diagnostics(fam: &DsFamily) -> Result<FamilyDiagnostics, DsError> {
    let entries: Vec<(u64, Rational)> = fam.psi.iter().map(|(n, v)| (n, v.clone())).collect();
    let built: Vec<_> = entries
        .par_iter()
        .map(|(n, v)| Ok((build_set(*n, v, Mode::All)?, build_set(*n, v, Mode::Coprime)?)))
        .collect::<Result<_, IntervalError>>()?;
    let e_sets: Vec<_> = built.iter().map(|(e, _)| e.clone()).collect();
    let union_e = union_measure(&e_sets);
    let sum_e = rational::sum(built.iter().map(|(e, _)| e.measure()));
    let sum_a = rational::sum(built.iter().map(|(_, a)| a.measure()));

    let two_eps = int(2) * &fam.eps_k;
    let n = int(fam.modulus);
    let mass = fam.mass();
    let (closed_union_e, closed_sum_e, closed_sum_a) = match fam.variant {
        Variant::Full => (
            Some(two_eps.clone()),
            &two_eps * (&mass - n.recip()),
            &two_eps * (&n - int(1)) / &n,
        ),
        Variant::Refined => (
            None,
            &two_eps * rational::sum(fam.primes.iter().map(|&p| Rational::new(1.into(), p.into()))),
            &two_eps / &n * rational::sum(fam.primes.iter().map(|&p| int(euler_phi(fam.modulus / p)))),
        ),
    };
    let consistent = closed_union_e.as_ref().is_none_or(|u| *u == union_e)
        && closed_sum_e == sum_e
        && closed_sum_a == sum_a;
    Ok(FamilyDiagnostics {
        union_e,
        sum_e,
        sum_a,
        closed_union_e,
        closed_sum_e,
        closed_sum_a,
        mass,
        consistent,
    })
}

/// `|nu_p(v/N)| + |nu_p(w/N)| <= 1` for every prime and every pair of unequal
/// support elements; failing pairs `v < w` are returned in order.
pub fn valuation_structure(fam: &DsFamily) -> (bool, Vec<(u64, u64)>) {
    let support = fam.psi.support();
    let n = fam.modulus;
    let mut witnesses = Vec::new();
    for (i, &v) in support.iter().enumerate() {
        for &w in &support[i + 1..] {
            let bad = fam
                .primes
                .iter()
                .any(|&p| ratio_valuation(v, n, p).abs() + ratio_valuation(w, n, p).abs() > 1);
            if bad {
                witnesses.push((v, w));
            }
        }
    }
    (witnesses.is_empty(), witnesses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn full_block_k3() {
        let fam = build_family(3, 3, 8, Variant::Full).unwrap();
        assert_eq!(fam.modulus, 105);
        assert_eq!(fam.psi.support(), vec![3, 5, 7, 15, 21, 35, 105]);
        assert_eq!(fam.psi.get(105), ratio(1, 8));
        assert_eq!(fam.psi.get(21), ratio(1, 40));
        let d = family_diagnostics(&fam).unwrap();
        assert_eq!(d.union_e, ratio(1, 4));
        assert_eq!(d.sum_e, ratio(1, 4) * ratio(191, 105));
        assert_eq!(d.sum_a, ratio(26, 105));
        assert!(d.consistent);
        assert_eq!(d.mass, ratio(64, 35));
    }

    #[test]
    fn refined_block_k3() {
        let fam = build_family(3, 3, 8, Variant::Refined).unwrap();
        assert_eq!(fam.psi.support(), vec![15, 21, 35]);
        assert_eq!(fam.psi.get(35), ratio(1, 24));
        let d = family_diagnostics(&fam).unwrap();
        assert!(d.consistent);
        assert!(d.sum_a <= ratio(1, 4));
        assert!(valuation_structure(&fam).0);
    }

    #[test]
    fn full_block_breaks_valuations() {
        let fam = build_family(3, 3, 8, Variant::Full).unwrap();
        let (ok, witnesses) = valuation_structure(&fam);
        assert!(!ok);
        assert_eq!(witnesses[0], (3, 5));
    }

    #[test]
    fn errors_and_singletons() {
        assert_eq!(build_family(2, 3, 3, Variant::Full).unwrap_err(), DsError::EmptyRange(3, 3));
        assert_eq!(build_family(2, 24, 29, Variant::Full).unwrap_err(), DsError::EmptyRange(24, 29));
        assert_eq!(build_family(0, 3, 8, Variant::Full).unwrap_err(), DsError::ZeroK);
        let single = build_family(1, 5, 6, Variant::Refined).unwrap();
        assert_eq!(single.psi.support(), vec![1]);
        assert!(valuation_structure(&single).0);
        assert!(build_family(1, 2, 200, Variant::Refined).is_err());
    }

    #[test]
    fn full_variant_has_constant_psi_over_n() {
        let fam = build_family(4, 5, 20, Variant::Full).unwrap();
        let expect = &fam.eps_k / int(fam.modulus);
        for (n, v) in fam.psi.iter() {
            assert_eq!(v / int(n), expect);
        }
    }
}
