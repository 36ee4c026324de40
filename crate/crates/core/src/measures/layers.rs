use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{mu_pairs, mu_point, MeasureError, PairSet};
use crate::arith::{is_prime, valuation, MultiplicativeWeight};
use crate::rational::{self, Rational};

/// Normalized mass of an edge set split by exact `p`-adic valuations:
/// `m(i, j)` for `p^i || v`, `p^j || w`, with marginals `alpha_i`, `beta_j`.
/// Absent indices are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureMatrix {
    prime: u64,
    entries: BTreeMap<(u32, u32), Rational>,
    alpha: BTreeMap<u32, Rational>,
    beta: BTreeMap<u32, Rational>,
    /// `mu(E)`, kept so entries can be turned back into raw masses.
    total: Option<Rational>,
}

fn sum_is_one(values: impl Iterator<Item = Rational>) -> bool {
    rational::sum(values) == Rational::one()
}

impl MeasureMatrix {
    /// Validated construction: nonnegative entries, each family summing to 1.
    pub fn new(
        prime: u64,
        entries: BTreeMap<(u32, u32), Rational>,
        alpha: BTreeMap<u32, Rational>,
        beta: BTreeMap<u32, Rational>,
    ) -> Result<Self, MeasureError> {
        Self::with_total(prime, entries, alpha, beta, None)
    }

    pub(crate) fn with_total(
        prime: u64,
        entries: BTreeMap<(u32, u32), Rational>,
        alpha: BTreeMap<u32, Rational>,
        beta: BTreeMap<u32, Rational>,
        total: Option<Rational>,
    ) -> Result<Self, MeasureError> {
        let bad = |what: &str| Err(MeasureError::InvalidMatrix(what.to_string()));
        if !is_prime(prime) {
            return Err(MeasureError::NotPrime(prime));
        }
        let negative = entries.values().chain(alpha.values()).chain(beta.values());
        if negative.into_iter().any(|x| x.is_negative()) {
            return bad("negative mass");
        }
        if !sum_is_one(entries.values().cloned()) {
            return bad("entries do not sum to 1");
        }
        if !sum_is_one(alpha.values().cloned()) {
            return bad("alpha does not sum to 1");
        }
        if !sum_is_one(beta.values().cloned()) {
            return bad("beta does not sum to 1");
        }
        if matches!(&total, Some(t) if !t.is_positive()) {
            return bad("total mass must be positive");
        }
        let strip = |m: BTreeMap<u32, Rational>| m.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Self {
            prime,
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
            alpha: strip(alpha),
            beta: strip(beta),
            total,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.entries
    }

    pub fn m(&self, i: u32, j: u32) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn alpha(&self, i: u32) -> Rational {
        self.alpha.get(&i).cloned().unwrap_or_default()
    }

    pub fn beta(&self, j: u32) -> Rational {
        self.beta.get(&j).cloned().unwrap_or_default()
    }

    pub fn alphas(&self) -> &BTreeMap<u32, Rational> {
        &self.alpha
    }

    pub fn betas(&self) -> &BTreeMap<u32, Rational> {
        &self.beta
    }

    pub fn total(&self) -> Option<&Rational> {
        self.total.as_ref()
    }
}

/// Layers `V_i = {v ∈ supp psi : p^i || v}` and `W_j` likewise over
/// `supp theta`; `m(i, j) = mu(E ∩ (V_i x W_j)) / mu(E)`.
pub fn layer_matrix(
    e: &PairSet,
    f: &MultiplicativeWeight,
    g: &MultiplicativeWeight,
    p: u64,
) -> Result<MeasureMatrix, MeasureError> {
    if !is_prime(p) {
        return Err(MeasureError::NotPrime(p));
    }
    let total = mu_pairs(e, f, g);
    if total.is_zero() {
        return Err(MeasureError::ZeroMeasure);
    }
    let layered = |sf: &crate::intervals::SupportFunction, h: &MultiplicativeWeight| {
        let mut layers: BTreeMap<u32, Vec<Rational>> = BTreeMap::new();
        for (v, _) in sf.iter() {
            layers.entry(valuation(v, p)).or_default().push(mu_point(sf, h, v));
        }
        let sums: BTreeMap<u32, Rational> = layers.into_iter().map(|(i, xs)| (i, rational::sum(xs))).collect();
        let whole = rational::sum(sums.values().cloned());
        (sums, whole)
    };
    let (alpha_raw, mu_v) = layered(e.psi(), f);
    let (beta_raw, mu_w) = layered(e.theta(), g);
    // mu(E) > 0 forces both marginal totals to be positive.
    let alpha = alpha_raw.into_iter().map(|(i, x)| (i, x / &mu_v)).collect();
    let beta = beta_raw.into_iter().map(|(j, x)| (j, x / &mu_w)).collect();

    let mut cells: BTreeMap<(u32, u32), Vec<Rational>> = BTreeMap::new();
    for &(v, w) in e.edges() {
        let mass = mu_point(e.psi(), f, v) * mu_point(e.theta(), g, w);
        cells
            .entry((valuation(v, p), valuation(w, p)))
            .or_default()
            .push(mass);
    }
    let entries = cells
        .into_iter()
        .map(|(ij, xs)| (ij, rational::sum(xs) / &total))
        .collect();
    MeasureMatrix::with_total(p, entries, alpha, beta, Some(total))
}
