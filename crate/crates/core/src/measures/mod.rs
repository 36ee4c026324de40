//! Weighted measures on integers and on pair sets, edge sets cut out by the
//! gcd condition `D <= 1` and an anatomy threshold, and the `p`-adic layer
//! matrix of an edge set.

mod edges;
pub mod jsonl;
mod layers;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;

use crate::arith::MultiplicativeWeight;
use crate::intervals::SupportFunction;
use crate::rational::{self, Rational};

pub use edges::{anatomy_at_least, build_edge_set, build_scaled_edge_set, edge_condition};
pub use layers::{layer_matrix, MeasureMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("edge ({v}, {w}) leaves supp psi x supp theta")]
    EdgeOutsideSupport { v: u64, w: u64 },
    #[error("edge set has zero measure")]
    ZeroMeasure,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid measure matrix: {0}")]
    InvalidMatrix(String),
}

/// Finite set of pairs `(v, w)` with `v ∈ supp psi`, `w ∈ supp theta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSet {
    edges: BTreeSet<(u64, u64)>,
    psi: SupportFunction,
    theta: SupportFunction,
}

impl PairSet {
    pub fn new<I: IntoIterator<Item = (u64, u64)>>(
        edges: I,
        psi: SupportFunction,
        theta: SupportFunction,
    ) -> Result<Self, MeasureError> {
        let edges: BTreeSet<(u64, u64)> = edges.into_iter().collect();
        if let Some(&(v, w)) = edges
            .iter()
            .find(|&&(v, w)| !psi.contains(v) || !theta.contains(w))
        {
            return Err(MeasureError::EdgeOutsideSupport { v, w });
        }
        Ok(Self { edges, psi, theta })
    }

    /// `supp psi x supp theta`.
    pub fn complete(psi: SupportFunction, theta: SupportFunction) -> Self {
        let edges = psi
            .support()
            .into_iter()
            .flat_map(|v| theta.support().into_iter().map(move |w| (v, w)))
            .collect();
        Self { edges, psi, theta }
    }

    pub fn empty(psi: SupportFunction, theta: SupportFunction) -> Self {
        Self {
            edges: BTreeSet::new(),
            psi,
            theta,
        }
    }

    pub fn edges(&self) -> &BTreeSet<(u64, u64)> {
        &self.edges
    }

    pub fn psi(&self) -> &SupportFunction {
        &self.psi
    }

    pub fn theta(&self) -> &SupportFunction {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, v: u64, w: u64) -> bool {
        self.edges.contains(&(v, w))
    }

    /// `E|_V`.
    pub fn left_vertices(&self) -> BTreeSet<u64> {
        self.edges.iter().map(|&(v, _)| v).collect()
    }

    /// `E|_W`.
    pub fn right_vertices(&self) -> BTreeSet<u64> {
        self.edges.iter().map(|&(_, w)| w).collect()
    }

    /// Same weights, edges filtered.
    pub fn filter<F: Fn(u64, u64) -> bool>(&self, keep: F) -> Self {
        Self {
            edges: self.edges.iter().copied().filter(|&(v, w)| keep(v, w)).collect(),
            psi: self.psi.clone(),
            theta: self.theta.clone(),
        }
    }

    /// Edges grouped by their left vertex.
    pub fn by_left(&self) -> BTreeMap<u64, Vec<u64>> {
        let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(v, w) in &self.edges {
            out.entry(v).or_default().push(w);
        }
        out
    }

    pub fn by_right(&self) -> BTreeMap<u64, Vec<u64>> {
        let mut out: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &(v, w) in &self.edges {
            out.entry(w).or_default().push(v);
        }
        out
    }
}

/// `Γ_E(v) = {w : (v, w) ∈ E}`.
pub fn neighborhood(e: &PairSet, v: u64) -> BTreeSet<u64> {
    e.edges.range((v, 0)..=(v, u64::MAX)).map(|&(_, w)| w).collect()
}

/// `{v : (v, w) ∈ E}`.
pub fn neighborhood_right(e: &PairSet, w: u64) -> BTreeSet<u64> {
    e.edges.iter().filter(|&&(_, x)| x == w).map(|&(v, _)| v).collect()
}

/// `f(v) psi(v) / v`.
pub fn mu_point(psi: &SupportFunction, f: &MultiplicativeWeight, v: u64) -> Rational {
    match psi.get_ref(v) {
        Some(p) => f.eval(v) * p / rational::int(v),
        None => Rational::default(),
    }
}

pub fn mu_set<I: IntoIterator<Item = u64>>(psi: &SupportFunction, f: &MultiplicativeWeight, vs: I) -> Rational {
    rational::sum(vs.into_iter().map(|v| mu_point(psi, f, v)))
}

/// `sum over (v, w) ∈ E of mu_psi(v) mu_theta(w)`.
///
/// Right weights are brought to one common denominator so each row sum is a
/// plain integer addition; only the final quotient is reduced.
pub fn mu_pairs(e: &PairSet, f: &MultiplicativeWeight, g: &MultiplicativeWeight) -> Rational {
    if e.is_empty() {
        return Rational::default();
    }
    let rights = e.right_vertices();
    let weights: BTreeMap<u64, Rational> = rights.iter().map(|&w| (w, mu_point(&e.theta, g, w))).collect();
    let common = weights.values().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let numer: BTreeMap<u64, BigInt> = weights
        .iter()
        .map(|(&w, r)| (w, r.numer() * (&common / r.denom())))
        .collect();
    let terms: Vec<Rational> = e
        .by_left()
        .into_par_iter()
        .map(|(v, ws)| {
            let inner: BigInt = ws.iter().map(|w| &numer[w]).sum();
            mu_point(&e.psi, f, v) * Rational::from_integer(inner)
        })
        .collect();
    rational::sum(terms) / Rational::from_integer(common)
}
