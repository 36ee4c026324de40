use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::VerifyError;
use crate::rational::{self, int, ratio, Rational};

/// Norm tolerance for `||x||_{q'} = 1`.
const NORM_TOL: f64 = 1e-9;
/// Relative slack when comparing `m(i, j)` with its float bound.
const CELL_TOL: f64 = 1e-12;

/// A finitely supported probability measure `m` on `Z^2` with the data of the
/// decay hypothesis: `m(i, i) <= c1 x_i y_i` and
/// `m(i, j) <= c1 C3 lambda^{|i-j|} x_i y_j` for `i != j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationInstance {
    pub m: BTreeMap<(i64, i64), Rational>,
    pub x: BTreeMap<i64, f64>,
    pub y: BTreeMap<i64, f64>,
    pub lambda: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub c3: f64,
    pub q: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationOutcome {
    /// Smallest index maximizing `x_i y_i`.
    pub k: i64,
    /// `sum over |i-k| + |j-k| >= 2` of `m(i, j)`.
    pub offdiag_mass: Rational,
    pub c1_bound_holds: bool,
    /// `c2 / (1 + (2 C3 - 1) lambda)`.
    pub c1_lower: Rational,
}

impl ConcentrationInstance {
    pub fn q_prime(&self) -> Rational {
        &self.q / (&self.q - Rational::one())
    }

    fn cell_bound(&self, i: i64, j: i64) -> f64 {
        let xi = self.x.get(&i).copied().unwrap_or(0.0);
        let yj = self.y.get(&j).copied().unwrap_or(0.0);
        let c1 = rational::to_f64(&self.c1);
        if i == j {
            c1 * xi * yj
        } else {
            let d = i.abs_diff(j) as i32;
            c1 * self.c3 * rational::to_f64(&self.lambda).powi(d) * xi * yj
        }
    }

    /// Checks the stated ranges, the normalizations and the pointwise decay
    /// hypothesis; the first failing cell is the witness.
    pub fn validate(&self) -> Result<(), VerifyError> {
        let bad = |s: &str| Err(VerifyError::InvalidInstance(s.to_string()));
        if self.q <= int(2) {
            return bad("q must exceed 2");
        }
        if self.c1 > Rational::one() {
            return bad("c1 must be at most 1");
        }
        if !self.c2.is_positive() || self.c2 >= Rational::one() {
            return bad("c2 must lie in (0, 1)");
        }
        if !self.lambda.is_positive() || self.lambda > Rational::one() - &self.c2 {
            return bad("lambda must lie in (0, 1 - c2]");
        }
        if !(self.c3 > 0.0 && self.c3.is_finite()) {
            return bad("C3 must be positive");
        }
        if self.m.values().any(|v| v.is_negative()) {
            return bad("m has a negative cell");
        }
        if rational::sum(self.m.values().cloned()) != Rational::one() {
            return bad("m does not sum to 1");
        }
        let qp = rational::to_f64(&self.q_prime());
        for (name, seq) in [("x", &self.x), ("y", &self.y)] {
            if seq.values().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return Err(VerifyError::InvalidInstance(format!("{name} has a negative entry")));
            }
            let norm = seq.values().map(|v| v.powf(qp)).sum::<f64>().powf(1.0 / qp);
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(VerifyError::InvalidInstance(format!("||{name}||_q' = {norm}")));
            }
        }
        for (&(i, j), mij) in &self.m {
            if mij.is_zero() {
                continue;
            }
            let mf = rational::to_f64(mij);
            let bound = self.cell_bound(i, j);
            if mf > bound * (1.0 + CELL_TOL) {
                return Err(VerifyError::HypothesisViolated { i, j, m: mf, bound });
            }
        }
        Ok(())
    }
}

pub fn concentration_check(inst: &ConcentrationInstance) -> Result<ConcentrationOutcome, VerifyError> {
    inst.validate()?;
    let indices: BTreeSet<i64> = inst.x.keys().chain(inst.y.keys()).copied().collect();
    let mut k = None;
    let mut best = f64::NEG_INFINITY;
    for &i in &indices {
        let v = inst.x.get(&i).copied().unwrap_or(0.0) * inst.y.get(&i).copied().unwrap_or(0.0);
        if v > best {
            best = v;
            k = Some(i);
        }
    }
    let k = k.ok_or_else(|| VerifyError::InvalidInstance("empty sequences".into()))?;
    let offdiag_mass = rational::sum(
        inst.m
            .iter()
            .filter(|(&(i, j), _)| i.abs_diff(k) + j.abs_diff(k) >= 2)
            .map(|(_, v)| v.clone()),
    );
    let c3 = rational::from_f64(inst.c3);
    let denom = Rational::one() + (int(2) * c3 - Rational::one()) * &inst.lambda;
    let c1_lower = &inst.c2 / denom;
    Ok(ConcentrationOutcome {
        k,
        offdiag_mass,
        c1_bound_holds: inst.c1 >= c1_lower,
        c1_lower,
    })
}

fn unit_vector<R: Rng>(rng: &mut R, len: usize, qp: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
    let norm = raw.iter().map(|v| v.powf(qp)).sum::<f64>().powf(1.0 / qp);
    raw.into_iter().map(|v| v / norm).collect()
}

/// Draws a valid instance: `m` proportional to the hypothesis bound times
/// random weights, with `c1` the smallest 1e-9-grid value that makes the
/// hypothesis hold. Draws with `c1 > 1` are rejected and redrawn.
pub fn random_instance<R: Rng>(rng: &mut R) -> ConcentrationInstance {
    const GRID: u64 = 1_000_000_000;
    loop {
        let q = [ratio(5, 2), int(3), int(4), int(6)][rng.gen_range(0..4)].clone();
        let qp = rational::to_f64(&(&q / (&q - Rational::one())));
        let len = rng.gen_range(1..=6usize);
        let offset = rng.gen_range(-3..=3i64);
        let xs = unit_vector(rng, len, qp);
        let ys = unit_vector(rng, len, qp);
        let c2 = ratio(rng.gen_range(1..20), 20);
        let lambda = (Rational::one() - &c2) * ratio(rng.gen_range(1..=10), 10);
        let c3 = rng.gen_range(0.1..3.0);
        let lf = rational::to_f64(&lambda);

        let mut cells = BTreeMap::new();
        let mut shape = Vec::new();
        for i in 0..len {
            for j in 0..len {
                let base = xs[i] * ys[j] * if i == j { 1.0 } else { c3 * lf.powi(i.abs_diff(j) as i32) };
                let w = base * rng.gen_range(0.5..1.0);
                let units = (w * 1e12).round() as u64;
                if units > 0 {
                    cells.insert((i as i64 + offset, j as i64 + offset), units);
                    shape.push((i, j, base));
                }
            }
        }
        let total: u64 = cells.values().sum();
        if total == 0 {
            continue;
        }
        let m: BTreeMap<(i64, i64), Rational> = cells
            .iter()
            .map(|(&ij, &u)| (ij, Rational::new(u.into(), total.into())))
            .collect();
        let worst = shape
            .iter()
            .zip(m.values())
            .map(|(&(_, _, base), v)| rational::to_f64(v) / base)
            .fold(0.0, f64::max);
        let c1_units = (worst * (1.0 + 1e-9) * GRID as f64).ceil();
        if c1_units > GRID as f64 {
            continue;
        }
        let c1 = Rational::new((c1_units.to_u64().unwrap()).into(), GRID.into());
        let shift = |v: Vec<f64>| {
            v.into_iter()
                .enumerate()
                .map(|(i, x)| (i as i64 + offset, x))
                .collect::<BTreeMap<_, _>>()
        };
        let inst = ConcentrationInstance {
            m,
            x: shift(xs),
            y: shift(ys),
            lambda,
            c1,
            c2,
            c3,
            q,
        };
        if inst.validate().is_ok() {
            return inst;
        }
    }
}
