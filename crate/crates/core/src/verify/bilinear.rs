use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::brackets::compare_exp;
use crate::arith::EpsilonParams;
use crate::measures::MeasureMatrix;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BilinearOutcome {
    pub violations: BTreeSet<(u32, u32)>,
    /// Cells the `e` bracket could not separate.
    pub indeterminate: BTreeSet<(u32, u32)>,
}

/// Cells with `m(i, j) > c1 p^{-|i-j|/q} (alpha_i beta_j e^{[i != j]})^{1/q'}`.
///
/// With `1/q = a/B` and `1/q' = b/B` in lowest common terms, both sides are
/// raised to the `B`-th power; the only irrational quantity left is `e^b`,
/// which is bracketed by rational Taylor bounds.
pub fn bilinear_bound_violations(m: &MeasureMatrix, eps: &EpsilonParams, c1: &Rational) -> BilinearOutcome {
    let inv_q = eps.inv_q();
    let inv_qp = eps.inv_q_prime();
    let big_b = inv_q.denom().lcm(inv_qp.denom());
    let a = (&inv_q * Rational::from_integer(big_b.clone())).to_integer();
    let b = (&inv_qp * Rational::from_integer(big_b.clone())).to_integer();
    let (big_b, a, b) = (
        big_b.to_u64().expect("small exponent denominator"),
        a.to_u64().expect("positive exponent"),
        b.to_u64().expect("positive exponent"),
    );
    let p = int(m.prime());
    let c1_b = rational::pow(c1, big_b);

    let mut out = BilinearOutcome::default();
    for (&(i, j), mij) in m.entries() {
        let ab = m.alpha(i) * m.beta(j);
        if !c1.is_positive() || ab.is_zero() {
            out.violations.insert((i, j));
            continue;
        }
        let d = i.abs_diff(j) as u64;
        // m^B <= c1^B p^{-a d} (alpha beta)^b e^{b [i != j]}
        let core = &c1_b * rational::pow(&ab, b) / rational::pow(&p, a * d);
        let lhs = rational::pow(mij, big_b);
        if i == j {
            if lhs > core {
                out.violations.insert((i, j));
            }
            continue;
        }
        match compare_exp(&(lhs / core), b) {
            Some(Ordering::Greater) => {
                out.violations.insert((i, j));
            }
            Some(_) => {}
            None => {
                out.indeterminate.insert((i, j));
            }
        }
    }
    out
}
