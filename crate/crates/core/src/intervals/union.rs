use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::rational::{self, Rational};

/// Closed interval `[lo, hi]` with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval with lo > hi");
        Self { lo, hi }
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Endpoints rescaled to a common integer denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Scaled {
    scale: u64,
    ends: Vec<(u64, u64)>,
}

/// Finite union of closed intervals in `[0, 1]`, kept canonical: sorted,
/// pairwise disjoint, touching pieces merged, zero-length pieces dropped.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
    scaled: Option<Scaled>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn unit() -> Self {
        Self::from_intervals(vec![Interval::new(Rational::zero(), rational::int(1))])
    }

    /// Clips every piece to `[0, 1]` and canonicalizes.
    pub fn from_intervals(mut pieces: Vec<Interval>) -> Self {
        let zero = Rational::zero();
        let one = rational::int(1);
        for iv in pieces.iter_mut() {
            if iv.lo < zero {
                iv.lo = zero.clone();
            }
            if iv.hi > one {
                iv.hi = one.clone();
            }
        }
        pieces.retain(|iv| iv.lo < iv.hi);
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(pieces.len());
        for iv in pieces {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        Self::from_canonical(merged)
    }

    /// Input already sorted, disjoint and merged; only the integer view is built.
    pub(crate) fn from_canonical(intervals: Vec<Interval>) -> Self {
        let scaled = build_scaled(&intervals);
        Self { intervals, scaled }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn measure(&self) -> Rational {
        rational::sum(self.intervals.iter().map(Interval::len))
    }

    /// Whether `x` lies in the union.
    pub fn contains_point(&self, x: &Rational) -> bool {
        let i = self.intervals.partition_point(|iv| iv.hi < *x);
        i < self.intervals.len() && self.intervals[i].lo <= *x
    }

    /// Set containment `other ⊆ self`.
    pub fn contains(&self, other: &IntervalUnion) -> bool {
        other.intervals.iter().all(|iv| {
            let i = self.intervals.partition_point(|s| s.hi < iv.lo);
            i < self.intervals.len() && self.intervals[i].contains_interval(iv)
        })
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if a[i].lo >= b[j].lo { &a[i].lo } else { &b[j].lo };
            let hi = if a[i].hi <= b[j].hi { &a[i].hi } else { &b[j].hi };
            if lo < hi {
                out.push(Interval::new(lo.clone(), hi.clone()));
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalUnion::from_canonical(out)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        IntervalUnion::from_intervals(all)
    }

    /// `λ(self ∩ other)`, through the integer view when both sides have one.
    pub fn intersect_measure(&self, other: &IntervalUnion) -> Rational {
        if let (Some(a), Some(b)) = (&self.scaled, &other.scaled) {
            if let Some(m) = scaled_intersect_measure(a, b) {
                return m;
            }
        }
        self.intersect(other).measure()
    }
}

fn build_scaled(intervals: &[Interval]) -> Option<Scaled> {
    let mut scale: u64 = 1;
    for iv in intervals {
        for e in [&iv.lo, &iv.hi] {
            let d = e.denom().to_u64()?;
            let g = scale.gcd(&d);
            scale = scale.checked_mul(d / g)?;
        }
    }
    let big_scale = BigInt::from(scale);
    let to_num = |e: &Rational| -> Option<u64> { (e.numer() * &big_scale / e.denom()).to_u64() };
    let ends = intervals
        .iter()
        .map(|iv| Some((to_num(&iv.lo)?, to_num(&iv.hi)?)))
        .collect::<Option<Vec<_>>>()?;
    Some(Scaled { scale, ends })
}

fn scaled_intersect_measure(a: &Scaled, b: &Scaled) -> Option<Rational> {
    let g = a.scale.gcd(&b.scale);
    let l = (a.scale as u128).checked_mul((b.scale / g) as u128)?;
    let fa = l / a.scale as u128;
    let fb = l / b.scale as u128;
    let (mut i, mut j) = (0, 0);
    let mut total: u128 = 0;
    while i < a.ends.len() && j < b.ends.len() {
        let (alo, ahi) = (a.ends[i].0 as u128 * fa, a.ends[i].1 as u128 * fa);
        let (blo, bhi) = (b.ends[j].0 as u128 * fb, b.ends[j].1 as u128 * fb);
        let lo = alo.max(blo);
        let hi = ahi.min(bhi);
        if lo < hi {
            total += hi - lo;
        }
        if ahi < bhi {
            i += 1;
        } else {
            j += 1;
        }
    }
    Some(Rational::new(BigInt::from(total), BigInt::from(l)))
}

/// `λ(u_1 ∪ ... ∪ u_k)` by a single sort-and-sweep.
pub fn union_measure(us: &[IntervalUnion]) -> Rational {
    let all: Vec<Interval> = us.iter().flat_map(|u| u.intervals.iter().cloned()).collect();
    IntervalUnion::from_intervals(all).measure()
}

pub fn measure(u: &IntervalUnion) -> Rational {
    u.measure()
}

pub fn intersect_measure(u1: &IntervalUnion, u2: &IntervalUnion) -> Rational {
    u1.intersect_measure(u2)
}
