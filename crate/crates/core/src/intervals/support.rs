use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::IntervalError;
use crate::rational::{self, Rational};

/// Finitely supported `n -> psi(n)` with values in `[0, 1/2]`. Zero values are
/// not stored, so the support is exactly the key set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupportFunction {
    values: BTreeMap<u64, Rational>,
}

fn half() -> Rational {
    rational::ratio(1, 2)
}

fn check(n: u64, v: &Rational) -> Result<(), IntervalError> {
    if n == 0 {
        return Err(IntervalError::ZeroIndex);
    }
    if v.is_negative() || *v > half() {
        return Err(IntervalError::PsiOutOfRange {
            n,
            value: rational::format(v),
        });
    }
    Ok(())
}

impl SupportFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u64, Rational)>>(pairs: I) -> Result<Self, IntervalError> {
        let mut values = BTreeMap::new();
        for (n, v) in pairs {
            check(n, &v)?;
            if v.is_zero() {
                values.remove(&n);
            } else {
                values.insert(n, v);
            }
        }
        Ok(Self { values })
    }

    /// `psi(n) = value` for `lo <= n <= hi`.
    pub fn constant(value: Rational, lo: u64, hi: u64) -> Result<Self, IntervalError> {
        Self::from_pairs((lo.max(1)..=hi).map(|n| (n, value.clone())))
    }

    /// `psi(n) = c / n` for `lo <= n <= hi`.
    pub fn inverse(c: Rational, lo: u64, hi: u64) -> Result<Self, IntervalError> {
        Self::from_pairs((lo.max(1)..=hi).map(|n| (n, &c / rational::int(n))))
    }

    pub fn get(&self, n: u64) -> Rational {
        self.values.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn get_ref(&self, n: u64) -> Option<&Rational> {
        self.values.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &Rational)> + '_ {
        self.values.iter().map(|(&n, v)| (n, v))
    }

    /// Support in increasing order.
    pub fn support(&self) -> Vec<u64> {
        self.values.keys().copied().collect()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.values.contains_key(&n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_index(&self) -> Option<u64> {
        self.values.keys().next_back().copied()
    }

    /// `1_{[x, y]} psi` for real bounds.
    pub fn restrict(&self, x: f64, y: f64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .filter(|(&n, _)| n as f64 >= x && n as f64 <= y)
                .map(|(&n, v)| (n, v.clone()))
                .collect(),
        }
    }

    /// `psi / t` for `t >= 1`.
    pub fn scale_down(&self, t: &Rational) -> Self {
        assert!(*t >= Rational::one(), "scale_down needs t >= 1");
        Self {
            values: self.values.iter().map(|(&n, v)| (n, v / t)).collect(),
        }
    }
}
