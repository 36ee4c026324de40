use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed, Zero};

use super::sieve::{factorize, Factorization};
use crate::rational::{int, Rational};

type PrimePowerRule = dyn Fn(u64, u32) -> Rational + Send + Sync;

/// A non-negative multiplicative function, determined by its values on prime
/// powers. `f(1) = 1` always; `f(p^0)` is never consulted.
pub struct MultiplicativeWeight {
    name: String,
    rule: Arc<PrimePowerRule>,
    memo: RwLock<HashMap<(u64, u32), Rational>>,
    admissible_up_to: AtomicU64,
}

impl MultiplicativeWeight {
    /// `rule(p, k)` gives `f(p^k)` for `k >= 1`. It must be non-negative.
    pub fn from_prime_powers<F>(name: impl Into<String>, rule: F) -> Self
    where
        F: Fn(u64, u32) -> Rational + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
            memo: RwLock::new(HashMap::new()),
            admissible_up_to: AtomicU64::new(0),
        }
    }

    /// Euler's totient.
    pub fn totient() -> Self {
        Self::from_prime_powers("phi", |p, k| int((p - 1) * p.pow(k - 1)))
    }

    /// `f(n) = n`.
    pub fn identity() -> Self {
        Self::from_prime_powers("id", |p, k| int(p.pow(k)))
    }

    /// The constant function `1`.
    pub fn constant_one() -> Self {
        Self::from_prime_powers("one", |_, _| Rational::one())
    }

    /// `f(1) = 1`, `f(n) = 0` for `n > 1`.
    pub fn unit() -> Self {
        Self::from_prime_powers("unit", |_, _| Rational::zero())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f(p^k)`.
    ///
    /// # Panics
    /// If the rule yields a negative value.
    pub fn at_prime_power(&self, p: u64, k: u32) -> Rational {
        if k == 0 {
            return Rational::one();
        }
        if let Some(v) = self.memo.read().unwrap().get(&(p, k)) {
            return v.clone();
        }
        let v = (self.rule)(p, k);
        assert!(
            !v.is_negative(),
            "multiplicative weight `{}` is negative at {p}^{k}",
            self.name
        );
        self.memo.write().unwrap().insert((p, k), v.clone());
        v
    }

    pub fn eval_factored(&self, f: &Factorization) -> Rational {
        f.iter()
            .fold(Rational::one(), |acc, (p, k)| acc * self.at_prime_power(p, k))
    }

    pub fn eval(&self, n: u64) -> Rational {
        assert!(n >= 1, "multiplicative weight evaluated at 0");
        if n == 1 {
            return Rational::one();
        }
        self.eval_factored(&factorize(n))
    }

    /// `(1 * f)(n)` through the Euler product `prod_{p^k || n} sum_{j<=k} f(p^j)`.
    pub fn divisor_sum(&self, n: u64) -> Rational {
        factorize(n).iter().fold(Rational::one(), |acc, (p, k)| {
            let local: Rational = (0..=k).map(|j| self.at_prime_power(p, j)).sum();
            acc * local
        })
    }

    /// Largest `n` for which `(1 * f)(m) <= m` has been certified for all
    /// `m <= n`; zero when nothing has been certified.
    pub fn admissible_up_to(&self) -> u64 {
        self.admissible_up_to.load(Ordering::Relaxed)
    }

    fn record_admissible(&self, limit: u64) {
        self.admissible_up_to.fetch_max(limit, Ordering::Relaxed);
    }
}

impl Clone for MultiplicativeWeight {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            rule: Arc::clone(&self.rule),
            memo: RwLock::new(self.memo.read().unwrap().clone()),
            admissible_up_to: AtomicU64::new(self.admissible_up_to()),
        }
    }
}

impl fmt::Debug for MultiplicativeWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeWeight")
            .field("name", &self.name)
            .field("admissible_up_to", &self.admissible_up_to())
            .finish()
    }
}

/// `(f * g)(n) = sum_{d | n} f(d) g(n/d)`.
pub fn dirichlet_convolve(f: &MultiplicativeWeight, g: &MultiplicativeWeight, n: u64) -> Rational {
    let fact = factorize(n);
    fact.divisors()
        .into_iter()
        .map(|d| f.eval(d) * g.eval(n / d))
        .sum()
}

/// Outcome of [`certify_admissible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub holds: bool,
    pub limit: u64,
    /// First `n` with `(1 * f)(n) > n`, with that value.
    pub witness: Option<(u64, Rational)>,
}

/// Checks `(1 * f)(n) <= n` for every `n <= limit`. On success the weight
/// remembers the certified range.
pub fn certify_admissible(f: &MultiplicativeWeight, limit: u64) -> Admissibility {
    certify_from(f, 1, limit)
}

fn certify_from(f: &MultiplicativeWeight, start: u64, limit: u64) -> Admissibility {
    for n in start..=limit {
        let value = f.divisor_sum(n);
        if value > int(n) {
            return Admissibility {
                holds: false,
                limit,
                witness: Some((n, value)),
            };
        }
    }
    f.record_admissible(limit);
    Admissibility {
        holds: true,
        limit,
        witness: None,
    }
}

/// Extends the certified range to `limit`, checking only the new part.
pub fn ensure_admissible(f: &MultiplicativeWeight, limit: u64) -> Admissibility {
    let done = f.admissible_up_to();
    if done >= limit {
        return Admissibility {
            holds: true,
            limit,
            witness: None,
        };
    }
    certify_from(f, done + 1, limit)
}
