use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;

/// Sieve limit used by [`Sieve::global`].
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Prime factorization of a positive integer. The empty map is `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    entries: BTreeMap<u64, u32>,
}

impl Factorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from `(prime, exponent)` pairs. Zero exponents
    /// are dropped; primality of the keys is the caller's responsibility.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u32)>>(pairs: I) -> Self {
        let mut entries = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *entries.entry(p).or_insert(0) += e;
            }
        }
        Self { entries }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.entries.iter().map(|(&p, &e)| (p, e))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.entries.get(&p).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.entries.values().all(|&e| e == 1)
    }

    pub fn value(&self) -> BigUint {
        self.iter()
            .fold(BigUint::from(1u32), |acc, (p, e)| acc * BigUint::from(p).pow(e))
    }

    /// The value as `u64`, or `None` on overflow.
    pub fn value_u64(&self) -> Option<u64> {
        self.iter().try_fold(1u64, |acc, (p, e)| {
            p.checked_pow(e).and_then(|pe| acc.checked_mul(pe))
        })
    }

    /// Number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.entries.values().map(|&e| e as u64 + 1).product()
    }

    /// All divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, e) in self.iter() {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Smallest-prime-factor table with a prime list, built once and read-only
/// afterwards.
#[derive(Debug)]
pub struct Sieve {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl Sieve {
    /// Linear sieve over `[0, limit]`.
    pub fn new(limit: u64) -> Self {
        let limit = limit.max(2);
        assert!(limit < u32::MAX as u64, "sieve limit must fit in u32");
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let si = spf[i] as u64;
            for &p in &primes {
                if p > si {
                    break;
                }
                let ip = i as u64 * p;
                if ip > limit {
                    break;
                }
                spf[ip as usize] = p as u32;
            }
        }
        Self { limit, spf, primes }
    }

    /// Process-wide sieve up to [`DEFAULT_SIEVE_LIMIT`].
    pub fn global() -> &'static Sieve {
        static GLOBAL: OnceLock<Sieve> = OnceLock::new();
        GLOBAL.get_or_init(|| Sieve::new(DEFAULT_SIEVE_LIMIT))
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p <= x` known to the table.
    pub fn primes_up_to(&self, x: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= x);
        &self.primes[..end]
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n <= self.limit {
            return self.spf[n as usize] as u64 == n;
        }
        self.smallest_factor_above_table(n) == n
    }

    /// Smallest prime factor; `n` itself for primes, `1` for `n = 1`.
    pub fn smallest_prime_factor(&self, n: u64) -> u64 {
        assert!(n >= 1, "smallest_prime_factor of 0");
        if n == 1 {
            return 1;
        }
        if n <= self.limit {
            return self.spf[n as usize] as u64;
        }
        self.smallest_factor_above_table(n)
    }

    fn smallest_factor_above_table(&self, n: u64) -> u64 {
        for &p in &self.primes {
            if p.saturating_mul(p) > n {
                return n;
            }
            if n % p == 0 {
                return p;
            }
        }
        // Trial division past the table.
        let mut d = self.limit + 1;
        if d % 2 == 0 {
            d += 1;
        }
        while d.saturating_mul(d) <= n {
            if n % d == 0 {
                return d;
            }
            d += 2;
        }
        n
    }

    pub fn factorize(&self, n: u64) -> Factorization {
        assert!(n >= 1, "factorize(0)");
        let mut entries = BTreeMap::new();
        let mut m = n;
        while m > 1 {
            let p = self.smallest_prime_factor(m);
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            entries.insert(p, e);
        }
        Factorization { entries }
    }

    /// Distinct prime divisors in increasing order.
    pub fn prime_divisors(&self, n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.smallest_prime_factor(m);
            while m % p == 0 {
                m /= p;
            }
            out.push(p);
        }
        out
    }

    /// `phi(0..=n)` in one pass.
    pub fn phi_table(&self, n: u64) -> Vec<u64> {
        let mut phi: Vec<u64> = (0..=n).collect();
        for p in 2..=n {
            if phi[p as usize] == p {
                let mut k = p;
                while k <= n {
                    phi[k as usize] -= phi[k as usize] / p;
                    k += p;
                }
            }
        }
        phi
    }
}

pub fn factorize(n: u64) -> Factorization {
    Sieve::global().factorize(n)
}

pub fn is_prime(n: u64) -> bool {
    Sieve::global().is_prime(n)
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// `nu_p(n)`, the exponent of `p` in `n >= 1`.
pub fn valuation(n: u64, p: u64) -> u32 {
    let mut m = n;
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn trial_division(mut n: u64) -> BTreeMap<u64, u32> {
        let mut out = BTreeMap::new();
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                *out.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            *out.entry(n).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).is_one());
        assert_eq!(factorize(97).iter().collect::<Vec<_>>(), vec![(97, 1)]);
        assert_eq!(
            factorize(360).iter().collect::<Vec<_>>(),
            vec![(2, 3), (3, 2), (5, 1)]
        );
    }

    #[test]
    fn factorize_matches_trial_division() {
        let sieve = Sieve::new(1000);
        for n in 1..5000u64 {
            let f = sieve.factorize(n);
            assert_eq!(f.entries, trial_division(n), "n = {n}");
            assert_eq!(f.value_u64(), Some(n));
        }
        // Above the table: fallback path.
        for n in [1_000_003u64 * 999_983, 2 * 1_000_003, 1_000_003u64.pow(2)] {
            assert_eq!(sieve.factorize(n).entries, trial_division(n));
        }
    }

    #[test]
    fn phi_matches_gcd_count() {
        for n in 1..=10_000u64 {
            let oracle = (1..=n).filter(|&a| a.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), oracle, "n = {n}");
        }
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(10), 4);
        assert_eq!(euler_phi(8), 4);
    }

    #[test]
    fn phi_table_agrees() {
        let table = Sieve::global().phi_table(3000);
        for n in 1..=3000 {
            assert_eq!(table[n as usize], euler_phi(n));
        }
    }

    #[test]
    fn divisors_sorted_and_complete() {
        let f = factorize(360);
        let divs = f.divisors();
        assert_eq!(divs.len() as u64, f.divisor_count());
        assert_eq!(divs, (1..=360).filter(|d| 360 % d == 0).collect::<Vec<_>>());
    }
}
