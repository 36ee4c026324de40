use num_bigint::BigUint;
use num_traits::{One, Signed};

use super::VerifyError;
use crate::arith::{ensure_admissible, factorize, primes_in_range, reciprocal_sum, MultiplicativeWeight, Sieve};
use crate::rational::{self, int, Rational};
use crate::report::{Quantity, RatioReport};

/// Default for the "sufficiently large" hypothesis `eps c log t / log log t`.
pub const DEFAULT_HYPOTHESIS_THRESHOLD: f64 = 10.0;

/// Largest prime range the witness and premise computations will sieve.
const RANGE_CAP: f64 = 1e7;

/// `sum_{p >= t} 1/p >= c` over the given distinct primes.
fn mass_at_least(primes: &[u64], t: f64, c: &Rational) -> bool {
    if !c.is_positive() {
        return true;
    }
    let big: Vec<u64> = primes.iter().copied().filter(|&p| p as f64 >= t).collect();
    let approx: f64 = big.iter().map(|&p| 1.0 / p as f64).sum();
    let cf = rational::to_f64(c);
    if approx > cf * (1.0 + 1e-9) + 1e-12 {
        return true;
    }
    if approx < cf * (1.0 - 1e-9) - 1e-12 {
        return false;
    }
    reciprocal_sum(big) >= *c
}

/// `#{n <= x : sum_{p >= t, p | n} 1/p >= c}`.
pub fn count_with_mass_at_least(x: u64, t: f64, c: &Rational) -> u64 {
    if !c.is_positive() {
        return x;
    }
    let sieve = Sieve::global();
    (1..=x)
        .filter(|&n| mass_at_least(&sieve.prime_divisors(n), t, c))
        .count() as u64
}

/// An exact count or sum with its ratio against a bound core.
#[derive(Debug, Clone, PartialEq)]
pub struct AnatomyCount {
    pub value: Rational,
    pub report: RatioReport,
}

fn floor_x(x: f64) -> Result<u64, VerifyError> {
    if !(x >= 1.0 && x.is_finite()) {
        return Err(VerifyError::InvalidInstance(format!("x = {x} must be a finite real >= 1")));
    }
    Ok(x.floor() as u64)
}

fn check_t(t: f64) -> Result<(), VerifyError> {
    if !(t >= 1.0) {
        return Err(VerifyError::InvalidInstance(format!("t = {t} must be at least 1")));
    }
    Ok(())
}

/// Count against `x e^{-100 c t}`.
pub fn anatomy_count(x: f64, t: f64, c: &Rational) -> Result<AnatomyCount, VerifyError> {
    let n = floor_x(x)?;
    check_t(t)?;
    let value = int(count_with_mass_at_least(n, t, c));
    let ln_rhs = x.ln() - 100.0 * rational::to_f64(c) * t;
    let id = format!("anatomy_count/x={x}/t={t}/c={}", rational::format(c));
    let report = RatioReport::with_ln_rhs(id, value.clone(), Quantity::Float(ln_rhs.exp()), ln_rhs);
    Ok(AnatomyCount { value, report })
}

fn divisor_sum_value(m: u64, f: &MultiplicativeWeight, t: f64, c: &Rational) -> Result<Rational, VerifyError> {
    if m == 0 {
        return Err(VerifyError::InvalidInstance("M must be positive".into()));
    }
    let adm = ensure_admissible(f, m);
    if let (false, Some((n, _))) = (adm.holds, &adm.witness) {
        return Err(VerifyError::NotAdmissible {
            name: f.name().to_string(),
            n: *n,
        });
    }
    let sieve = Sieve::global();
    let terms = factorize(m)
        .divisors()
        .into_iter()
        .filter(|&d| mass_at_least(&sieve.prime_divisors(d), t, c))
        .map(|d| f.eval(m / d));
    Ok(rational::sum(terms))
}

/// `sum_{mn = M, sum_{p >= t, p | m} 1/p >= c} f(n)` against `M e^{-100 c t}`.
pub fn anatomy_divisor_sum(
    m: u64,
    f: &MultiplicativeWeight,
    t: f64,
    c: &Rational,
) -> Result<AnatomyCount, VerifyError> {
    check_t(t)?;
    let value = divisor_sum_value(m, f, t, c)?;
    let ln_rhs = (m as f64).ln() - 100.0 * rational::to_f64(c) * t;
    let id = format!("anatomy_divisor_sum/M={m}/t={t}/c={}", rational::format(c));
    let report = RatioReport::with_ln_rhs(id, value.clone(), Quantity::Float(ln_rhs.exp()), ln_rhs);
    Ok(AnatomyCount { value, report })
}

#[derive(Debug, Clone, Copy)]
pub enum AnatomyTarget<'a> {
    Count(f64),
    DivisorSum(u64, &'a MultiplicativeWeight),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImprovedOutcome {
    pub value: Rational,
    /// Against `x e^{-100 t^{e^{(1-eps)c}}}` (or `M` in place of `x`).
    pub report: RatioReport,
    /// Natural log of the bound core; the core itself usually underflows.
    pub ln_core: f64,
    /// `T = t^{e^{(1-2 eps)c}}` from the inclusion trick.
    pub shifted_threshold: f64,
    /// `eps c log t / log log t`.
    pub hypothesis_value: f64,
}

/// The improved anatomy bounds. The hypotheses `c > 0`, `t >= e^e`,
/// `eps ∈ (0, 1)` and `eps c log t / log log t >= threshold` are enforced.
pub fn anatomy_improved(
    target: AnatomyTarget<'_>,
    t: f64,
    c: &Rational,
    eps: f64,
    threshold: f64,
) -> Result<ImprovedOutcome, VerifyError> {
    if !c.is_positive() {
        return Err(VerifyError::Hypothesis("c > 0".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(VerifyError::Hypothesis(format!("eps = {eps} outside (0, 1)")));
    }
    let e_e = std::f64::consts::E.exp();
    if !(t >= e_e) {
        return Err(VerifyError::Hypothesis(format!("t = {t} below e^e")));
    }
    let cf = rational::to_f64(c);
    let hypothesis_value = eps * cf * t.ln() / t.ln().ln();
    if !(hypothesis_value >= threshold) {
        return Err(VerifyError::Hypothesis(format!(
            "eps c log t / log log t = {hypothesis_value} below {threshold}"
        )));
    }
    let (value, scale, id) = match target {
        AnatomyTarget::Count(x) => {
            let n = floor_x(x)?;
            (int(count_with_mass_at_least(n, t, c)), x, format!("anatomy_improved/x={x}"))
        }
        AnatomyTarget::DivisorSum(m, f) => (divisor_sum_value(m, f, t, c)?, m as f64, format!("anatomy_improved/M={m}")),
    };
    let ln_rhs = scale.ln() - 100.0 * t.powf(((1.0 - eps) * cf).exp());
    let report = RatioReport::with_ln_rhs(
        format!("{id}/t={t}/c={}/eps={eps}", rational::format(c)),
        value.clone(),
        Quantity::Float(ln_rhs.exp()),
        ln_rhs,
    );
    Ok(ImprovedOutcome {
        value,
        report,
        ln_core: ln_rhs,
        shifted_threshold: t.powf(((1.0 - 2.0 * eps) * cf).exp()),
        hypothesis_value,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Containment {
    /// `T = t^{e^{(1-2 eps)c}}`.
    pub shifted_threshold: f64,
    /// `sum_{t <= p <= T} 1/p`, checked against `(1 - eps) c`.
    pub premise: Rational,
    pub count_at_t: u64,
    pub count_at_shift: u64,
    /// Every `n <= x` in the `(t, c)` set is in the `(T, eps c)` set.
    pub contained: bool,
    pub first_violation: Option<u64>,
}

/// The inclusion `{sum_{p >= t} 1/p >= c} ⊆ {sum_{p >= T} 1/p >= eps c}`
/// checked element by element on `n <= x`. The premise
/// `sum_{t <= p <= T} 1/p <= (1 - eps) c` is verified exactly first; it
/// stands in for "eps c log t sufficiently large".
pub fn threshold_shift_containment(x: u64, t: f64, c: &Rational, eps: &Rational) -> Result<Containment, VerifyError> {
    check_t(t)?;
    if !eps.is_positive() || *eps >= rational::ratio(1, 2) {
        return Err(VerifyError::Hypothesis("eps must lie in (0, 1/2)".into()));
    }
    if !c.is_positive() {
        return Err(VerifyError::Hypothesis("c > 0".into()));
    }
    let ef = rational::to_f64(eps);
    let cf = rational::to_f64(c);
    let big_t = t.powf(((1.0 - 2.0 * ef) * cf).exp());
    if big_t > RANGE_CAP {
        return Err(VerifyError::Hypothesis(format!("T = {big_t} beyond the sieve range")));
    }
    let premise = reciprocal_sum(primes_in_range(t, big_t));
    let allowed = (Rational::one() - eps) * c;
    if premise > allowed {
        return Err(VerifyError::Hypothesis(format!(
            "sum_(t <= p <= T) 1/p = {} exceeds (1 - eps) c",
            rational::format(&premise)
        )));
    }
    let shifted_c = eps * c;
    let sieve = Sieve::global();
    let (mut count_at_t, mut count_at_shift, mut first_violation) = (0, 0, None);
    for n in 1..=x {
        let ps = sieve.prime_divisors(n);
        let small = mass_at_least(&ps, t, c);
        let shifted = mass_at_least(&ps, big_t, &shifted_c);
        count_at_t += small as u64;
        count_at_shift += shifted as u64;
        if small && !shifted && first_violation.is_none() {
            first_violation = Some(n);
        }
    }
    Ok(Containment {
        shifted_threshold: big_t,
        premise,
        count_at_t,
        count_at_shift,
        contained: first_violation.is_none(),
        first_violation,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMode {
    /// `T = t^{e^{(1+eps)c}}`.
    LargeC,
    /// `T = 3t`.
    SmallC,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerWitness {
    /// Product of the primes in `[t, T]`.
    pub n0: BigUint,
    pub primes: Vec<u64>,
    pub upper: f64,
    /// `sum_{p >= t, p | n0} 1/p`.
    pub mass: Rational,
}

/// `n0 = prod_{t <= p <= T} p`, returned only after `mass >= c` is checked.
pub fn anatomy_lower_witness(t: f64, c: &Rational, eps: f64, mode: WitnessMode) -> Result<LowerWitness, VerifyError> {
    check_t(t)?;
    let upper = match mode {
        WitnessMode::LargeC => t.powf(((1.0 + eps) * rational::to_f64(c)).exp()),
        WitnessMode::SmallC => 3.0 * t,
    };
    if !(upper <= RANGE_CAP) {
        return Err(VerifyError::Hypothesis(format!("T = {upper} beyond the sieve range")));
    }
    let primes = primes_in_range(t, upper);
    if primes.is_empty() {
        return Err(VerifyError::EmptyPrimeRange { lo: t, hi: upper });
    }
    let mass = reciprocal_sum(primes.iter().copied());
    let n0: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    if mass < *c {
        return Err(VerifyError::WitnessFailed(n0.to_string()));
    }
    Ok(LowerWitness { n0, primes, upper, mass })
}
