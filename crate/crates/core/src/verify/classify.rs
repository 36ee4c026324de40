use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::VerifyError;
use crate::arith::{big_d, big_d_at_most, euler_phi, f_rho_extended, quotient_primes, reciprocal_sum};
use crate::intervals::{psi_mass, SupportFunction};
use crate::rational::{self, int, Rational};
use crate::report::{Quantity, RatioReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ELabel {
    E1,
    E2,
    E3,
    E4,
    E5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FLabel {
    F1,
    F2,
    F3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairLabel {
    pub e: ELabel,
    /// Every F-set containing the pair; filled only for `E5`.
    pub f: Vec<FLabel>,
}

/// The scalar data the partition depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantityInput {
    pub equal: bool,
    pub d: Rational,
    pub psi_mass: Rational,
    /// `L_{Psi(N)}(n, m)`.
    pub l_psi: Rational,
    /// `L_{F_delta(D)}(n, m)`.
    pub l_f_delta: Rational,
    /// `L_{sqrt D}(n, m)`.
    pub l_sqrt_d: Rational,
    pub delta: f64,
}

/// `4 / F_{2 delta}(Psi)` and `H(Psi) = exp(F_{5 delta}(Psi))`.
fn thresholds(psi_mass: &Rational, delta: f64) -> (Rational, Option<Rational>) {
    let pf = rational::to_f64(psi_mass);
    let cut = rational::from_f64(4.0 / f_rho_extended(pf, 2.0 * delta));
    let h = f_rho_extended(pf, 5.0 * delta).exp();
    (cut, h.is_finite().then(|| rational::from_f64(h)))
}

/// Labels a pair from its quantities alone.
pub fn classify_quantities(q: &QuantityInput) -> PairLabel {
    let (cut, h) = thresholds(&q.psi_mass, q.delta);
    classify_with(q, &cut, h.as_ref())
}

fn classify_with(q: &QuantityInput, cut: &Rational, h: Option<&Rational>) -> PairLabel {
    let none = |e| PairLabel { e, f: Vec::new() };
    if q.equal {
        return none(ELabel::E1);
    }
    if &q.d * &q.d <= q.psi_mass {
        return none(if q.l_psi <= int(1) { ELabel::E2 } else { ELabel::E3 });
    }
    if q.l_f_delta <= *cut {
        return none(ELabel::E4);
    }
    let ten = int(10);
    let below_h = h.map_or(true, |h| q.d < *h);
    let above_h = h.is_some_and(|h| q.d > *h);
    let mut f = Vec::new();
    // D > sqrt(Psi) holds here, and L_{F_delta(D)} > 4 / F_{2 delta}(Psi).
    if below_h && q.l_sqrt_d <= ten {
        f.push(FLabel::F1);
    }
    if above_h {
        f.push(FLabel::F2);
    }
    if q.l_sqrt_d >= ten {
        f.push(FLabel::F3);
    }
    PairLabel { e: ELabel::E5, f }
}

/// The partition of `[1, N]^2` with `Psi = Psi(N)` and thresholds cached.
#[derive(Debug, Clone)]
pub struct PairClassifier {
    psi: SupportFunction,
    big_n: u64,
    psi_mass: Rational,
    delta: f64,
    cut: Rational,
    h: Option<Rational>,
}

impl PairClassifier {
    pub fn new(psi: &SupportFunction, big_n: u64, delta: f64) -> Result<Self, VerifyError> {
        if big_n == 0 {
            return Err(VerifyError::InvalidInstance("N must be positive".into()));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(VerifyError::InvalidInstance(format!("delta = {delta} outside (0, 1/2)")));
        }
        let psi_mass = psi_mass(big_n, psi);
        let (cut, h) = thresholds(&psi_mass, delta);
        Ok(Self {
            psi: psi.restrict(1.0, big_n as f64),
            big_n,
            psi_mass,
            delta,
            cut,
            h,
        })
    }

    pub fn psi_mass(&self) -> &Rational {
        &self.psi_mass
    }

    pub fn quantities(&self, n: u64, m: u64) -> QuantityInput {
        let d = big_d(n, m, &self.psi.get(n), &self.psi.get(m));
        let primes = if n == m { Vec::new() } else { quotient_primes(n, m) };
        let f_delta = f_rho_extended(rational::to_f64(&d), self.delta);
        let pick = |keep: &dyn Fn(u64) -> bool| reciprocal_sum(primes.iter().copied().filter(|&p| keep(p)));
        QuantityInput {
            equal: n == m,
            l_psi: pick(&|p| int(p) >= self.psi_mass),
            l_f_delta: pick(&|p| p as f64 >= f_delta),
            l_sqrt_d: pick(&|p| int(p) * int(p) >= d),
            d,
            psi_mass: self.psi_mass.clone(),
            delta: self.delta,
        }
    }

    pub fn classify(&self, n: u64, m: u64) -> Result<PairLabel, VerifyError> {
        if n == 0 || m == 0 || n > self.big_n || m > self.big_n {
            return Err(VerifyError::InvalidInstance(format!("pair ({n}, {m}) outside [1, N]^2")));
        }
        Ok(classify_with(&self.quantities(n, m), &self.cut, self.h.as_ref()))
    }

    /// Labels of every pair, row-major.
    pub fn classify_all(&self) -> Vec<((u64, u64), PairLabel)> {
        (1..=self.big_n)
            .into_par_iter()
            .flat_map_iter(|n| {
                (1..=self.big_n).map(move |m| ((n, m), self.classify(n, m).expect("in range")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prop6Variant {
    /// `D <= Psi/s`, against `Psi^2 / s^{1 - 2 eps}`.
    Gcd { s: Rational, eps: Rational },
    /// `D <= s Psi` and `L_t >= 1/A`, against `Psi^2 s^{1/2 + eta} e^{-(1 - eta) t / A}`.
    Anatomy { s: Rational, t: f64, a: Rational, eta: f64 },
}

/// `sum (psi phi / n)(psi phi / m)` over the variant's pair set in `[1, N]^2`.
pub fn prop6_bounds(psi: &SupportFunction, big_n: u64, variant: &Prop6Variant) -> Result<RatioReport, VerifyError> {
    let bad = |s: &str| Err(VerifyError::InvalidInstance(s.to_string()));
    let mass = psi_mass(big_n, psi);
    let ln_mass = rational::ln(&mass);
    let support: Vec<(u64, Rational, Rational)> = psi
        .restrict(1.0, big_n as f64)
        .iter()
        .map(|(n, v)| (n, v.clone(), v * int(euler_phi(n)) / int(n)))
        .collect();

    let (keep, ln_rhs, id): (Box<dyn Fn(u64, &Rational, u64, &Rational) -> bool + Sync>, f64, String) = match variant {
        Prop6Variant::Gcd { s, eps } => {
            if s.is_negative() {
                return bad("s must be non-negative");
            }
            if !eps.is_positive() || *eps >= rational::ratio(1, 2) {
                return bad("eps must lie in (0, 1/2)");
            }
            let cap = (!s.is_zero()).then(|| &mass / s);
            let ln_rhs = 2.0 * ln_mass - (1.0 - 2.0 * rational::to_f64(eps)) * rational::ln(s);
            let keep = move |n: u64, pn: &Rational, m: u64, pm: &Rational| match &cap {
                Some(cap) => big_d_at_most(n, m, pn, pm, cap),
                None => true,
            };
            (Box::new(keep), ln_rhs, format!("prop6/gcd/N={big_n}/s={}", rational::format(s)))
        }
        Prop6Variant::Anatomy { s, t, a, eta } => {
            if s.is_negative() || a.is_negative() || !(*t >= 0.0) {
                return bad("s, t and A must be non-negative");
            }
            if !(*eta > 0.0 && *eta < 0.5) {
                return bad("eta must lie in (0, 1/2)");
            }
            let cap = s * &mass;
            let level = (!a.is_zero()).then(|| a.recip());
            let t = *t;
            let ln_rhs = 2.0 * ln_mass + (0.5 + eta) * rational::ln(s) - (1.0 - eta) * t / rational::to_f64(a);
            let keep = move |n: u64, pn: &Rational, m: u64, pm: &Rational| match &level {
                Some(level) => {
                    big_d_at_most(n, m, pn, pm, &cap)
                        && reciprocal_sum(quotient_primes(n, m).into_iter().filter(|&p| p as f64 >= t)) >= *level
                }
                None => false,
            };
            (
                Box::new(keep),
                ln_rhs,
                format!("prop6/anatomy/N={big_n}/s={}/t={t}/A={}", rational::format(s), rational::format(a)),
            )
        }
    };
    let rows: Vec<Rational> = support
        .par_iter()
        .map(|(n, pn, wn)| {
            let inner = rational::sum(
                support
                    .iter()
                    .filter(|(m, pm, _)| keep(*n, pn, *m, pm))
                    .map(|(_, _, wm)| wm.clone()),
            );
            wn * inner
        })
        .collect();
    let lhs = rational::sum(rows);
    Ok(RatioReport::with_ln_rhs(id, lhs, Quantity::Float(ln_rhs.exp()), ln_rhs))
}
