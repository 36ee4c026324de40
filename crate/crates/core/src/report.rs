//! Tagged numbers and ratio reports for line-oriented JSON output.
//!
//! Every number leaves the crate either as `{"exact": "p/q"}` or as
//! `{"float": "<scientific>", "precision": <significant digits>}`.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::rational::{self, Rational};

/// Significant digits used for float output.
pub const FLOAT_PRECISION: usize = 17;

#[derive(Debug, Clone, PartialEq)]
pub enum Quantity {
    Exact(Rational),
    Float(f64),
}

impl Quantity {
    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(r) => rational::to_f64(r),
            Quantity::Float(x) => *x,
        }
    }

    pub fn ln(&self) -> f64 {
        match self {
            Quantity::Exact(r) => rational::ln(r),
            Quantity::Float(x) => x.ln(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Quantity::Exact(r) => exact(r),
            Quantity::Float(x) => float(*x),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        if let Some(s) = v.get("exact").and_then(Value::as_str) {
            return rational::parse(s)
                .map(Quantity::Exact)
                .map_err(|e| JsonError(e.to_string()));
        }
        if let Some(s) = v.get("float").and_then(Value::as_str) {
            return s
                .parse::<f64>()
                .map(Quantity::Float)
                .map_err(|e| JsonError(format!("bad float `{s}`: {e}")));
        }
        Err(JsonError(format!("untagged number {v}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed record: {0}")]
pub struct JsonError(pub String);

pub fn exact(r: &Rational) -> Value {
    json!({ "exact": rational::format(r) })
}

pub fn float(x: f64) -> Value {
    let s = if x.is_finite() {
        format!("{:.*e}", FLOAT_PRECISION - 1, x)
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    };
    json!({ "float": s, "precision": FLOAT_PRECISION })
}

pub fn parse_exact(v: &Value) -> Result<Rational, JsonError> {
    match Quantity::from_json(v)? {
        Quantity::Exact(r) => Ok(r),
        Quantity::Float(_) => Err(JsonError("expected an exact number".into())),
    }
}

/// Accepts a bare integer or an exact tag holding a nonnegative integer.
pub fn parse_u64(obj: &Value, key: &str) -> Result<u64, JsonError> {
    let missing = || JsonError(format!("missing integer field `{key}`"));
    let v = obj.get(key).ok_or_else(missing)?;
    if let Some(n) = v.as_u64() {
        return Ok(n);
    }
    let r = parse_exact(v).map_err(|_| missing())?;
    if !r.is_integer() {
        return Err(missing());
    }
    r.to_integer().to_u64().ok_or_else(missing)
}

/// Result of comparing an exact left-hand side with the core of a bound whose
/// implied constant is not known.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub instance_id: String,
    pub lhs: Rational,
    pub rhs_core: Quantity,
    /// `lhs / rhs_core`; `None` when `rhs_core` vanishes.
    pub ratio: Option<f64>,
    pub log_ratio: f64,
    pub max_over_sweep: f64,
}

impl RatioReport {
    pub fn new(instance_id: impl Into<String>, lhs: Rational, rhs_core: Quantity) -> Self {
        let ln_rhs = rhs_core.ln();
        Self::with_ln_rhs(instance_id, lhs, rhs_core, ln_rhs)
    }

    /// For bounds whose float value may underflow: `ln_rhs` is authoritative.
    pub fn with_ln_rhs(
        instance_id: impl Into<String>,
        lhs: Rational,
        rhs_core: Quantity,
        ln_rhs: f64,
    ) -> Self {
        let log_ratio = rational::ln(&lhs) - ln_rhs;
        let ratio = if ln_rhs.is_finite() {
            Some(if lhs.is_zero() { 0.0 } else { log_ratio.exp() })
        } else {
            None
        };
        Self {
            instance_id: instance_id.into(),
            lhs,
            rhs_core,
            ratio,
            log_ratio,
            max_over_sweep: ratio.unwrap_or(f64::NAN),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("record".into(), json!("ratio"));
        m.insert("instance_id".into(), json!(self.instance_id));
        m.insert("lhs".into(), exact(&self.lhs));
        m.insert("rhs_core".into(), self.rhs_core.to_json());
        m.insert(
            "ratio".into(),
            self.ratio.map(float).unwrap_or(Value::Null),
        );
        m.insert("log_ratio".into(), float(self.log_ratio));
        m.insert("max_over_sweep".into(), float(self.max_over_sweep));
        Value::Object(m)
    }
}

/// Sets `max_over_sweep` on every report to the largest ratio among them.
pub fn stamp_sweep_max(reports: &mut [RatioReport]) -> f64 {
    let max = reports
        .iter()
        .filter_map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    for r in reports.iter_mut() {
        r.max_over_sweep = max;
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn tagged_round_trip() {
        let q = Quantity::Exact(ratio(-7, 3));
        assert_eq!(Quantity::from_json(&q.to_json()).unwrap(), q);
        let f = Quantity::Float(0.1);
        assert_eq!(Quantity::from_json(&f.to_json()).unwrap(), f);
        assert_eq!(exact(&ratio(3, 1)), json!({"exact": "3/1"}));
    }

    #[test]
    fn report_ratio() {
        let r = RatioReport::new("x", ratio(1, 4), Quantity::Exact(ratio(1, 2)));
        assert!((r.ratio.unwrap() - 0.5).abs() < 1e-15);
        let z = RatioReport::new("z", Rational::default(), Quantity::Float(2.0));
        assert_eq!(z.ratio, Some(0.0));
        let undefined = RatioReport::new("u", ratio(1, 4), Quantity::Float(0.0));
        assert_eq!(undefined.ratio, None);
    }
}
