//! One JSON object per line. Pair sets are written as their weights followed
//! by one `edge` record per pair; matrices as a header, then `entry`, `alpha`
//! and `beta` records.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{MeasureMatrix, PairSet};
use crate::intervals::SupportFunction;
use crate::rational::Rational;
use crate::report::{exact, parse_exact, parse_u64, JsonError};

pub fn pair_set_records(e: &PairSet) -> Vec<Value> {
    let mut out = Vec::with_capacity(e.psi().len() + e.theta().len() + e.len());
    for (tag, sf) in [("psi", e.psi()), ("theta", e.theta())] {
        for (n, v) in sf.iter() {
            out.push(json!({ "record": tag, "n": n, "value": exact(v) }));
        }
    }
    for &(v, w) in e.edges() {
        out.push(json!({ "record": "edge", "v": v, "w": w }));
    }
    out
}

pub fn matrix_records(m: &MeasureMatrix) -> Vec<Value> {
    let mut header = json!({ "record": "matrix", "prime": m.prime() });
    if let Some(t) = m.total() {
        header["total"] = exact(t);
    }
    let mut out = vec![header];
    for (&(i, j), x) in m.entries() {
        out.push(json!({ "record": "entry", "i": i, "j": j, "m": exact(x) }));
    }
    for (&i, x) in m.alphas() {
        out.push(json!({ "record": "alpha", "i": i, "value": exact(x) }));
    }
    for (&j, x) in m.betas() {
        out.push(json!({ "record": "beta", "j": j, "value": exact(x) }));
    }
    out
}

pub fn to_lines(records: &[Value]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

fn parse_lines(text: &str) -> Result<Vec<Value>, JsonError> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| JsonError(e.to_string())))
        .collect()
}

fn tag(r: &Value) -> &str {
    r.get("record").and_then(Value::as_str).unwrap_or("")
}

fn idx(r: &Value, key: &str) -> Result<u32, JsonError> {
    u32::try_from(parse_u64(r, key)?).map_err(|_| JsonError(format!("index `{key}` too large")))
}

fn field(r: &Value, key: &str) -> Result<Rational, JsonError> {
    parse_exact(r.get(key).ok_or_else(|| JsonError(format!("missing `{key}`")))?)
}

/// Parses the output of [`pair_set_records`]; unrelated records are skipped.
pub fn parse_pair_set(text: &str) -> Result<PairSet, JsonError> {
    let mut psi = Vec::new();
    let mut theta = Vec::new();
    let mut edges = Vec::new();
    for r in parse_lines(text)? {
        match tag(&r) {
            "psi" => psi.push((parse_u64(&r, "n")?, field(&r, "value")?)),
            "theta" => theta.push((parse_u64(&r, "n")?, field(&r, "value")?)),
            "edge" => edges.push((parse_u64(&r, "v")?, parse_u64(&r, "w")?)),
            _ => {}
        }
    }
    let err = |e: &dyn std::fmt::Display| JsonError(e.to_string());
    let psi = SupportFunction::from_pairs(psi).map_err(|e| err(&e))?;
    let theta = SupportFunction::from_pairs(theta).map_err(|e| err(&e))?;
    PairSet::new(edges, psi, theta).map_err(|e| err(&e))
}

pub fn parse_matrix(text: &str) -> Result<MeasureMatrix, JsonError> {
    let mut prime = None;
    let mut total = None;
    let mut entries = BTreeMap::new();
    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for r in parse_lines(text)? {
        match tag(&r) {
            "matrix" => {
                prime = Some(parse_u64(&r, "prime")?);
                if r.get("total").is_some() {
                    total = Some(field(&r, "total")?);
                }
            }
            "entry" => {
                entries.insert((idx(&r, "i")?, idx(&r, "j")?), field(&r, "m")?);
            }
            "alpha" => {
                alpha.insert(idx(&r, "i")?, field(&r, "value")?);
            }
            "beta" => {
                beta.insert(idx(&r, "j")?, field(&r, "value")?);
            }
            _ => {}
        }
    }
    let prime = prime.ok_or_else(|| JsonError("missing matrix header".into()))?;
    MeasureMatrix::with_total(prime, entries, alpha, beta, total).map_err(|e| JsonError(e.to_string()))
}
