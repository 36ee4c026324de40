//! Record serialization: JSON lines, or CSV with one column per key.

use serde_json::Value;

use crate::CliError;

pub fn jsonl(records: &[Value]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

/// Tagged numbers become their string, other nested values their JSON text.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Bool(_) | Value::Number(_) => v.to_string(),
        Value::Object(m) if m.len() == 1 => match m.get("exact").or_else(|| m.get("float")) {
            Some(Value::String(s)) => s.clone(),
            Some(other) => other.to_string(),
            None => v.to_string(),
        },
        _ => v.to_string(),
    }
}

/// Columns are the union of keys in first-seen order; missing cells are empty.
pub fn csv(records: &[Value]) -> Result<String, CliError> {
    let mut columns: Vec<String> = Vec::new();
    for r in records {
        if let Value::Object(m) = r {
            for k in m.keys() {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&columns).map_err(io)?;
    for r in records {
        let row: Vec<String> = columns.iter().map(|c| r.get(c).map(cell).unwrap_or_default()).collect();
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
