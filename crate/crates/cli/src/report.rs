//! Experiment reports and their JSON/CSV forms.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything a run produced. The payload is deterministic; `timing` is the only
/// wall-clock field and is omitted unless requested.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub command: String,
    pub config: Value,
    pub result: Value,
    /// Verdict of a verification command; absent for plain computations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Rows for CSV output; every cell is already formatted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Table {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Rounds to 12 significant digits; the shortest round-trip form of the result then prints at
/// most 12 digits, and rounding again is a no-op.
pub fn round_sig(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

impl ExperimentReport {
    pub fn new(command: String, config: Value, mut result: Value, pass: Option<bool>) -> ExperimentReport {
        round_floats(&mut result);
        ExperimentReport { command, config, result, pass, version: env!("CARGO_PKG_VERSION").to_string(), timing: None }
    }
}

/// Pretty JSON with a trailing newline; field order follows the struct definitions.
pub fn emit_json(report: &ExperimentReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn format_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        // same digits as the JSON form
        Value::Number(n) => match n.as_f64().filter(|_| n.is_f64()).and_then(|f| serde_json::Number::from_f64(round_sig(f))) {
            Some(r) => r.to_string(),
            None => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Dotted-path key/value rows of a JSON value, for results without a natural table.
pub fn flatten(v: &Value) -> Table {
    fn walk(prefix: &str, v: &Value, out: &mut Table) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(items) if !items.is_empty() => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            other => out.push(vec![prefix.to_string(), format_cell(other)]),
        }
    }
    let mut t = Table::new(&["key", "value"]);
    walk("", v, &mut t);
    t
}

pub fn emit_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
