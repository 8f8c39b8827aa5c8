//! Deterministic JSON and CSV rendering.

use serde_json::{Map, Number, Value};

const SIG_DIGITS: usize = 15;

/// Round to 15 significant digits; the shortest round-trip form of the
/// result then has at most 15 digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Recursively round every float in a JSON value.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().unwrap_or(f64::NAN));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn float_cell(x: f64) -> String {
    let x = round_sig(x);
    if !x.is_finite() {
        return String::new();
    }
    let ax = x.abs();
    if x == 0.0 || (1e-5..1e15).contains(&ax) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A table rendered as CSV with LF line endings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

/// `{"params", "results", "diagnostics"}` as pretty JSON with a trailing newline.
pub fn document(params: Value, results: Value, diagnostics: Value) -> String {
    let mut doc = Map::new();
    doc.insert("params".into(), params);
    doc.insert("results".into(), results);
    doc.insert("diagnostics".into(), diagnostics);
    let mut s = serde_json::to_string_pretty(&round_value(Value::Object(doc))).expect("JSON values serialize");
    s.push('\n');
    s
}
