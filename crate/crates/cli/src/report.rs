//! Run manifests and their rendering as a table, JSON or CSV.

use std::fmt::Write as _;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;

/// One result row; columns keep insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row(pub Vec<(String, Value)>);

impl Row {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn num(self, key: &str, value: f64) -> Self {
        // serde_json maps non-finite floats to null
        self.with(key, value)
    }

    pub fn opt(self, key: &str, value: Option<f64>) -> Self {
        self.with(key, value.map_or(Value::Null, Value::from))
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl Serialize for Row {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Row,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp: String,
    pub results: Vec<Row>,
}

impl RunManifest {
    pub fn new(command: &str, parameters: Row, seed: u64, results: Vec<Row>) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            results,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }

    /// Columns in first-seen order across all rows.
    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for row in &self.results {
            for (k, _) in &row.0 {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }

    pub fn to_csv(&self) -> String {
        let cols = self.columns();
        let mut out = cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &self.results {
            let line: Vec<String> = cols
                .iter()
                .map(|c| row.get(c).map_or(String::new(), |v| csv_field(&csv_value(v))))
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.parameters.0.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
        let _ = writeln!(out, "# {} (seed {}) {}", self.command, self.seed, params.join(" "));
        let cols = self.columns();
        let cells: Vec<Vec<String>> = self
            .results
            .iter()
            .map(|row| cols.iter().map(|c| row.get(c).map_or(String::new(), table_value)).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let fmt_line = |items: &[String]| -> String {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let _ = writeln!(out, "{}", fmt_line(&cols));
        for r in &cells {
            let _ = writeln!(out, "{}", fmt_line(r));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Floats with 17 significant digits; arrays joined by spaces.
fn csv_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => items.iter().map(csv_value).collect::<Vec<_>>().join(" "),
        other => plain(other),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn table_value(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x == 0.0 || (1e-3..1e6).contains(&x.abs()) {
                format!("{x:.12}")
            } else {
                format!("{x:.6e}")
            }
        }
        Value::Array(items) if items.len() > 4 => format!("[{} values]", items.len()),
        Value::Array(items) => items.iter().map(table_value).collect::<Vec<_>>().join(" "),
        other => plain(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> RunManifest {
        let rows = vec![
            Row::new().with("n", 4).num("lambda", 1.0).with("note", "a,b"),
            Row::new().with("n", 5).num("lambda", 0.1).opt("extra", None),
        ];
        RunManifest::new("constants", Row::new().with("n", "4..5"), 7, rows)
    }

    #[test]
    fn json_keeps_column_order() {
        let j = manifest().to_json();
        let v: Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["seed"], 7);
        assert_eq!(v["results"][1]["lambda"], 0.1);
        assert!(j.find("\"n\"").unwrap() < j.find("\"lambda\"").unwrap());
        assert!(v["results"][1]["extra"].is_null());
    }

    #[test]
    fn csv_layout() {
        let c = manifest().to_csv();
        let lines: Vec<&str> = c.lines().collect();
        assert_eq!(lines[0], "n,lambda,note,extra");
        assert_eq!(lines[1], "4,1.0000000000000000e0,\"a,b\",");
        assert_eq!(lines[2], "5,1.0000000000000001e-1,,");
    }

    #[test]
    fn table_layout() {
        let t = manifest().to_table();
        assert!(t.starts_with("# constants (seed 7) n=4..5"));
        assert_eq!(t.lines().count(), 4);
    }
}
