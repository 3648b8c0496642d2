//! Report envelope and the three output formats.
//!
//! JSON carries the full result. CSV carries a flat verdict table only.
//! Timing sits in its own top-level field so that two runs can be compared
//! after [`strip_timing`].

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "cyclic-lattice-lab/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Table {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// Everything a command produces besides its exit code.
#[derive(Clone, Debug)]
pub struct Rendered {
    pub result: Value,
    pub table: Table,
    pub text: String,
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: &'static str,
    command: &'a str,
    input: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<&'a Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a Value>,
    timing: Timing,
}

pub fn envelope(command: &str, input: &Value, result: Option<&Value>, error: Option<&Value>, elapsed_ms: u128) -> Value {
    serde_json::to_value(Envelope {
        schema: SCHEMA,
        command,
        input,
        result,
        error,
        timing: Timing { elapsed_ms },
    })
    .expect("envelope serializes")
}

/// The report without its `timing` field.
pub fn strip_timing(report: &Value) -> Value {
    let mut v = report.clone();
    if let Value::Object(m) = &mut v {
        m.remove("timing");
    }
    v
}

pub fn write_json(out: &mut dyn Write, report: &Value) -> std::io::Result<()> {
    let s = serde_json::to_string_pretty(report).expect("json value serializes");
    writeln!(out, "{s}")
}

pub fn write_csv(out: &mut dyn Write, table: &Table) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.headers)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Space-separated list, as used inside CSV cells.
pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn strip_timing_only_drops_timing() {
        let r = envelope("facets", &json!({"d": 3}), Some(&json!([1])), None, 17);
        let s = strip_timing(&r);
        assert!(r.get("timing").is_some());
        assert!(s.get("timing").is_none());
        assert_eq!(s["schema"], SCHEMA);
        assert_eq!(s["result"], json!([1]));
        assert!(s.get("error").is_none());
    }

    #[test]
    fn csv_quotes_cells() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1 2".into(), "x,y".into()]);
        let mut buf = Vec::new();
        write_csv(&mut buf, &t).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1 2,\"x,y\"\n");
    }
}
