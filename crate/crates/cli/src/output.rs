//! Report rendering. Every float is written with 17 significant digits.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use intellistate::C64;
use serde_json::{Map, Number, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Complex(C64),
    Int(i64),
    Text(String),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<C64> for Cell {
    fn from(z: C64) -> Self {
        Cell::Complex(z)
    }
}

impl From<i64> for Cell {
    fn from(n: i64) -> Self {
        Cell::Int(n)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Flag(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Ordered named cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &'static str, cell: impl Into<Cell>) -> Self {
        self.0.push((key, cell.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.0.iter().find(|(k, _)| *k == key).map(|(_, c)| c)
    }
}

pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

fn real_value(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&format_real(x)).expect("finite float literal"))
    } else {
        Value::Null
    }
}

fn cell_value(c: &Cell) -> Value {
    match c {
        Cell::Real(x) => real_value(*x),
        Cell::Complex(z) => {
            let mut m = Map::new();
            m.insert("re".into(), real_value(z.re));
            m.insert("im".into(), real_value(z.im));
            Value::Object(m)
        }
        Cell::Int(n) => Value::from(*n),
        Cell::Text(s) => Value::from(s.as_str()),
        Cell::Flag(b) => Value::from(*b),
    }
}

pub fn record_json(r: &Record) -> Value {
    Value::Object(r.0.iter().map(|(k, c)| (k.to_string(), cell_value(c))).collect())
}

/// `{config, results, summary}`.
pub fn render_json(config: &Value, results: &[Record], summary: &Record) -> String {
    let mut top = Map::new();
    top.insert("config".into(), config.clone());
    top.insert("results".into(), Value::Array(results.iter().map(record_json).collect()));
    top.insert("summary".into(), record_json(summary));
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("JSON values serialize");
    text.push('\n');
    text
}

fn csv_header(r: &Record) -> Vec<String> {
    let mut out = Vec::new();
    for (k, c) in &r.0 {
        match c {
            Cell::Complex(_) => {
                out.push(format!("{k}_re"));
                out.push(format!("{k}_im"));
            }
            _ => out.push(k.to_string()),
        }
    }
    out
}

fn csv_fields(r: &Record) -> Vec<String> {
    let mut out = Vec::new();
    for (_, c) in &r.0 {
        match c {
            Cell::Real(x) => out.push(format_real(*x)),
            Cell::Complex(z) => {
                out.push(format_real(z.re));
                out.push(format_real(z.im));
            }
            Cell::Int(n) => out.push(n.to_string()),
            Cell::Text(s) => out.push(s.clone()),
            Cell::Flag(b) => out.push(b.to_string()),
        }
    }
    out
}

/// Header from the first record; all records must share its layout.
/// `fallback_header` is used when there are no records.
pub fn render_csv(results: &[Record], fallback_header: &[&str]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header = match results.first() {
        Some(r) => csv_header(r),
        None => fallback_header.iter().map(|s| s.to_string()).collect(),
    };
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&header).map_err(io)?;
    for r in results {
        w.write_record(csv_fields(r)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

/// Writes to `path` if given, else stdout. A path that cannot be written is a
/// usage error.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
