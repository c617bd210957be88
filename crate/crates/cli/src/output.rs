//! Table output as CSV or JSON, plus the run-metadata sidecar.
//!
//! Data files hold no timestamps, so one config always yields the same bytes.
//! CSV files open with `#` metadata lines echoing the effective settings,
//! followed by a header row whose column names carry their units.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use dicke_stark::{Error, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(usize),
    S(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        if x.is_finite() {
            Cell::F(x)
        } else {
            Cell::Empty
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::from)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::S(x.to_string())
    }
}

/// Shortest round-trip text; scientific outside `[1e-4, 1e15)`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::F(x) => format_f64(*x),
            Cell::I(n) => n.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::F(x) => json!(x),
            Cell::I(n) => json!(n),
            Cell::S(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn render_csv(table: &Table, meta: &[(String, String)]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    for (k, v) in meta {
        writeln!(buf, "# {k} = {v}")?;
    }
    let mut w = csv::Writer::from_writer(buf);
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(&table.columns).map_err(err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::text)).map_err(err)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

/// One row per line so diffs stay readable.
pub fn render_json(table: &Table, meta: &[(String, String)]) -> Result<Vec<u8>> {
    let settings: serde_json::Map<String, Value> = meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut out = String::from("{\n");
    out += &format!("  \"table\": {},\n", json!(table.name));
    out += &format!("  \"settings\": {},\n", Value::Object(settings));
    out += &format!("  \"columns\": {},\n", json!(table.columns));
    out += "  \"rows\": [";
    for (i, row) in table.rows.iter().enumerate() {
        let v = Value::Array(row.iter().map(Cell::json).collect());
        out += if i == 0 { "\n    " } else { ",\n    " };
        out += &v.to_string();
    }
    out += if table.rows.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" };
    Ok(out.into_bytes())
}

/// Write every table to `dir`; returns the paths written.
pub fn write_tables(dir: &Path, format: Format, tables: &[Table], meta: &[(String, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    tables
        .iter()
        .map(|t| {
            let path = dir.join(format!("{}.{}", t.name, format.extension()));
            let bytes = match format {
                Format::Csv => render_csv(t, meta)?,
                Format::Json => render_json(t, meta)?,
            };
            fs::write(&path, bytes).map_err(|e| io_err(&path, e))?;
            Ok(path)
        })
        .collect()
}

pub fn write_sidecar(path: &Path, value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}
