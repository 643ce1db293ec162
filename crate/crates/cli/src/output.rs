//! Tabular output in CSV or JSON.
//!
//! CSV numbers use `{:.16e}` (17 significant digits, exact round trip); JSON
//! numbers use serde_json's shortest round-trip form, with NaN as `null`.
//! In CSV mode the meta block goes to stderr as `# key=value` lines so that
//! stdout stays a plain table.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => number(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

/// 17 significant digits; non-finite values as `NaN`, `inf`, `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

/// Ordered `key=value` pairs describing a run.
#[derive(Debug, Default)]
pub struct Meta(Vec<(String, Value)>);

impl Meta {
    pub fn new(command: &str) -> Self {
        let mut meta = Meta::default();
        meta.set("command", command);
        meta.set("version", env!("CARGO_PKG_VERSION"));
        meta
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.0.retain(|(k, _)| k != key);
        self.0.push((key.to_string(), value.into()));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.set(key, number(value));
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            map.insert(k.clone(), v.clone());
        }
        Value::Object(map)
    }

    fn write_comments(&self, out: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.0 {
            let text = match v {
                Value::String(s) => s.clone(),
                Value::Number(n) => n.as_f64().filter(|_| n.is_f64()).map_or_else(|| n.to_string(), format_number),
                other => other.to_string(),
            };
            writeln!(out, "# {k}={text}")?;
        }
        Ok(())
    }
}

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn emit(&self, format: Format, meta: &Meta) -> io::Result<()> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Csv => {
                meta.write_comments(&mut io::stderr().lock())?;
                let mut writer = csv::Writer::from_writer(&mut out);
                writer.write_record(&self.headers)?;
                for row in &self.rows {
                    writer.write_record(row.iter().map(Cell::csv))?;
                }
                writer.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut map = Map::new();
                        for (h, c) in self.headers.iter().zip(row) {
                            map.insert(h.to_string(), c.json());
                        }
                        Value::Object(map)
                    })
                    .collect();
                let mut top = Map::new();
                top.insert("meta".into(), meta.to_json());
                top.insert("rows".into(), Value::Array(rows));
                serde_json::to_writer(&mut out, &Value::Object(top))?;
                writeln!(out)?;
            }
        }
        out.flush()
    }
}
