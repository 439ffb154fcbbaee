use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::cli::config::Format;
use crate::cli::CliError;

/// Bumped whenever a subcommand's columns change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // shortest representation that round-trips
            Cell::Num(v) => format!("{v:?}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(v) => json!(format!("{v:?}")),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v as i64)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Tabular result of one run.
#[derive(Clone, Debug)]
pub struct Table {
    /// Schema name, e.g. `criteria-divergence`.
    pub schema: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: impl Into<String>, columns: &[&'static str]) -> Self {
        Table {
            schema: schema.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn schema_tag(&self) -> String {
        format!("{}/v{SCHEMA_VERSION}", self.schema)
    }

    /// Renders the table; the resolved config leads in both formats.
    pub fn render(&self, config: &Value, format: Format) -> Result<Vec<u8>, CliError> {
        let config_line = serde_json::to_string(config)
            .map_err(|e| CliError::config("", format!("cannot serialize config: {e}")))?;
        match format {
            Format::Csv => {
                let mut out = Vec::new();
                writeln!(out, "# config: {config_line}").unwrap();
                writeln!(out, "# schema: {}", self.schema_tag()).unwrap();
                let mut w = csv::Writer::from_writer(out);
                let io = |e: csv::Error| CliError::io(e.to_string());
                w.write_record(&self.columns).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv)).map_err(io)?;
                }
                w.into_inner().map_err(|e| CliError::io(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = json!({
                    "config": config,
                    "schema": self.schema_tag(),
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut out = serde_json::to_vec_pretty(&doc).unwrap();
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}
