//! Tabular output in CSV or JSON lines with a schema version column.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::CliError;

/// Bumped whenever a column is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:?}"),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Rewrites `path` with the table, prefixing every row with `schema_version`.
    pub fn write(&self, path: &Path, format: Format) -> Result<(), CliError> {
        let io_err = |source| CliError::Io {
            path: path.to_path_buf(),
            source,
        };
        match format {
            Format::Csv => {
                let csv_err = |source| CliError::Csv {
                    path: path.to_path_buf(),
                    source,
                };
                let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
                let header = std::iter::once("schema_version").chain(self.columns.iter().copied());
                w.write_record(header).map_err(csv_err)?;
                for row in &self.rows {
                    let record = std::iter::once(SCHEMA_VERSION.to_string())
                        .chain(row.iter().map(Cell::to_csv));
                    w.write_record(record).map_err(csv_err)?;
                }
                w.flush().map_err(io_err)
            }
            Format::JsonLines => {
                let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
                for row in &self.rows {
                    let mut obj = Map::new();
                    obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
                    for (name, cell) in self.columns.iter().zip(row) {
                        obj.insert((*name).into(), cell.to_json());
                    }
                    writeln!(w, "{}", Value::Object(obj)).map_err(io_err)?;
                }
                w.flush().map_err(io_err)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_csv_text() {
        let x = 0.1 + 0.2;
        let text = Cell::Float(x).to_csv();
        assert_eq!(text.parse::<f64>().unwrap(), x);
        assert_eq!(Cell::Float(1.0).to_csv(), "1.0");
    }

    #[test]
    fn non_finite_floats_become_json_null() {
        assert_eq!(Cell::Float(f64::NAN).to_json(), Value::Null);
    }
}
