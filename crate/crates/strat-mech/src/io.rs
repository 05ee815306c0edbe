//! Byte-stable trajectory tables: CSV with a header row, `.` as decimal
//! separator, 17 significant digits and LF line endings; JSON carrying the
//! same values. Every file is written to a temporary sibling and renamed.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Tag(String),
}

impl Cell {
    /// CSV text: numbers in scientific notation with 16 fractional digits.
    pub fn csv_text(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Tag(s) => s.clone(),
        }
    }

    fn json_value(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::Tag(s) => serde_json::Value::String(s.clone()),
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Tag(_) => None,
        }
    }
}

/// Column-labelled rows, as emitted by every engine.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    label: &'a str,
    columns: &'a [String],
    rows: Vec<Vec<serde_json::Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric column by name; non-numeric cells become NaN.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r[j].as_num().unwrap_or(f64::NAN))
                .collect(),
        )
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))
                .expect("writing to memory");
        }
        w.into_inner().expect("flushing to memory")
    }

    pub fn to_json(&self, label: &str) -> Vec<u8> {
        let doc = JsonTable {
            label,
            columns: &self.columns,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::json_value).collect())
                .collect(),
        };
        let mut out = serde_json::to_vec_pretty(&doc).expect("serializing plain values");
        out.push(b'\n');
        out
    }

    /// Parses CSV produced by [`Table::to_csv`]; cells that parse as numbers
    /// are numeric, the rest are tags.
    pub fn from_csv(bytes: &[u8]) -> Result<Self, csv::Error> {
        let mut r = csv::ReaderBuilder::new().from_reader(bytes);
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(
                rec?.iter()
                    .map(|c| match c.parse::<f64>() {
                        Ok(v) => Cell::Num(v),
                        Err(_) => Cell::Tag(c.to_string()),
                    })
                    .collect(),
            );
        }
        Ok(Self { columns, rows })
    }

    pub fn read_csv(path: &Path) -> CliResult<Self> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::invalid(&format!("cannot read {}", path.display()), e))?;
        Self::from_csv(&bytes)
            .map_err(|e| CliError::invalid(&format!("malformed table {}", path.display()), e))
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let fail = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(fail)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
