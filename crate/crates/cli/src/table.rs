//! CSV result tables: one `name[unit]` header line, LF endings, floats with
//! 17 significant digits, and a `#` provenance footer.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Flag(bool),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Flag(v) => u8::from(*v).to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|(n, u)| (n.to_string(), u.to_string())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width of {}", self.name);
        self.rows.push(row);
    }

    pub fn header(&self) -> Vec<String> {
        self.columns.iter().map(|(n, u)| format!("{n}[{u}]")).collect()
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|(n, _)| n == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[i] {
                    Cell::Float(v) => v,
                    Cell::Int(v) => v as f64,
                    Cell::Flag(v) => f64::from(u8::from(v)),
                })
                .collect(),
        )
    }
}

/// `# config_sha256=<hex> version=<crate version>`.
pub fn footer(config: &[u8]) -> String {
    let digest = Sha256::digest(config);
    format!("# config_sha256={} version={}", hex::encode(digest), env!("CARGO_PKG_VERSION"))
}

pub fn write(table: &Table, dir: &Path, config: &[u8]) -> Result<(), CliError> {
    let path = dir.join(&table.name);
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let file = File::create(&path).map_err(io)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
    w.write_record(table.header())?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    let mut file = w.into_inner().map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error())))?;
    writeln!(file, "{}", footer(config)).map_err(io)?;
    Ok(())
}

/// Re-reads a written table and reports every difference from `table`.
pub fn verify(table: &Table, dir: &Path, config: &[u8]) -> Result<Vec<String>, CliError> {
    let path = dir.join(&table.name);
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut diffs = Vec::new();

    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(&path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != table.header() {
        diffs.push(format!("{}: header {:?} != {:?}", table.name, header, table.header()));
    }
    let mut n = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        n += 1;
        let Some(want) = table.rows.get(i) else { continue };
        if record.len() != want.len() {
            diffs.push(format!("{}: row {i} has {} fields, expected {}", table.name, record.len(), want.len()));
            continue;
        }
        for (j, (got, want)) in record.iter().zip(want).enumerate() {
            if !same_value(got, want) {
                diffs.push(format!("{}: row {i} col {j}: `{got}` != `{}`", table.name, want.render()));
            }
        }
    }
    if n != table.rows.len() {
        diffs.push(format!("{}: {n} rows read, {} written", table.name, table.rows.len()));
    }

    let last =
        BufReader::new(File::open(&path).map_err(io)?).lines().last().transpose().map_err(io)?.unwrap_or_default();
    if last != footer(config) {
        diffs.push(format!("{}: footer `{last}` does not match the config", table.name));
    }
    Ok(diffs)
}

fn same_value(text: &str, want: &Cell) -> bool {
    match want {
        Cell::Float(v) => match text.parse::<f64>() {
            Ok(got) => (got.is_nan() && v.is_nan()) || got.to_bits() == v.to_bits(),
            Err(_) => false,
        },
        other => text == other.render(),
    }
}
