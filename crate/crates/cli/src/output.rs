//! Tabular results and their CSV / JSON / text renderings.

use std::io::Write;

use serde_json::{Map, Number, Value as Json};

use crate::config::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Str(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Str(v.to_string())
    }
}

impl Cell {
    fn machine(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Float(v) => sig6(*v),
            Cell::Empty => "-".into(),
            other => other.machine(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Cell::Int(v) => Json::from(*v),
            Cell::Float(v) => Number::from_f64(*v).map(Json::Number).unwrap_or(Json::Null),
            Cell::Bool(v) => Json::Bool(*v),
            Cell::Str(s) => Json::String(s.clone()),
            Cell::Empty => Json::Null,
        }
    }
}

/// Six significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render<W: Write>(&self, format: Format, out: &mut W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.render_csv(out),
            Format::Json => self.render_json(out),
            Format::Text => self.render_text(out),
        }
    }

    fn render_csv<W: Write>(&self, out: &mut W) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::machine))?;
        }
        w.flush()?;
        Ok(())
    }

    fn render_json<W: Write>(&self, out: &mut W) -> Result<(), CliError> {
        let records: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> =
                    self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Json::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &records).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }

    fn render_text<W: Write>(&self, out: &mut W) -> Result<(), CliError> {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let widths: Vec<usize> = self
            .columns
            .iter()
            .enumerate()
            .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: &[String]| -> String {
            let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:>w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(&self.columns))?;
        for r in &cells {
            writeln!(out, "{}", line(r))?;
        }
        Ok(())
    }
}
