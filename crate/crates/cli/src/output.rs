//! Rendering of command results as aligned text, CSV or JSON.

use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

/// Header plus string rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Table {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

/// A command result. Plain output prints `before`, the table, then
/// `after`; CSV prints the table alone; JSON prints `json`.
#[derive(Debug, Clone)]
pub struct Rendered {
    pub json: Value,
    pub before: Vec<String>,
    pub table: Table,
    pub after: Vec<String>,
}

impl Rendered {
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.table.headers)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
            Format::Plain => {
                for line in &self.before {
                    writeln!(out, "{line}")?;
                }
                write_aligned(&self.table, out)?;
                for line in &self.after {
                    writeln!(out, "{line}")?;
                }
            }
        }
        Ok(())
    }
}

fn write_aligned(table: &Table, out: &mut dyn Write) -> std::io::Result<()> {
    if table.headers.is_empty() {
        return Ok(());
    }
    let mut widths: Vec<usize> = table.headers.iter().map(|h| h.chars().count()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(out, "{}", line(table.headers.clone()))?;
    for row in &table.rows {
        writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}
