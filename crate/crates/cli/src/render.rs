use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Align {
    Left,
    Right,
}

/// Tabular command output. `notes` follow the table in human output only.
/// `human` and `json`, when set, replace the default rendering in that format.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<(&'static str, Align)>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    pub json: Option<Value>,
    pub human: Option<String>,
}

impl Table {
    pub fn new(columns: &[(&'static str, Align)]) -> Self {
        Table {
            columns: columns.to_vec(),
            ..Table::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: OutputFormat, out: &mut impl Write) -> Result<()> {
        match format {
            OutputFormat::Human => self.write_human(out),
            OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(self.columns.iter().map(|(name, _)| name))?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                Ok(())
            }
            OutputFormat::Json => {
                let value = self.json.clone().unwrap_or_else(|| {
                    Value::Array(
                        self.rows
                            .iter()
                            .map(|row| {
                                let obj: Map<String, Value> = self
                                    .columns
                                    .iter()
                                    .zip(row)
                                    .map(|((name, _), cell)| (name.to_string(), Value::String(cell.clone())))
                                    .collect();
                                Value::Object(obj)
                            })
                            .collect(),
                    )
                });
                serde_json::to_writer_pretty(&mut *out, &value)?;
                writeln!(out)?;
                Ok(())
            }
        }
    }

    fn write_human(&self, out: &mut impl Write) -> Result<()> {
        if let Some(text) = &self.human {
            out.write_all(text.as_bytes())?;
            return Ok(());
        }
        let mut widths: Vec<usize> = self.columns.iter().map(|(n, _)| n.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, ((cell, w), (_, align))) in cells.iter().zip(&widths).zip(&self.columns).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                let pad = w - cell.chars().count();
                match align {
                    Align::Left => {
                        s.push_str(cell);
                        s.extend(std::iter::repeat_n(' ', pad));
                    }
                    Align::Right => {
                        s.extend(std::iter::repeat_n(' ', pad));
                        s.push_str(cell);
                    }
                }
            }
            s.trim_end().to_string()
        };
        writeln!(out, "{}", line(self.columns.iter().map(|(n, _)| *n).collect()))?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(String::as_str).collect()))?;
        }
        for n in &self.notes {
            writeln!(out, "{n}")?;
        }
        Ok(())
    }
}
