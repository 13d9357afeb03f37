use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    /// `None` marks a cell that does not apply to this row.
    pub values: Vec<Option<f64>>,
}

impl Row {
    pub fn new(label: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        Row {
            label: label.into(),
            values,
        }
    }

    pub fn full(label: impl Into<String>, values: &[f64]) -> Self {
        Self::new(
            label,
            values.iter().map(|&v| v.is_finite().then_some(v)).collect(),
        )
    }

    /// A row with a single populated cell at `column`.
    pub fn single(label: impl Into<String>, width: usize, column: usize, value: f64) -> Self {
        let mut values = vec![None; width];
        values[column] = value.is_finite().then_some(value);
        Self::new(label, values)
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error { code: i32, message: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub status: Status,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        OutputRecord {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            status: Status::Ok,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                let header =
                    std::iter::once("label").chain(self.columns.iter().map(String::as_str));
                w.write_record(header)?;
                for row in &self.rows {
                    let cells = row
                        .values
                        .iter()
                        .map(|v| v.map(|x| format!("{x:.16e}")).unwrap_or_default());
                    w.write_record(std::iter::once(row.label.clone()).chain(cells))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// `x_i = i/(m − 1)`, `i = 0..m`.
pub fn unit_grid(m: usize) -> Vec<f64> {
    (0..m).map(|i| i as f64 / (m - 1) as f64).collect()
}
