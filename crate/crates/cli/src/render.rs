//! Output sinks. Every command builds one [`Report`] carrying all three
//! renderings; the chosen one is written to stdout or `--output`.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::ValueEnum;
use serde_json::Value;

use qcong_core::Valuation;

use crate::{Failure, Global};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct Report {
    pub text: String,
    pub json: Value,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(header: &[&str]) -> Self {
        Report {
            text: String::new(),
            json: Value::Null,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

pub fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(k) => Value::from(k),
        Valuation::Infinite => Value::from("inf"),
    }
}

pub fn emit(g: &Global, default: Format, report: &Report) -> Result<(), Failure> {
    let out: Box<dyn Write> = match &g.output {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(out);
    match g.format.unwrap_or(default) {
        Format::Text => out.write_all(report.text.as_bytes())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &report.json)
                .map_err(|e| Failure::Internal(e.into()))?;
            out.write_all(b"\n")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&report.header)
                .map_err(|e| Failure::Internal(e.into()))?;
            for r in &report.rows {
                w.write_record(r).map_err(|e| Failure::Internal(e.into()))?;
            }
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Right-aligned grid with a label column.
pub fn grid(corner: &str, columns: &[String], rows: &[(String, Vec<String>)]) -> String {
    let label_w = rows
        .iter()
        .map(|(l, _)| l.len())
        .chain([corner.len()])
        .max()
        .unwrap_or(0);
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            rows.iter()
                .map(|(_, r)| r[i].len())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut s = format!("{corner:<label_w$}");
    for (c, w) in columns.iter().zip(&widths) {
        s.push_str(&format!("  {c:>w$}"));
    }
    s.push('\n');
    for (label, cells) in rows {
        s.push_str(&format!("{label:<label_w$}"));
        for (c, w) in cells.iter().zip(&widths) {
            s.push_str(&format!("  {c:>w$}"));
        }
        s.push('\n');
    }
    s
}
