use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::ReportError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A row type with a fixed CSV column layout.
pub trait Tabular {
    fn header() -> Vec<String>;
    fn record(&self) -> Vec<String>;
}

/// Shortest round-trip decimal form; identical across runs and platforms.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// Space-separated list inside one CSV field.
pub fn fmt_floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_float(x)).collect::<Vec<_>>().join(" ")
}

/// Metadata block plus rows, renderable as CSV or JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub records: Vec<Vec<String>>,
    pub json_rows: Vec<Value>,
}

impl Document {
    pub fn from_rows<R: Tabular + Serialize>(meta: Vec<(String, String)>, rows: &[R]) -> Result<Self, ReportError> {
        Ok(Self {
            meta,
            header: R::header(),
            records: rows.iter().map(Tabular::record).collect(),
            json_rows: rows.iter().map(serde_json::to_value).collect::<Result<_, _>>()?,
        })
    }

    /// CSV: `# key: value` comment lines, then an RFC 4180 quoted table with LF line ends.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), ReportError> {
        for (k, v) in &self.meta {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.records {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON: `{"meta": {...}, "rows": [...]}`.
    pub fn write_json<W: Write>(&self, mut out: W) -> Result<(), ReportError> {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let mut doc = Map::new();
        doc.insert("meta".into(), Value::Object(meta));
        doc.insert("rows".into(), Value::Array(self.json_rows.clone()));
        serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), ReportError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }
}
