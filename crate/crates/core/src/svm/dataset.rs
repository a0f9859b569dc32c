//! Labeled datasets in CSV form: one column per schema feature, in schema
//! order, followed by a `label` column holding `-1` or `+1`.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::svm::model::Label;
use crate::svm::schema::FeatureSchema;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    rows: Vec<Vec<f64>>,
    labels: Vec<Label>,
}

impl LabeledDataset {
    /// Validates every row against the schema.
    pub fn new(schema: &FeatureSchema, rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch(rows.len(), labels.len()));
        }
        for (i, r) in rows.iter().enumerate() {
            schema
                .check_row(r)
                .map_err(|reason| Error::InvalidRow { row: i, reason })?;
        }
        Ok(LabeledDataset { rows, labels })
    }

    pub fn from_csv_reader(schema: &FeatureSchema, reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header = rdr.headers()?.clone();
        let expected: Vec<&str> = schema.names().chain(std::iter::once("label")).collect();
        let actual: Vec<&str> = header.iter().collect();
        if actual != expected {
            return Err(Error::InvalidDataset(format!(
                "header {actual:?} does not match schema {expected:?}"
            )));
        }
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let mut vals = Vec::with_capacity(schema.width());
            for (j, field) in rec.iter().take(schema.width()).enumerate() {
                let v: f64 = field.parse().map_err(|_| Error::InvalidRow {
                    row: i,
                    reason: format!("column `{}`: cannot parse `{field}`", expected[j]),
                })?;
                vals.push(v);
            }
            let raw = rec.get(schema.width()).unwrap_or("");
            let label = parse_label(raw).ok_or_else(|| Error::InvalidRow {
                row: i,
                reason: format!("label must be -1 or +1, got `{raw}`"),
            })?;
            rows.push(vals);
            labels.push(label);
        }
        LabeledDataset::new(schema, rows, labels)
    }

    pub fn load(schema: &FeatureSchema, path: impl AsRef<Path>) -> Result<Self> {
        LabeledDataset::from_csv_reader(schema, std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, schema: &FeatureSchema, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(schema.names().chain(std::iter::once("label")))?;
        for (r, l) in self.rows.iter().zip(&self.labels) {
            let mut rec: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            rec.push(i64::from(*l).to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], Label)> {
        self.rows.iter().map(Vec::as_slice).zip(self.labels.iter().copied())
    }
}

fn parse_label(s: &str) -> Option<Label> {
    match s.trim() {
        "-1" | "-1.0" => Some(Label::Negative),
        "1" | "+1" | "1.0" | "+1.0" => Some(Label::Positive),
        _ => None,
    }
}
