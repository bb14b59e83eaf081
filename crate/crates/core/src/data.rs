//! Row-major sample matrices and their CSV form.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    /// Observations on their original scale.
    Raw,
    /// Empirical distribution values in `(0, 1]`.
    RankTransformed,
}

/// `n x d` observations with column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    values: Vec<f64>,
    rows: usize,
    column_names: Vec<String>,
    kind: MatrixKind,
}

impl SampleMatrix {
    /// `values` is row-major with `column_names.len()` entries per row.
    pub fn new(values: Vec<f64>, column_names: Vec<String>, kind: MatrixKind) -> Result<Self> {
        let d = column_names.len();
        if d == 0 {
            return Err(Error::input("sample matrix needs at least one column"));
        }
        if values.is_empty() || !values.len().is_multiple_of(d) {
            return Err(Error::input(format!(
                "{} values do not fill whole rows of {d} columns",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::input(format!(
                "sample matrix contains a missing or non-finite value ({v})"
            )));
        }
        if kind == MatrixKind::RankTransformed && values.iter().any(|&v| !(v > 0.0 && v <= 1.0)) {
            return Err(Error::input("rank-transformed entries must lie in (0, 1]"));
        }
        Ok(SampleMatrix {
            rows: values.len() / d,
            values,
            column_names,
            kind,
        })
    }

    /// Raw matrix from columns of equal length; columns are named `X1..Xd`.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let names = (1..=columns.len()).map(|j| format!("X{j}")).collect();
        Self::from_named_columns(columns, names)
    }

    pub fn from_named_columns(columns: &[Vec<f64>], names: Vec<String>) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::input("columns have unequal lengths"));
        }
        let d = columns.len();
        let mut values = Vec::with_capacity(n * d);
        for k in 0..n {
            values.extend(columns.iter().map(|c| c[k]));
        }
        SampleMatrix::new(values, names, MatrixKind::Raw)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.column_names.len()
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, k: usize) -> &[f64] {
        let d = self.cols();
        &self.values[k * d..(k + 1) * d]
    }

    pub fn get(&self, k: usize, j: usize) -> f64 {
        self.values[k * self.cols() + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values
            .iter()
            .skip(j)
            .step_by(self.cols())
            .copied()
            .collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.cols())
    }

    /// Applies `f` to every entry of column `j`, producing a raw matrix.
    pub fn map_column(&self, j: usize, f: impl Fn(f64) -> f64) -> Result<SampleMatrix> {
        let d = self.cols();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| if idx % d == j { f(v) } else { v })
            .collect();
        SampleMatrix::new(values, self.column_names.clone(), MatrixKind::Raw)
    }

    pub(crate) fn with_kind(values: Vec<f64>, column_names: Vec<String>, kind: MatrixKind) -> Self {
        let rows = values.len() / column_names.len();
        SampleMatrix {
            values,
            rows,
            column_names,
            kind,
        }
    }

    /// Reads a headed CSV of decimals. Columns listed in `skip` (by header name) are ignored.
    pub fn from_csv_reader<R: Read>(reader: R, skip: &[String]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        for s in skip {
            if !headers.iter().any(|h| h == s) {
                return Err(Error::input(format!(
                    "column {s:?} not found in the header"
                )));
            }
        }
        let keep: Vec<usize> = (0..headers.len())
            .filter(|&i| !skip.iter().any(|s| s == &headers[i]))
            .collect();
        let names: Vec<String> = keep.iter().map(|&i| headers[i].to_string()).collect();
        let mut values = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            for &i in &keep {
                let field = record.get(i).unwrap_or("");
                if field.is_empty() {
                    return Err(Error::input(format!(
                        "missing value in column {:?}, data row {}",
                        &headers[i],
                        line + 1
                    )));
                }
                let v: f64 = field.parse().map_err(|_| {
                    Error::input(format!(
                        "value {field:?} in column {:?}, data row {} is not a number",
                        &headers[i],
                        line + 1
                    ))
                })?;
                values.push(v);
            }
        }
        if values.is_empty() {
            return Err(Error::input("input has no data rows"));
        }
        SampleMatrix::new(values, names, MatrixKind::Raw)
    }

    /// Header row of column names, then one line per row. Values use Rust's shortest
    /// round-trip formatting, so reading the file back reproduces the matrix exactly.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        wtr.write_record(&self.column_names)?;
        for row in self.iter_rows() {
            wtr.write_record(row.iter().map(|v| v.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}
