//! CSV time series.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::Path;

use crate::diagnostics::{NormRow, NormSeries, TwinRow, NORM_COLUMNS, TWIN_COLUMNS};
use crate::error::{Error, Result};

/// `{:.16e}`: 17 significant digits, enough to round-trip any `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// Appends one row, writing `header` first if the file is missing or empty.
pub fn append_csv_row(path: impl AsRef<Path>, header: &[&str], values: &[f64]) -> Result<()> {
    let path = path.as_ref();
    if values.len() != header.len() {
        return Err(Error::ShapeMismatch {
            expected: header.len(),
            actual: values.len(),
        });
    }
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut text = String::new();
    if fresh {
        text.push_str(&header.join(","));
        text.push('\n');
    }
    let cells: Vec<String> = values.iter().map(|&v| format_value(v)).collect();
    text.push_str(&cells.join(","));
    text.push('\n');
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

pub fn append_series_row(path: impl AsRef<Path>, row: &NormRow) -> Result<()> {
    append_csv_row(path, &NORM_COLUMNS, &row.to_vec())
}

pub fn append_twin_row(path: impl AsRef<Path>, row: &TwinRow) -> Result<()> {
    append_csv_row(path, &TWIN_COLUMNS, &row.to_vec())
}

/// Reads a CSV written by [`append_csv_row`]: header plus numeric rows.
pub fn read_csv(path: impl AsRef<Path>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Format(format!("{}: empty file", path.display())))?
        .split(',')
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|c| {
                c.parse::<f64>().map_err(|e| {
                    Error::Format(format!("{} row {}: `{c}`: {e}", path.display(), i + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::Format(format!(
                "{} row {}: {} columns, header has {}",
                path.display(),
                i + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn read_series(path: impl AsRef<Path>) -> Result<NormSeries> {
    let (header, rows) = read_csv(path)?;
    if header != NORM_COLUMNS {
        return Err(Error::Format(format!("unexpected series header {header:?}")));
    }
    let mut series = NormSeries::new();
    for r in rows {
        series.push(NormRow::from_slice(&r)?)?;
    }
    Ok(series)
}
