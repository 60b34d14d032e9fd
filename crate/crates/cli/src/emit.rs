//! CSV tables of raw data and JSON reports.
//!
//! Every table starts with an integer `index` column; reals are written
//! with 17 significant digits so that parsing recovers them bit-exactly.

use crate::error::{CliError, Result};
use crate::report::VerificationReport;
use num_complex::Complex64;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// Column names after `index`.
    pub header: Vec<String>,
    pub index: Vec<u64>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            index: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Appends a row; its width must match the header.
    pub fn push(&mut self, index: u64, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(CliError::Config(format!(
                "row of width {} for {} columns",
                row.len(),
                self.header.len()
            )));
        }
        self.index.push(index);
        self.rows.push(row);
        Ok(())
    }

    /// `lambda_1 .. lambda_n`, one row per spectrum; shorter spectra are
    /// padded with NaN.
    pub fn real_spectra(spectra: &[Vec<f64>]) -> Self {
        let width = spectra.iter().map(Vec::len).max().unwrap_or(0);
        let mut t = Self::new(numbered("lambda", width));
        for (i, s) in spectra.iter().enumerate() {
            let mut row = s.clone();
            row.resize(width, f64::NAN);
            t.index.push(i as u64);
            t.rows.push(row);
        }
        t
    }

    /// `re_1, im_1, .., re_n, im_n`, one row per spectrum, NaN-padded.
    pub fn complex_spectra(spectra: &[Vec<Complex64>]) -> Self {
        let width = spectra.iter().map(Vec::len).max().unwrap_or(0);
        let mut t = Self::new(complex_header(width));
        for (i, s) in spectra.iter().enumerate() {
            let mut row = Vec::with_capacity(2 * width);
            for k in 0..width {
                let z = s
                    .get(k)
                    .copied()
                    .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                row.push(z.re);
                row.push(z.im);
            }
            t.index.push(i as u64);
            t.rows.push(row);
        }
        t
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// `prefix_1 .. prefix_n`.
pub fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}_{k}")).collect()
}

/// `re_1, im_1, .., re_n, im_n`.
pub fn complex_header(n: usize) -> Vec<String> {
    (1..=n)
        .flat_map(|k| [format!("re_{k}"), format!("im_{k}")])
        .collect()
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path, source: csv::Error) -> CliError {
    CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
        }
        _ => Ok(()),
    }
}

pub fn write_table<W: Write>(table: &Table, out: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["index".to_string()];
    header.extend(table.header.iter().cloned());
    w.write_record(&header)?;
    for (i, row) in table.index.iter().zip(&table.rows) {
        let mut rec = vec![i.to_string()];
        rec.extend(row.iter().map(|&x| format_real(x)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(table: &Table, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    write_table(table, BufWriter::new(f)).map_err(|e| csv_err(path, e))
}

pub fn read_csv(path: &Path) -> Result<Table> {
    let malformed = |reason: String| CliError::Malformed {
        path: path.to_path_buf(),
        reason,
    };
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    let mut r = csv::Reader::from_reader(f);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.first().map(String::as_str) != Some("index") {
        return Err(malformed("first column must be `index`".into()));
    }
    let mut t = Table::new(header[1..].to_vec());
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let index = rec[0]
            .parse::<u64>()
            .map_err(|e| malformed(format!("row {line}: index: {e}")))?;
        let row = rec
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| malformed(format!("row {line}: {e}")))?;
        t.push(index, row).map_err(|e| malformed(e.to_string()))?;
    }
    Ok(t)
}

pub fn write_json(report: &VerificationReport, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        source: e,
    })?;
    w.write_all(b"\n").map_err(|e| io_err(path, e))?;
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_json(path: &Path) -> Result<VerificationReport> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    serde_json::from_reader(f).map_err(|e| CliError::Json {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Something that can be written to disk.
#[derive(Clone, Copy, Debug)]
pub enum Artifact<'a> {
    Csv(&'a Table),
    Json(&'a VerificationReport),
}

pub fn emit(data: Artifact<'_>, path: &Path) -> Result<()> {
    match data {
        Artifact::Csv(t) => write_csv(t, path),
        Artifact::Json(r) => write_json(r, path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_round_trips() {
        for x in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            6.02e23,
            f64::MIN_POSITIVE,
            f64::MAX,
            -0.0,
        ] {
            let y: f64 = format_real(x).parse().unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{x}");
        }
    }

    #[test]
    fn complex_layout() {
        let z = vec![vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(3.0, 4.0),
            Complex64::new(5.0, 6.0),
        ]];
        let t = Table::complex_spectra(&z);
        assert_eq!(t.header, ["re_1", "im_1", "re_2", "im_2", "re_3", "im_3"]);
        assert_eq!(t.rows[0], [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let mut t = Table::new(vec!["a".into()]);
        assert!(t.push(0, vec![1.0, 2.0]).is_err());
    }
}
