//! Text formats: one sample per line in, CSV/JSON out.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use gdap_core::{IndexConvention, TimeSeries};
use nalgebra::DMatrix;

use crate::error::CliError;

/// 17 significant digits; round-trips every f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Parses one sample per line. A non-numeric first line is taken as a
/// header; blank lines are ignored.
pub fn parse_series(text: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue,
            Err(_) => {
                return Err(CliError::Validation {
                    kind: "ParseError",
                    message: format!("line {}: `{line}` is not a number", lineno + 1),
                })
            }
        }
    }
    Ok(values)
}

pub fn read_series(path: &Path, convention: IndexConvention) -> Result<TimeSeries, CliError> {
    let values = parse_series(&read_text(path)?)?;
    Ok(TimeSeries::new(values, convention)?)
}

/// Parses a comma-separated matrix, one row per line.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>, CliError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Validation {
                kind: "ParseError",
                message: format!("line {}: malformed matrix row", lineno + 1),
            })?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(CliError::Validation {
                    kind: "ParseError",
                    message: format!(
                        "line {}: expected {} columns, got {}",
                        lineno + 1,
                        first.len(),
                        row.len()
                    ),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Validation {
            kind: "ParseError",
            message: "matrix input is empty".into(),
        });
    }
    let (d, m) = (rows.len(), rows[0].len());
    Ok(DMatrix::from_fn(d, m, |i, j| rows[i][j]))
}

pub fn matrix_csv(data: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for row in data.row_iter() {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_rows(data: &DMatrix<f64>) -> Vec<Vec<f64>> {
    data.row_iter()
        .map(|r| r.iter().copied().collect())
        .collect()
}

/// Writes to `path`, or standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_is_skipped() {
        assert_eq!(
            parse_series("value\n1.5\n-2\n\n3e2\n").unwrap(),
            vec![1.5, -2.0, 300.0]
        );
        assert!(parse_series("1\nvalue\n").is_err());
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MAX, 0.0] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn matrix_parsing() {
        let m = parse_matrix("1,2,3\n4,5,6\n").unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 2)], 6.0);
        assert!(parse_matrix("1,2\n3\n").is_err());
        assert!(parse_matrix("").is_err());
        let back = parse_matrix(&matrix_csv(&m)).unwrap();
        assert_eq!(back, m);
    }
}
