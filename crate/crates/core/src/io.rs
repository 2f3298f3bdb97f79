//! Plain-text matrix files: a header line `m n`, then `m` rows of `n`
//! whitespace-separated numbers. Blank lines and `#` comments are skipped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{DenseMatrix, DenseVector};

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing `m n` header".into() })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line, msg: format!("bad dimension `{t}`: {e}") }))
        .collect::<Result<_>>()?;
    let [m, n] = dims[..] else {
        return Err(Error::Parse { line, msg: format!("expected `m n`, got `{header}`") });
    };

    let mut data = Vec::with_capacity(m * n);
    let mut seen = 0;
    for (line, row) in lines {
        if seen == m {
            return Err(Error::Parse { line, msg: format!("more than {m} rows") });
        }
        let vals = parse_numbers(row, line)?;
        if vals.len() != n {
            return Err(Error::Parse { line, msg: format!("expected {n} entries, got {}", vals.len()) });
        }
        data.extend(vals);
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse { line: text.lines().count(), msg: format!("expected {m} rows, got {seen}") });
    }
    DenseMatrix::from_vec(m, n, data)
}

fn parse_numbers(text: &str, line: usize) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse { line, msg: format!("bad number `{t}`: {e}") }))
        .collect()
}

/// Comma- or whitespace-separated list of numbers.
pub fn parse_vector(text: &str) -> Result<DenseVector> {
    DenseVector::new(parse_numbers(text, 1)?)
}

pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    parse_matrix(&text)
}

pub fn format_matrix(t: &DenseMatrix) -> String {
    let mut out = format!("{} {}\n", t.rows(), t.cols());
    for i in 0..t.rows() {
        let row: Vec<String> = t.row(i).iter().map(|&x| fmt_f64(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
