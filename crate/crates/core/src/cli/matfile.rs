//! Plain-text matrix files.
//!
//! ```text
//! # optional comment lines
//! complex 2 2
//! 1,0 0,1
//! 0,-1 2,0
//! ```
//!
//! The header is `<field> <rows> <cols>` with field `real` or `complex`; entries follow in
//! row-major order separated by any whitespace. Complex entries are `re,im` without spaces.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::numcore::{c64, is_real, ComplexMatrix, Field};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// A parsed matrix file; the matrix is always complex.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub field: Field,
    pub matrix: ComplexMatrix,
}

/// Whitespace-separated tokens with their 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    let mut column = 0;
    let mut start_column = 0;
    for (i, ch) in line.char_indices() {
        column += 1;
        match (ch.is_whitespace(), start) {
            (false, None) => {
                start = Some(i);
                start_column = column;
            }
            (true, Some(s)) => {
                out.push((start_column, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((start_column, &line[s..]));
    }
    out
}

fn parse_real(text: &str, line: usize, column: usize) -> Result<f64, ParseError> {
    let value: f64 = text
        .parse()
        .map_err(|_| error(line, column, format!("invalid number `{text}`")))?;
    if !value.is_finite() {
        return Err(error(line, column, format!("non-finite entry `{text}`")));
    }
    Ok(value)
}

pub fn parse_matrix_str(text: &str) -> Result<MatrixFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });
    let (header_line, header) = lines.next().ok_or_else(|| error(1, 1, "missing header"))?;
    let head = tokens(header);
    if head.len() != 3 {
        return Err(error(header_line, 1, "header must be `<field> <rows> <cols>`"));
    }
    let field = match head[0].1 {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => {
            return Err(error(
                header_line,
                head[0].0,
                format!("unknown field `{other}`, expected `real` or `complex`"),
            ))
        }
    };
    let dim = |(column, t): (usize, &str)| {
        t.parse::<usize>()
            .map_err(|_| error(header_line, column, format!("invalid dimension `{t}`")))
    };
    let rows = dim(head[1])?;
    let cols = dim(head[2])?;
    let expected = rows * cols;

    let mut entries = Vec::with_capacity(expected);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        for (column, token) in tokens(content) {
            if entries.len() == expected {
                return Err(error(
                    line,
                    column,
                    format!("too many entries, expected {expected}"),
                ));
            }
            let value = match field {
                Field::Real => {
                    if token.contains(',') {
                        return Err(error(line, column, "complex entry in a real file"));
                    }
                    c64(parse_real(token, line, column)?, 0.0)
                }
                Field::Complex => {
                    let (re, im) = token.split_once(',').ok_or_else(|| {
                        error(line, column, format!("complex entry `{token}` must be `re,im`"))
                    })?;
                    let im_column = column + re.chars().count() + 1;
                    c64(parse_real(re, line, column)?, parse_real(im, line, im_column)?)
                }
            };
            entries.push(value);
        }
    }
    if entries.len() != expected {
        return Err(error(
            last_line,
            1,
            format!(
                "expected {expected} entries for a {rows}x{cols} matrix, found {}",
                entries.len()
            ),
        ));
    }
    Ok(MatrixFile {
        field,
        matrix: ComplexMatrix::from_row_slice(rows, cols, &entries),
    })
}

/// Reads and parses a matrix file.
pub fn parse_matrix(path: &Path) -> Result<MatrixFile, super::CliError> {
    let bytes = std::fs::read(path).map_err(|source| super::CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix_bytes(path, &bytes)
}

pub(crate) fn parse_matrix_bytes(path: &Path, bytes: &[u8]) -> Result<MatrixFile, super::CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| super::CliError::Parse {
        path: path.display().to_string(),
        source: error(1, 1, format!("not valid UTF-8: {e}")),
    })?;
    parse_matrix_str(text).map_err(|source| super::CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Writes `m` in the file format. Entries use the shortest decimal form that parses back
/// to the same `f64`, so a round trip is exact. `Field::Real` drops imaginary parts and
/// is only appropriate for real matrices.
pub fn format_matrix(m: &ComplexMatrix, field: Field) -> String {
    let mut out = format!("{} {} {}\n", field.name(), m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if j > 0 {
                out.push(' ');
            }
            let z = m[(i, j)];
            match field {
                Field::Real => write!(out, "{}", z.re),
                Field::Complex => write!(out, "{},{}", z.re, z.im),
            }
            .expect("writing to a String cannot fail");
        }
        out.push('\n');
    }
    out
}

/// The narrowest field that represents `m` exactly.
pub fn natural_field(m: &ComplexMatrix) -> Field {
    if is_real(m) {
        Field::Real
    } else {
        Field::Complex
    }
}
