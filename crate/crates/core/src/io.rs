//! Matrix Market dense-array file format.
//!
//! Files carry one matrix each: the header line
//! `%%MatrixMarket matrix array real general`, optional `%` comment lines, a
//! `rows cols` size line, then `rows * cols` values one per line in
//! column-major order. Values are written with 17 significant digits, which
//! round-trips every finite double exactly.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

const HEADER: &str = "%%MatrixMarket matrix array real general";

/// Errors from reading or writing matrix files. Read-side variants name the
/// 1-based line where the problem was found.
#[derive(Debug)]
pub enum MatrixMarketError {
    Io(std::io::Error),
    /// First line is not the dense real header.
    MalformedHeader {
        line: usize,
        detail: String,
    },
    /// No size line before the file ended.
    MissingSize {
        line: usize,
    },
    /// Size line does not hold two non-negative integers.
    InvalidSize {
        line: usize,
        token: String,
    },
    /// A body token failed to parse as a number.
    InvalidToken {
        line: usize,
        token: String,
    },
    /// A body value parsed but is NaN or infinite (or overflows the target
    /// precision).
    NonFiniteValue {
        line: usize,
        token: String,
    },
    /// Value count disagrees with the declared dimensions.
    EntryCount {
        line: usize,
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for MatrixMarketError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixMarketError::Io(e) => write!(f, "i/o failure: {e}"),
            MatrixMarketError::MalformedHeader { line, detail } => {
                write!(f, "line {line}: malformed header: {detail}")
            }
            MatrixMarketError::MissingSize { line } => {
                write!(f, "line {line}: missing size line")
            }
            MatrixMarketError::InvalidSize { line, token } => {
                write!(f, "line {line}: invalid size token {token:?}")
            }
            MatrixMarketError::InvalidToken { line, token } => {
                write!(f, "line {line}: non-numeric token {token:?}")
            }
            MatrixMarketError::NonFiniteValue { line, token } => {
                write!(f, "line {line}: non-finite value {token:?}")
            }
            MatrixMarketError::EntryCount {
                line,
                expected,
                got,
            } => write!(
                f,
                "line {line}: entry count mismatch: declared {expected}, found {got}"
            ),
        }
    }
}

impl std::error::Error for MatrixMarketError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            MatrixMarketError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for MatrixMarketError {
    fn from(e: std::io::Error) -> Self {
        MatrixMarketError::Io(e)
    }
}

/// Writes a matrix in the dense-array format.
pub fn write_matrix<T: Scalar>(
    a: &Matrix<T>,
    path: impl AsRef<Path>,
) -> Result<(), MatrixMarketError> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    write_to(a, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes to any sink; used by [`write_matrix`] and directly by tests.
pub fn write_to<T: Scalar>(a: &Matrix<T>, out: &mut impl Write) -> Result<(), MatrixMarketError> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{} {}", a.rows(), a.cols())?;
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let v = a.get(i, j).to_f64().expect("scalar converts to f64");
            writeln!(out, "{v:.16e}")?;
        }
    }
    Ok(())
}

/// Reads a matrix written by [`write_matrix`]. Comment lines starting with
/// `%` and blank lines are skipped anywhere after the header.
pub fn read_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>, MatrixMarketError> {
    let file = File::open(path)?;
    read_from(BufReader::new(file))
}

/// Reads from any buffered source; used by [`read_matrix`] and directly by
/// tests.
pub fn read_from<T: Scalar>(input: impl BufRead) -> Result<Matrix<T>, MatrixMarketError> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(MatrixMarketError::MalformedHeader {
                line: 1,
                detail: "empty file".into(),
            })
        }
    };
    parse_header(&header)?;

    let mut line_no = 1usize;
    let mut dims: Option<(usize, usize)> = None;
    let mut data: Vec<T> = Vec::new();
    let mut expected = 0usize;

    for line in lines {
        let line = line?;
        line_no += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        match dims {
            None => {
                let mut tokens = trimmed.split_whitespace();
                let rows = parse_dim(tokens.next(), line_no)?;
                let cols = parse_dim(tokens.next(), line_no)?;
                if let Some(extra) = tokens.next() {
                    return Err(MatrixMarketError::InvalidSize {
                        line: line_no,
                        token: extra.to_string(),
                    });
                }
                expected = rows * cols;
                dims = Some((rows, cols));
                data.reserve(expected);
            }
            Some(_) => {
                for token in trimmed.split_whitespace() {
                    if data.len() == expected {
                        return Err(MatrixMarketError::EntryCount {
                            line: line_no,
                            expected,
                            got: expected + 1,
                        });
                    }
                    let value: f64 =
                        token.parse().map_err(|_| MatrixMarketError::InvalidToken {
                            line: line_no,
                            token: token.to_string(),
                        })?;
                    let converted = T::from_f64(value);
                    match converted {
                        Some(v) if v.is_finite() => data.push(v),
                        _ => {
                            return Err(MatrixMarketError::NonFiniteValue {
                                line: line_no,
                                token: token.to_string(),
                            })
                        }
                    }
                }
            }
        }
    }

    let (rows, cols) = dims.ok_or(MatrixMarketError::MissingSize { line: line_no })?;
    if data.len() != expected {
        return Err(MatrixMarketError::EntryCount {
            line: line_no,
            expected,
            got: data.len(),
        });
    }

    // transpose the column-major stream into the row-major matrix
    let mut m = Matrix::zeros(rows, cols);
    for (idx, v) in data.into_iter().enumerate() {
        m.set(idx % rows, idx / rows, v);
    }
    Ok(m)
}

fn parse_header(line: &str) -> Result<(), MatrixMarketError> {
    let mut tokens = line.split_whitespace();
    let banner = tokens.next().unwrap_or("");
    if banner != "%%MatrixMarket" {
        return Err(MatrixMarketError::MalformedHeader {
            line: 1,
            detail: format!("expected %%MatrixMarket banner, found {banner:?}"),
        });
    }
    let rest: Vec<String> = tokens.map(|t| t.to_ascii_lowercase()).collect();
    let wanted = ["matrix", "array", "real", "general"];
    if rest.len() != wanted.len() || rest.iter().zip(wanted).any(|(got, want)| got != want) {
        return Err(MatrixMarketError::MalformedHeader {
            line: 1,
            detail: format!(
                "expected `matrix array real general`, found {:?}",
                rest.join(" ")
            ),
        });
    }
    Ok(())
}

fn parse_dim(token: Option<&str>, line: usize) -> Result<usize, MatrixMarketError> {
    let token = token.ok_or(MatrixMarketError::MissingSize { line })?;
    token.parse().map_err(|_| MatrixMarketError::InvalidSize {
        line,
        token: token.to_string(),
    })
}
