//! Plain-text matrix format.
//!
//! ```text
//! 2
//! 1 1
//! 1 -1
//! ```
//!
//! Line 1 holds the side length `m`; the next `m` lines hold `m`
//! whitespace-separated integers each. Trailing blank lines are allowed,
//! anything else after the last row is rejected.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SignMatrix, DEFAULT_MAX_SIZE};

pub fn format_matrix(a: &IntMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", a.size());
    for row in a.rows() {
        let mut first = true;
        for e in row {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{e}");
        }
        out.push('\n');
    }
    out
}

fn parse_token<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} token {token:?}"),
    })
}

pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing size line".into(),
    })?;
    let mut tokens = header.split_whitespace();
    let size_token = tokens.next().ok_or(Error::Parse {
        line: line_no,
        message: "missing size".into(),
    })?;
    let size: usize = parse_token(size_token, line_no, "size")?;
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse {
            line: line_no,
            message: format!("unexpected token {extra:?} after size"),
        });
    }
    if size > DEFAULT_MAX_SIZE {
        return Err(Error::Parse {
            line: line_no,
            message: format!("size {size} exceeds the maximum {DEFAULT_MAX_SIZE}"),
        });
    }

    let mut entries = Vec::with_capacity(size * size);
    for row in 1..=size {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: row + 1,
            message: format!("row {row}: missing, expected {size} rows"),
        })?;
        let before = entries.len();
        for token in line.split_whitespace() {
            entries.push(parse_token::<i32>(token, line_no, "integer")?);
        }
        let found = entries.len() - before;
        if found != size {
            return Err(Error::Parse {
                line: line_no,
                message: format!("row {row}: expected {size} entries, found {found}"),
            });
        }
    }

    for (line_no, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected content after {size} rows"),
            });
        }
    }

    IntMatrix::from_vec(size, entries)
}

/// Parses and additionally requires every entry to be `+1` or `-1`.
pub fn parse_sign_matrix(text: &str) -> Result<SignMatrix> {
    let matrix = parse_matrix(text)?;
    let size = matrix.size();
    if let Some(pos) = matrix.entries().iter().position(|&e| e != 1 && e != -1) {
        let (row, col) = (pos / size + 1, pos % size + 1);
        return Err(Error::Parse {
            line: row + 1,
            message: format!(
                "row {row}, column {col}: entry {} is not +1 or -1",
                matrix.entries()[pos]
            ),
        });
    }
    SignMatrix::new(matrix)
}
