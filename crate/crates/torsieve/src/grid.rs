//! Plain-text grid format for matrices over F_q: one row per line, entries
//! as bare digits when q ≤ 10 and space-separated otherwise.

use thiserror::Error;
use torsieve_core::fqlinalg::MatFq;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("line {line}: cannot read entry '{token}'")]
    BadEntry { line: usize, token: String },
    #[error("line {line}: entry {value} is not below q = {q}")]
    OutOfRange { line: usize, value: u32, q: u32 },
    #[error("line {line}: expected {expected} entries, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },
}

pub fn to_grid(m: &MatFq) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row = m.row(r);
        let line = if m.q() <= 10 {
            row.iter().map(|x| char::from_digit(*x, 10).expect("digit")).collect::<String>()
        } else {
            row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Blank lines and lines starting with '#' are skipped.
pub fn from_grid(q: u32, text: &str) -> Result<MatFq, GridError> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<String> = if line.contains(char::is_whitespace) || q > 10 {
            line.split_whitespace().map(str::to_string).collect()
        } else {
            line.chars().map(String::from).collect()
        };
        let mut row = Vec::with_capacity(tokens.len());
        for t in tokens {
            let value: u32 = t.parse().map_err(|_| GridError::BadEntry {
                line: line_no,
                token: t.clone(),
            })?;
            if value >= q {
                return Err(GridError::OutOfRange { line: line_no, value, q });
            }
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(GridError::Ragged {
                    line: line_no,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(MatFq::zeros(q, 0, 0));
    }
    Ok(MatFq::from_rows(q, &rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = MatFq::from_rows(3, &[vec![0, 1, 2], vec![2, 2, 0]]);
        let s = to_grid(&m);
        assert_eq!(s, "012\n220\n");
        assert_eq!(from_grid(3, &s).unwrap(), m);
        let big = MatFq::from_rows(11, &[vec![10, 0], vec![3, 7]]);
        assert_eq!(to_grid(&big), "10 0\n3 7\n");
        assert_eq!(from_grid(11, &to_grid(&big)).unwrap(), big);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(from_grid(2, "012\n"), Err(GridError::OutOfRange { .. })));
        assert!(matches!(from_grid(2, "01\n1\n"), Err(GridError::Ragged { .. })));
        assert!(matches!(from_grid(2, "0x\n"), Err(GridError::BadEntry { .. })));
        assert_eq!(from_grid(2, "# comment\n\n10\n01\n").unwrap(), MatFq::identity(2, 2));
    }
}
