//! Matrix and matroid file formats.
//!
//! Text matrices are a `rows cols` header followed by one line per row of
//! space-separated floats printed with 17 significant digits, which re-parse
//! to the same bits. JSON matrices are `{"rows", "cols", "data"}` with
//! row-major data.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::matroids::Matroid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(Error::OutOfRange(format!("unknown format {other:?}"))),
        }
    }
}

pub fn format_matrix(m: &Matrix, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = format!("{} {}\n", m.rows(), m.cols());
            for i in 0..m.rows() {
                let line: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string(m).expect("matrix serializes");
            s.push('\n');
            s
        }
    }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn parse_matrix(input: &str) -> Result<Matrix> {
    if input.trim_start().starts_with('{') {
        return serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        });
    }
    let mut lines = input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (header_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: header_no + 1,
            message: format!("bad header: {e}"),
        })?;
    let [rows, cols] = dims[..] else {
        return Err(Error::Parse {
            line: header_no + 1,
            message: "header must be `rows cols`".into(),
        });
    };
    let mut data = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 20));
    let mut seen = 0;
    for (no, line) in lines {
        if seen == rows {
            return Err(Error::Parse {
                line: no + 1,
                message: format!("more than {rows} rows"),
            });
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(f64::from_str)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: no + 1,
                message: e.to_string(),
            })?;
        if row.len() != cols {
            return Err(Error::Parse {
                line: no + 1,
                message: format!("expected {cols} entries, found {}", row.len()),
            });
        }
        data.extend(row);
        seen += 1;
    }
    if seen != rows {
        return Err(Error::Parse {
            line: input.lines().count(),
            message: format!("expected {rows} rows, found {seen}"),
        });
    }
    Matrix::new(rows, cols, data)
}

pub fn format_matroid(m: &Matroid, format: Format) -> String {
    let s = m.to_serialized();
    match format {
        Format::Json => {
            let mut out = serde_json::to_string(&s).expect("matroid serializes");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = format!(
                "ground_size {} rank {} bases {}\n",
                s.ground_size,
                m.rank(),
                s.bases.len()
            );
            for b in &s.bases {
                let line: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let m = Matrix::from_rows(&[[1.0, -0.5], [0.0, 1.0 / 3.0]]).unwrap();
        let s = format_matrix(&m, Format::Text);
        assert_eq!(
            s,
            "2 2\n1.0000000000000000e0 -5.0000000000000000e-1\n0.0000000000000000e0 3.3333333333333331e-1\n"
        );
        assert_eq!(parse_matrix(&s).unwrap(), m);
    }

    #[test]
    fn json_layout() {
        let m = Matrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let s = format_matrix(&m, Format::Json);
        assert_eq!(s, "{\"rows\":1,\"cols\":2,\"data\":[1.0,2.0]}\n");
        assert_eq!(parse_matrix(&s).unwrap(), m);
    }

    #[test]
    fn malformed_inputs_are_errors() {
        for bad in [
            "",
            "2",
            "2 x",
            "1 2\n1.0",
            "1 2\n1.0 nope",
            "2 1\n1.0",
            "1 1\n1.0\n2.0",
            "1 1\nNaN",
            "0 0\n",
            "{\"rows\":1,\"cols\":2,\"data\":[1.0]}",
            "{\"rows\":1",
        ] {
            assert!(parse_matrix(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn matroid_formats() {
        let m = Matroid::uniform(2, 3).unwrap();
        assert_eq!(
            format_matroid(&m, Format::Json),
            "{\"ground_size\":3,\"bases\":[[1,2],[1,3],[2,3]]}\n"
        );
        assert_eq!(
            format_matroid(&m, Format::Text),
            "ground_size 3 rank 2 bases 3\n1 2\n1 3\n2 3\n"
        );
    }
}
