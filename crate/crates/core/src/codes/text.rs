//! Plain-text matrix format.
//!
//! ```text
//! m n
//! a_11 a_12 ... a_1n
//! ...
//! a_m1 a_m2 ... a_mn
//! ```
//!
//! Every entry is one of the tokens `-1`, `0`, `1`. The file ends with a
//! newline and carries nothing else.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{CodingMatrix, MatrixKind};
use crate::error::{Error, Result};

impl CodingMatrix {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n_classes(), self.n_codes());
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text format. The result has kind [`MatrixKind::Custom`].
    pub fn parse_text(text: &str) -> Result<Self> {
        parse(text, Path::new("<matrix>"))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse(&text, path)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

fn parse(text: &str, path: &Path) -> Result<CodingMatrix> {
    let err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };
    if !text.ends_with('\n') {
        return Err(Error::Format {
            path: path.into(),
            msg: "matrix text must end with a newline".into(),
        });
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();

    let header: Vec<&str> = lines[0].split_whitespace().collect();
    let dims: Vec<usize> = header
        .iter()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| err(1, format!("bad header `{}`", lines[0])))?;
    let [m, n] = dims[..] else {
        return Err(err(1, format!("header must be `m n`, got `{}`", lines[0])));
    };
    if m == 0 || n == 0 {
        return Err(err(1, "matrix dimensions must be positive".into()));
    }
    if lines.len() != m + 1 {
        return Err(err(
            lines.len().min(m + 2),
            format!("expected {m} rows, found {}", lines.len() - 1),
        ));
    }

    let mut rows = Vec::with_capacity(m);
    for (i, line) in lines[1..].iter().enumerate() {
        let lineno = i + 2;
        let row: Vec<i8> = line
            .split_whitespace()
            .map(|t| match t {
                "-1" => Ok(-1),
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(err(lineno, format!("invalid token `{other}`"))),
            })
            .collect::<Result<_>>()?;
        if row.len() != n {
            return Err(err(
                lineno,
                format!("expected {n} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    CodingMatrix::from_rows(&rows, MatrixKind::Custom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::harmonic_matrix;

    #[test]
    fn writes_header_and_rows() {
        let a = CodingMatrix::from_rows(&[[1, 0], [-1, 1]], MatrixKind::Custom).unwrap();
        assert_eq!(a.to_text(), "2 2\n1 0\n-1 1\n");
    }

    #[test]
    fn round_trips_entries() {
        let a = harmonic_matrix(6, 8).unwrap();
        let b = CodingMatrix::parse_text(&a.to_text()).unwrap();
        assert_eq!(b.kind(), MatrixKind::Custom);
        assert_eq!(b.with_kind(MatrixKind::Harmonic), a);
    }

    #[test]
    fn rejects_foreign_tokens() {
        for bad in [
            "1 2\n1 +1\n",
            "1 2\n1 2\n",
            "1 2\n1 -1 # x\n",
            "1 2\n1 -1",
            "1 2\n1\n",
            "2 2\n1 -1\n",
            "1 2\n1 -1\n\n",
            "1\n1\n",
            "x 2\n1 1\n",
            "0 2\n",
        ] {
            assert!(CodingMatrix::parse_text(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn reports_line_numbers() {
        match CodingMatrix::parse_text("2 2\n1 -1\n1 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
