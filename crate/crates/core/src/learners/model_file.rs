//! Single-file text container for a [`MulticlassModel`].
//!
//! ```text
//! ortho-ecoc-model 1
//! kind <matrix kind>
//! solver <solver>
//! labels <name per class> | labels -
//! params <l2_lambda> <max_epochs> <learning_rate> <convergence_tol>
//! mean <one value per feature>
//! scale <one value per feature>
//! matrix
//! <coding matrix in the matrix text format>
//! binary <column> <bias> <weight per feature>
//! ...
//! ```
//!
//! Reals are written in Rust's shortest round-trip decimal form, so a saved
//! model reloads bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::dataset::Standardizer;
use super::logistic::{LogisticModel, LogisticParams};
use super::multiclass::MulticlassModel;
use crate::codes::{CodingMatrix, MatrixKind};
use crate::decode::SolverKind;
use crate::error::{Error, Result};

const MAGIC: &str = "ortho-ecoc-model";
const VERSION: u32 = 1;

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!(" {v:?}")).collect()
}

impl MulticlassModel {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC} {VERSION}");
        let _ = writeln!(s, "kind {}", self.matrix.kind());
        let _ = writeln!(s, "solver {}", self.solver);
        match &self.class_names {
            Some(names) => {
                let _ = writeln!(s, "labels {}", names.join(" "));
            }
            None => s.push_str("labels -\n"),
        }
        let p = self
            .binaries
            .first()
            .map(|b| b.params())
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "params {:?} {} {:?} {:?}",
            p.l2_lambda, p.max_epochs, p.learning_rate, p.convergence_tol
        );
        let _ = writeln!(s, "mean{}", join(self.standardizer.mean()));
        let _ = writeln!(s, "scale{}", join(self.standardizer.scale()));
        s.push_str("matrix\n");
        s.push_str(&self.matrix.to_text());
        for (j, b) in self.binaries.iter().enumerate() {
            let _ = writeln!(s, "binary {j} {:?}{}", b.bias(), join(b.weights()));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        parse(text, Path::new("<model>"))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        parse(&text, path)
    }
}

struct Lines<'a> {
    path: &'a Path,
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            path: PathBuf::from(self.path),
            line: self.pos.max(1),
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Result<&'a str> {
        let line = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end of model file"))?;
        self.pos += 1;
        Ok(line)
    }

    /// Next line, which must start with `key`; returns the remaining tokens.
    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let line = self.next()?;
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(key) {
            return Err(self.err(format!("expected `{key}` line")));
        }
        Ok(tokens.collect())
    }

    fn reals(&self, tokens: &[&str]) -> Result<Vec<f64>> {
        tokens
            .iter()
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| self.err(format!("bad number `{t}`")))
            })
            .collect()
    }
}

fn parse(text: &str, path: &Path) -> Result<MulticlassModel> {
    let mut ln = Lines {
        path,
        lines: text.lines().collect(),
        pos: 0,
    };
    let header = ln.keyed(MAGIC)?;
    if header != [VERSION.to_string().as_str()] {
        return Err(ln.err(format!("unsupported model version {header:?}")));
    }
    let kind: MatrixKind = match ln.keyed("kind")?[..] {
        [k] => k
            .parse()
            .map_err(|_| ln.err(format!("unknown matrix kind `{k}`")))?,
        _ => return Err(ln.err("kind line needs one token")),
    };
    let solver: SolverKind = match ln.keyed("solver")?[..] {
        [k] => k
            .parse()
            .map_err(|_| ln.err(format!("unknown solver `{k}`")))?,
        _ => return Err(ln.err("solver line needs one token")),
    };
    let labels = ln.keyed("labels")?;
    let class_names = match labels[..] {
        ["-"] => None,
        _ => Some(labels.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
    };
    let params = match ln.keyed("params")?[..] {
        [l2, epochs, lr, tol] => {
            let v = ln.reals(&[l2, lr, tol])?;
            let max_epochs = epochs
                .parse()
                .map_err(|_| ln.err(format!("bad epoch count `{epochs}`")))?;
            LogisticParams {
                l2_lambda: v[0],
                max_epochs,
                learning_rate: v[1],
                convergence_tol: v[2],
            }
        }
        _ => return Err(ln.err("params line needs four values")),
    };
    let tokens = ln.keyed("mean")?;
    let mean = ln.reals(&tokens)?;
    let tokens = ln.keyed("scale")?;
    let scale = ln.reals(&tokens)?;
    let standardizer = Standardizer::from_parts(mean, scale).map_err(|e| ln.err(e.to_string()))?;

    ln.keyed("matrix")?;
    let dims = ln.lines.get(ln.pos).copied().unwrap_or("");
    let m: usize = dims
        .split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| ln.err("bad matrix header"))?;
    let end = ln.pos + 1 + m;
    if end > ln.lines.len() {
        return Err(ln.err("truncated matrix"));
    }
    let mut block = ln.lines[ln.pos..end].join("\n");
    block.push('\n');
    let matrix = CodingMatrix::parse_text(&block)
        .map_err(|e| ln.err(format!("embedded matrix: {e}")))?
        .with_kind(kind);
    ln.pos = end;

    let mut binaries = Vec::with_capacity(matrix.n_codes());
    for j in 0..matrix.n_codes() {
        let tokens = ln.keyed("binary")?;
        if tokens.first().and_then(|t| t.parse::<usize>().ok()) != Some(j) {
            return Err(ln.err(format!("expected binary {j}")));
        }
        let v = ln.reals(&tokens[1..])?;
        let (bias, weights) = v
            .split_first()
            .ok_or_else(|| ln.err("binary line needs a bias"))?;
        binaries.push(LogisticModel::from_parts(weights.to_vec(), *bias, params)?);
    }
    if ln.lines[ln.pos..].iter().any(|l| !l.trim().is_empty()) {
        ln.pos += 1;
        return Err(ln.err("trailing content after last binary"));
    }
    MulticlassModel::new(matrix, binaries, solver, standardizer, class_names)
}
