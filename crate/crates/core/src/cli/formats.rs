//! Sparse dataset files and decision-value files.
//!
//! Sparse dataset, one sample per non-empty line:
//!
//! ```text
//! <label> <index>:<value> <index>:<value> ...
//! ```
//!
//! Indices are 1-based and strictly increasing; absent indices are zero.
//! Labels are integers or reals and are numbered in order of first
//! appearance. Decision-value files hold one whitespace-separated row of
//! reals in `[-1, 1]` per sample.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::decode::DecisionVector;
use crate::error::{Error, Result};
use crate::learners::{Dataset, Features, Sample};

fn parse_error(path: &Path, line: usize, msg: String) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    }
}

/// Parses sparse dataset text. Class names are the label tokens as first
/// seen; `n_features` is the largest index present.
pub fn parse_sparse_text(text: &str, path: &Path) -> Result<Dataset> {
    let mut label_ids: HashMap<u64, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut raw: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
    let mut n_features = 0;

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let mut tokens = line.split_whitespace();
        let Some(label_tok) = tokens.next() else {
            continue;
        };
        let label_val: f64 = label_tok
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_error(path, lineno, format!("bad label `{label_tok}`")))?;
        // +0.0 and -0.0 name the same class
        let key = (label_val + 0.0).to_bits();
        let label = *label_ids.entry(key).or_insert_with(|| {
            names.push(label_tok.to_string());
            names.len() - 1
        });

        let mut pairs = Vec::new();
        let mut last = 0usize;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| {
                parse_error(path, lineno, format!("expected index:value, got `{tok}`"))
            })?;
            let idx: usize = idx.parse().ok().filter(|&k| k >= 1).ok_or_else(|| {
                parse_error(path, lineno, format!("bad feature index in `{tok}`"))
            })?;
            let val: f64 = val
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| {
                    parse_error(path, lineno, format!("bad feature value in `{tok}`"))
                })?;
            if idx <= last {
                return Err(parse_error(
                    path,
                    lineno,
                    format!("feature index {idx} does not increase (previous {last})"),
                ));
            }
            last = idx;
            pairs.push((idx - 1, val));
        }
        n_features = n_features.max(last);
        raw.push((label, pairs));
    }
    if raw.is_empty() {
        return Err(Error::Format {
            path: path.into(),
            msg: "no samples".into(),
        });
    }
    let samples = raw
        .into_iter()
        .map(|(label, pairs)| Sample {
            features: Features::Sparse(pairs),
            label,
        })
        .collect();
    Dataset::new(samples, n_features, names.len())?.with_class_names(names)
}

pub fn parse_sparse_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sparse_text(&text, path)
}

/// Sparse text for `d`. Sparse samples keep their stored entries; dense
/// samples list their nonzero coordinates. Labels are the class names when
/// present, otherwise class indices.
pub fn to_sparse_text(d: &Dataset) -> String {
    let mut out = String::new();
    for s in d.samples() {
        match d.class_names() {
            Some(names) => out.push_str(&names[s.label]),
            None => out.push_str(&s.label.to_string()),
        }
        let pairs: Vec<(usize, f64)> = match &s.features {
            Features::Sparse(p) => p.clone(),
            Features::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0.0)
                .map(|(i, &x)| (i, x))
                .collect(),
        };
        for (i, v) in pairs {
            let _ = write!(out, " {}:{v:?}", i + 1);
        }
        out.push('\n');
    }
    out
}

pub fn write_sparse_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_sparse_text(d)).map_err(|e| Error::io(path, e))
}

/// Parses rows of `n` decision values in `[-1, 1]`; with `rows` given the
/// row count must match too.
pub fn parse_decision_text(
    text: &str,
    path: &Path,
    n: usize,
    rows: Option<usize>,
) -> Result<Vec<DecisionVector>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .enumerate()
            .map(|(j, t)| {
                let v: f64 = t.parse().map_err(|_| {
                    parse_error(
                        path,
                        lineno,
                        format!("bad decision value `{t}` in column {}", j + 1),
                    )
                })?;
                if !(-1.0..=1.0).contains(&v) {
                    return Err(parse_error(
                        path,
                        lineno,
                        format!("decision value {v} at column {} is outside [-1, 1]", j + 1),
                    ));
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        if values.len() != n {
            return Err(parse_error(
                path,
                lineno,
                format!("expected {n} decision values, found {}", values.len()),
            ));
        }
        out.push(DecisionVector::new(values)?);
    }
    if let Some(t) = rows {
        if out.len() != t {
            return Err(Error::Format {
                path: path.into(),
                msg: format!("expected {t} rows of decision values, found {}", out.len()),
            });
        }
    }
    Ok(out)
}

pub fn parse_decision_values(
    path: impl AsRef<Path>,
    n: usize,
    rows: Option<usize>,
) -> Result<Vec<DecisionVector>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_decision_text(&text, path, n, rows)
}
