use std::fmt::Write as _;

use super::protocol::{EvalReport, ExperimentSummary, Stat};

/// Column names of the tab-separated report, in order.
pub const TSV_FIELDS: [&str; 6] = [
    "uc",
    "brier",
    "accuracy",
    "total_time_s",
    "solution_time_s",
    "seed",
];

const NA: &str = "NA";

fn num(v: f64) -> String {
    format!("{v:.6}")
}

fn stat(s: Stat) -> String {
    format!("{:.6}±{:.6}", s.mean, s.std)
}

fn trial_row(r: &EvalReport) -> String {
    [
        num(r.uncertainty_coefficient),
        r.brier_score.map_or(NA.to_string(), num),
        num(r.accuracy),
        num(r.total_time_s),
        num(r.solution_time_s),
        r.seed.to_string(),
    ]
    .join("\t")
}

/// Header, one row per trial in trial order, and a `summary` row of
/// `mean±std` cells.
pub fn to_tsv(s: &ExperimentSummary) -> String {
    let mut out = TSV_FIELDS.join("\t");
    out.push('\n');
    for r in &s.reports {
        out.push_str(&trial_row(r));
        out.push('\n');
    }
    let summary = [
        stat(s.uncertainty_coefficient),
        s.brier_score.map_or(NA.to_string(), stat),
        stat(s.accuracy),
        stat(s.total_time_s),
        stat(s.solution_time_s),
        "summary".to_string(),
    ];
    out.push_str(&summary.join("\t"));
    out.push('\n');
    out
}

/// Context printed at the top of the text report.
#[derive(Debug, Clone, Default)]
pub struct ReportHeader {
    pub dataset: String,
    pub family: String,
    pub solver: String,
    pub base_seed: u64,
    /// Original label of each class index.
    pub labels: Vec<String>,
}

fn label_map(labels: &[String]) -> String {
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| format!("{l}={i}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `key: value` blocks: the header, one block per trial, then the summary.
pub fn to_text(h: &ReportHeader, s: &ExperimentSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dataset: {}", h.dataset);
    let _ = writeln!(out, "family: {}", h.family);
    let _ = writeln!(out, "solver: {}", h.solver);
    let _ = writeln!(out, "trials: {}", s.n_trials);
    let _ = writeln!(out, "seed: {}", h.base_seed);
    let _ = writeln!(out, "labels: {}", label_map(&h.labels));
    for (i, r) in s.reports.iter().enumerate() {
        out.push('\n');
        let _ = writeln!(out, "trial: {i}");
        let _ = writeln!(out, "seed: {}", r.seed);
        let _ = writeln!(out, "codes: {}", r.n_codes);
        let _ = writeln!(out, "n_test: {}", r.n_test);
        let _ = writeln!(out, "uc: {}", num(r.uncertainty_coefficient));
        let _ = writeln!(out, "brier: {}", r.brier_score.map_or(NA.to_string(), num));
        let _ = writeln!(out, "accuracy: {}", num(r.accuracy));
        let _ = writeln!(out, "total_time_s: {}", num(r.total_time_s));
        let _ = writeln!(out, "solution_time_s: {}", num(r.solution_time_s));
    }
    out.push('\n');
    out.push_str("summary:\n");
    let mut pair = |name: &str, st: Option<Stat>| match st {
        Some(st) => {
            let _ = writeln!(out, "{name}_mean: {}", num(st.mean));
            let _ = writeln!(out, "{name}_std: {}", num(st.std));
        }
        None => {
            let _ = writeln!(out, "{name}_mean: {NA}");
            let _ = writeln!(out, "{name}_std: {NA}");
        }
    };
    pair("uc", Some(s.uncertainty_coefficient));
    pair("brier", s.brier_score);
    pair("accuracy", Some(s.accuracy));
    pair("total_time_s", Some(s.total_time_s));
    pair("solution_time_s", Some(s.solution_time_s));
    out
}

/// Label mapping line emitted alongside every dataset-driven command.
pub fn labels_line(labels: &[String]) -> String {
    format!("labels: {}", label_map(labels))
}
