//! Command-line front end.
//!
//! All randomness comes from `--seed`: `gen-matrix` passes it straight to
//! the generator, and trial `i` of `benchmark` uses `seed + i`, from which
//! the split and matrix seeds are derived. `ORTHO_ECOC_THREADS` caps worker
//! threads (unset or 0: sequential).

pub mod formats;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::codes::{orthogonal_with_zeros, type2_params, validate, CodingMatrix, MatrixKind};
use crate::decode::{self, SolverKind};
use crate::error::{Error, Result};
use crate::eval::{self, MatrixFamily, ReportHeader};
use crate::learners::{train_multiclass_with, MulticlassModel, TrainOptions};
use crate::seed::DEFAULT_SEED;

pub use formats::{
    parse_decision_values, parse_sparse_dataset, to_sparse_text, write_sparse_dataset,
};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "ORTHO_ECOC_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "ortho-ecoc",
    version,
    about = "Multi-class classification with orthogonal error-correcting output codes"
)]
pub struct Cli {
    /// Print progress details to stderr.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a coding matrix in the plain-text matrix format.
    GenMatrix(GenMatrixArgs),
    /// Report orthogonality, gram matrix and column violations of a matrix file.
    ValidateMatrix(ValidateArgs),
    /// Train a model on a whole sparse dataset.
    Train(TrainArgs),
    /// Classify a dataset with a model, or decode a decision-value file.
    Predict(PredictArgs),
    /// Run the 70/30 split protocol over several seeded trials.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// one-vs-one, one-vs-rest, random, ortho-dense, ortho-zeros or harmonic.
    #[arg(long)]
    pub family: String,
    /// Code length for random and harmonic families.
    #[arg(long)]
    pub codes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenMatrixArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of classes (matrix rows).
    #[arg(long)]
    pub classes: usize,
    /// Seed for randomized families.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Matrix file to check.
    #[arg(long)]
    pub matrix: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Sparse training dataset.
    #[arg(long)]
    pub dataset: PathBuf,
    /// Matrix family; ignored when --matrix is given.
    #[arg(long, required_unless_present = "matrix")]
    pub family: Option<String>,
    #[arg(long)]
    pub codes: Option<usize>,
    /// Use a coding matrix file instead of a generated one.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// fast, lsq, kkt or vote; defaults to the family's natural solver.
    #[arg(long)]
    pub solver: Option<String>,
    /// Seed for randomized matrix families.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Model file to write.
    #[arg(long)]
    pub model: PathBuf,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Trained model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Sparse dataset to classify (requires --model).
    #[arg(long, conflicts_with = "decisions", requires = "model")]
    pub dataset: Option<PathBuf>,
    /// Decision-value file to decode.
    #[arg(long)]
    pub decisions: Option<PathBuf>,
    /// Coding matrix for --decisions without a model.
    #[arg(long, conflicts_with = "model")]
    pub matrix: Option<PathBuf>,
    /// Overrides the model's solver, or picks one for --matrix.
    #[arg(long)]
    pub solver: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Sparse dataset to split and evaluate.
    #[arg(long)]
    pub dataset: PathBuf,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// fast, lsq, kkt or vote; defaults to the family's natural solver.
    #[arg(long)]
    pub solver: Option<String>,
    /// Number of seeded trials.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Base seed; trial i uses seed + i.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// TSV output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the key: value text report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 on success, 1 on errors or matrix violations, 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

fn threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "{THREADS_ENV} must be a non-negative integer, got `{v}`"
            ))
        }),
        _ => Ok(0),
    }
}

fn parse_family(f: &FamilyArgs) -> Result<MatrixFamily> {
    Ok(f.family.parse::<MatrixFamily>()?.with_codes(f.codes))
}

fn parse_solver(s: Option<&str>, kind: MatrixKind) -> Result<SolverKind> {
    match s {
        Some(s) => s.parse(),
        None => Ok(SolverKind::default_for(kind)),
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::GenMatrix(a) => gen_matrix(a, cli.verbose, stdout, stderr),
        Command::ValidateMatrix(a) => {
            let m = CodingMatrix::read(&a.matrix)?;
            let report = validate(&m);
            let _ = write!(stdout, "{report}");
            Ok(if report.violations().is_empty() { 0 } else { 1 })
        }
        Command::Train(a) => train(a, cli.verbose, stderr),
        Command::Predict(a) => predict(a, stdout),
        Command::Benchmark(a) => benchmark(a, cli.verbose, stdout, stderr),
    }
}

fn gen_matrix(
    a: &GenMatrixArgs,
    verbose: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let family = parse_family(&a.family)?;
    let m = if family == MatrixFamily::OrthogonalZeros {
        let search = orthogonal_with_zeros(type2_params(a.classes)?, a.seed)?;
        if verbose {
            let _ = writeln!(
                stderr,
                "search: {} attempts, {} draws; pruned columns {:?}",
                search.attempts,
                search.draws,
                search.pruned.removed()
            );
        }
        search.matrix
    } else {
        family.build(a.classes, a.seed)?
    };
    emit(a.out.as_deref(), &m.to_text(), stdout)?;
    Ok(0)
}

fn train(a: &TrainArgs, verbose: bool, stderr: &mut dyn Write) -> Result<i32> {
    let d = parse_sparse_dataset(&a.dataset)?;
    let _ = writeln!(
        stderr,
        "{}",
        eval::labels_line(d.class_names().unwrap_or_default())
    );
    let matrix = match (&a.matrix, &a.family) {
        (Some(p), _) => CodingMatrix::read(p)?,
        (None, Some(f)) => {
            let fam = parse_family(&FamilyArgs {
                family: f.clone(),
                codes: a.codes,
            })?;
            fam.build(d.n_classes(), a.seed)?
        }
        (None, None) => return Err(Error::InvalidArgument("need --family or --matrix".into())),
    };
    let solver = parse_solver(a.solver.as_deref(), matrix.kind())?;
    let opts = TrainOptions {
        threads: threads()?,
        ..TrainOptions::default()
    };
    let model = train_multiclass_with(&d, &matrix, solver, &opts)?;
    model.save(&a.model)?;
    if verbose {
        let _ = writeln!(
            stderr,
            "trained {} binaries on {} samples; solver {solver}",
            matrix.n_codes(),
            d.len()
        );
    }
    Ok(0)
}

fn format_probs(p: &[f64]) -> String {
    p.iter().map(|v| format!(" {v:.6}")).collect()
}

fn predict(a: &PredictArgs, stdout: &mut dyn Write) -> Result<i32> {
    let model = a.model.as_ref().map(MulticlassModel::load).transpose()?;
    let mut out = String::new();
    if let Some(ds) = &a.dataset {
        let model = model
            .as_ref()
            .expect("clap enforces --model with --dataset");
        let d = parse_sparse_dataset(ds)?;
        for s in d.samples() {
            let class = model.predict_class(&s.features)?;
            out.push_str(&class_name(model.class_names(), class));
            if model.solver() != SolverKind::VoteOnly {
                out.push_str(&format_probs(&model.predict_proba(&s.features)?));
            }
            out.push('\n');
        }
    } else if let Some(dec) = &a.decisions {
        let (matrix, solver, names) = match &model {
            Some(m) => (m.matrix().clone(), m.solver(), m.class_names()),
            None => {
                let p = a.matrix.as_ref().ok_or_else(|| {
                    Error::InvalidArgument("--decisions needs --model or --matrix".into())
                })?;
                let matrix = CodingMatrix::read(p)?;
                let solver = parse_solver(a.solver.as_deref(), matrix.kind())?;
                (matrix, solver, None)
            }
        };
        let solver = match (&model, &a.solver) {
            (Some(_), Some(s)) => s.parse()?,
            _ => solver,
        };
        solver.check_compatible(&matrix)?;
        for r in parse_decision_values(dec, matrix.n_codes(), None)? {
            if solver == SolverKind::VoteOnly {
                out.push_str(&class_name(names, decode::vote(&matrix, &r)?));
            } else {
                let p = decode::decode(solver, &matrix, &r)?;
                out.push_str(&class_name(names, p.argmax()));
                out.push_str(&format_probs(&p));
            }
            out.push('\n');
        }
    } else {
        return Err(Error::InvalidArgument(
            "predict needs --dataset or --decisions".into(),
        ));
    }
    emit(a.out.as_deref(), &out, stdout)?;
    Ok(0)
}

fn class_name(names: Option<&[String]>, class: usize) -> String {
    names.map_or_else(|| class.to_string(), |n| n[class].clone())
}

fn benchmark(
    a: &BenchmarkArgs,
    verbose: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let d = parse_sparse_dataset(&a.dataset)?;
    let labels = d.class_names().unwrap_or_default().to_vec();
    let _ = writeln!(stderr, "{}", eval::labels_line(&labels));
    let family = parse_family(&a.family)?;
    let solver = parse_solver(a.solver.as_deref(), family.kind())?;
    let summary = eval::run_experiment(&d, family, solver, a.trials, a.seed, threads()?)?;
    if verbose {
        let _ = writeln!(
            stderr,
            "{} trials on {} samples, {} classes",
            summary.n_trials,
            d.len(),
            d.n_classes()
        );
    }
    emit(a.out.as_deref(), &eval::to_tsv(&summary), stdout)?;
    if let Some(p) = &a.report {
        let header = ReportHeader {
            dataset: a.dataset.display().to_string(),
            family: family.to_string(),
            solver: solver.to_string(),
            base_seed: a.seed,
            labels,
        };
        let text = eval::to_text(&header, &summary);
        fs::write(p, text).map_err(|e| Error::io(p, e))?;
    }
    Ok(0)
}
