//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, out-of-range
//! parameters), 2 when loading data, solving or writing output fails.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::data::{generate_mask, hide, read_mask, read_matrix, validate_labels, write_mask, write_matrix, zscore, HiddenView, Matrix};
use crate::error::Error;
use crate::experiments::{run_experiment, AlphaSetting, ExperimentConfig};
use crate::graph::build_graph;
use crate::metrics::evaluate;
use crate::predictor::{self, MaxEntModel};
use crate::solver::{solve, SolverConfig};
use crate::stats::paired_ttest_one_sided;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ldl-hidden", version, about = "Recover label distributions with hidden labels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hide labels from a ground-truth matrix and write the observation and mask.
    Hide {
        labels: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        missing_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        observed: PathBuf,
        #[arg(long)]
        mask: PathBuf,
    },
    /// Build the KNN similarity graph and write its weights and Laplacian.
    Graph {
        features: PathBuf,
        /// Neighbours per row; the solver uses the number of labels.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long)]
        zscore: bool,
        #[arg(long)]
        similarity: PathBuf,
        #[arg(long)]
        laplacian: PathBuf,
    },
    /// Recover the complete label distributions from an observation.
    Recover(RecoverArgs),
    /// Compare two label-distribution matrices with all five metrics.
    Evaluate {
        recovered: PathBuf,
        truth: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train or apply the softmax-linear predictor.
    Predict {
        #[command(subcommand)]
        action: PredictAction,
    },
    /// One-sided paired t-test that scores A are lower than scores B.
    Ttest {
        scores_a: PathBuf,
        scores_b: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a JSON config.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
struct RecoverArgs {
    #[arg(long)]
    observed: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Per-iteration residuals and objective, as CSV with a header.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Final scaling coefficient of every row, one per line.
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[arg(long, default_value_t = 0.25)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    rho: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    #[arg(long)]
    zscore: bool,
    /// Drop the proportional constraint.
    #[arg(long)]
    no_constraint: bool,
    /// Logged only; the solver is deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum PredictAction {
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 500)]
        max_iterations: usize,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Apply {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat table of mean and std per cell.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Metric curves over the swept parameter.
    #[arg(long)]
    curves: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixes α instead of selecting it from the config's grid.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Replaces the config's missing rates; repeat for several.
    #[arg(long)]
    missing_rate: Vec<f64>,
    #[arg(long)]
    zscore: bool,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_rate(rate: f64) -> Result<(), Failure> {
    if (0.0..1.0).contains(&rate) {
        Ok(())
    } else {
        Err(usage(format!("--missing-rate must lie in [0, 1), got {rate}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--{name} must be > 0, got {v}")))
    }
}

fn check_alpha(v: f64) -> Result<(), Failure> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(usage(format!("--alpha must be >= 0, got {v}")))
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let json = serde_json::to_string_pretty(value).map_err(Error::from)?;
    match out {
        Some(p) => fs::write(p, json + "\n").map_err(Error::from)?,
        None => println!("{json}"),
    }
    Ok(())
}

fn flatten_scores(path: &Path) -> Result<Vec<f64>, Failure> {
    Ok(read_matrix(path)?.transpose().iter().copied().collect())
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            EXIT_DATA
        }
    }
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Hide { labels, missing_rate, seed, observed, mask } => {
            check_rate(missing_rate)?;
            let labels = read_matrix(&labels)?;
            validate_labels(&labels)?;
            let m = generate_mask(&labels, missing_rate, seed)?;
            let view = hide(&labels, &m)?;
            write_matrix(&observed, &view.observed)?;
            write_mask(&mask, &m)?;
            log::info!("hid {} of {} entries, mask {}", m.hidden_count(), labels.len(), m.fingerprint());
        }
        Command::Graph { features, k, sigma, zscore: z, similarity, laplacian } => {
            check_positive("sigma", sigma)?;
            let mut x = read_matrix(&features)?;
            if z {
                x = zscore(&x);
            }
            if k == 0 || k >= x.nrows() {
                return Err(usage(format!("--k must lie in [1, {}], got {k}", x.nrows().saturating_sub(1))));
            }
            let g = build_graph(&x, k, sigma)?;
            write_matrix(&similarity, &g.similarity)?;
            write_matrix(&laplacian, &g.laplacian)?;
        }
        Command::Recover(a) => recover(a)?,
        Command::Evaluate { recovered, truth, out } => {
            let report = evaluate(&read_matrix(&recovered)?, &read_matrix(&truth)?)?;
            emit_json(&report, out.as_deref())?;
        }
        Command::Predict { action } => match action {
            PredictAction::Train { features, targets, model, max_iterations, tolerance, seed } => {
                check_positive("tolerance", tolerance)?;
                let fitted = predictor::fit(&read_matrix(&features)?, &read_matrix(&targets)?, max_iterations, tolerance, seed)?;
                emit_json(&fitted, Some(&model))?;
            }
            PredictAction::Apply { model, features, out } => {
                let text = fs::read_to_string(&model).map_err(Error::from)?;
                let fitted: MaxEntModel = serde_json::from_str(&text).map_err(Error::from)?;
                write_matrix(&out, &fitted.predict(&read_matrix(&features)?)?)?;
            }
        },
        Command::Ttest { scores_a, scores_b, level, out } => {
            if !(level > 0.0 && level < 1.0) {
                return Err(usage(format!("--level must lie in (0, 1), got {level}")));
            }
            let outcome = paired_ttest_one_sided(&flatten_scores(&scores_a)?, &flatten_scores(&scores_b)?, level)?;
            emit_json(&outcome, out.as_deref())?;
        }
        Command::Experiment(a) => experiment(a)?,
    }
    Ok(())
}

fn recover(a: RecoverArgs) -> Result<(), Failure> {
    check_alpha(a.alpha)?;
    check_positive("rho", a.rho)?;
    check_positive("sigma", a.sigma)?;
    check_positive("tolerance", a.tolerance)?;
    let observed = read_matrix(&a.observed)?;
    let mask = read_mask(&a.mask)?;
    let view = HiddenView::new(observed, mask)?;
    let mut x = read_matrix(&a.features)?;
    if a.zscore {
        x = zscore(&x);
    }
    if x.nrows() != view.n() {
        return Err(Error::Dimension(format!("{} feature rows for {} label rows", x.nrows(), view.n())).into());
    }
    let graph = build_graph(&x, view.m().min(view.n().saturating_sub(1)).max(1), a.sigma)?;
    let cfg = SolverConfig {
        alpha: a.alpha,
        rho: a.rho,
        max_iterations: a.max_iterations,
        residual_tolerance: a.tolerance,
        use_constraint: !a.no_constraint,
        seed: a.seed,
        ..SolverConfig::default()
    };
    let result = solve(&view, &graph, &cfg)?;
    log::info!("seed {}, step size {:.3e}", a.seed, result.step_size);
    if !result.converged {
        log::warn!(
            "stopped after {} iterations with residuals {:?}",
            result.iterations_used,
            result.final_residuals
        );
    }
    write_matrix(&a.out, &result.recovered)?;
    if let Some(p) = a.trace {
        let mut csv = String::from("iteration,residual_da,residual_db,objective\n");
        for r in result.trace() {
            csv += &format!("{},{},{},{}\n", r.iteration, r.residual_da, r.residual_db, r.objective);
        }
        fs::write(p, csv).map_err(Error::from)?;
    }
    if let Some(p) = a.coefficients {
        let k = Matrix::from_column_slice(result.scaling_coefficients.len(), 1, &result.scaling_coefficients);
        write_matrix(&p, &k)?;
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::from_json_file(&a.config)?;
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(alpha) = a.alpha {
        check_alpha(alpha)?;
        cfg.alpha = AlphaSetting::Value(alpha);
    }
    if let Some(rho) = a.rho {
        check_positive("rho", rho)?;
        cfg.rho = rho;
    }
    if let Some(sigma) = a.sigma {
        check_positive("sigma", sigma)?;
        cfg.sigma = sigma;
    }
    if !a.missing_rate.is_empty() {
        for &r in &a.missing_rate {
            check_rate(r)?;
        }
        cfg.missing_rates = a.missing_rate;
    }
    if a.zscore {
        cfg.zscore = true;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    let report = run_experiment(&cfg)?;
    emit_json(&report, a.out.as_deref())?;
    if let Some(p) = a.table {
        fs::write(p, report.table_csv()).map_err(Error::from)?;
    }
    if let Some(p) = a.curves {
        fs::write(p, report.curves_csv()).map_err(Error::from)?;
    }
    Ok(())
}
