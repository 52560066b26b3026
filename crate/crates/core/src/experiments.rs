//! Seeded, reproducible experiment runs.
//!
//! A run is a grid of trials `(missing rate, repeat, variant)`. Every trial
//! of one `(rate, repeat)` pair sees the same mask, generated from the seed
//! `base_seed + repeat`. Trials run in parallel; results are collected in
//! grid order so a report depends only on its configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{generate_mask, hide, load_dataset, split_indices, zscore, Dataset, HiddenView, Matrix};
use crate::error::{Error, Result};
use crate::graph::{build_graph, SimilarityGraph};
use crate::metrics::{evaluate, mean_std, MetricKind, MetricReport};
use crate::predictor;
use crate::solver::{solve, IterationRecord, RecoveryResult, SolverConfig};
use crate::stats::{paired_ttest_one_sided, TTestOutcome};
use crate::synthetic::{generate, SyntheticSpec};

/// `2^-10, 2^-9, ..., 2^10`.
pub fn default_alpha_grid() -> Vec<f64> {
    (-10..=10).map(|e| 2f64.powi(e)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic(SyntheticSpec),
    Files { features: PathBuf, labels: PathBuf },
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource::Synthetic(SyntheticSpec::default())
    }
}

impl DatasetSource {
    pub fn load(&self) -> Result<Dataset> {
        match self {
            DatasetSource::Synthetic(spec) => Ok(generate(spec)?.dataset),
            DatasetSource::Files { features, labels } => load_dataset(features, labels),
        }
    }
}

/// A single α, or a grid to select from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSetting {
    Value(f64),
    Grid(Vec<f64>),
}

impl AlphaSetting {
    pub fn values(&self) -> Vec<f64> {
        match self {
            AlphaSetting::Value(a) => vec![*a],
            AlphaSetting::Grid(g) => g.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Recovery,
    Predictive,
    Ablation,
    AlphaSweep,
    MissingRateSweep,
}

/// What produces the recovered matrix in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Full,
    WithoutConstraint,
    WithoutTraceNorm,
    /// The observation itself, unchanged.
    Identity,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::WithoutConstraint => "without_constraint",
            Variant::WithoutTraceNorm => "without_trace_norm",
            Variant::Identity => "identity",
        }
    }

    /// Solver settings for this variant, `None` for the identity baseline.
    pub fn solver_config(self, base: &SolverConfig) -> Option<SolverConfig> {
        match self {
            Variant::Full => Some(base.clone()),
            Variant::WithoutConstraint => Some(SolverConfig { use_constraint: false, ..base.clone() }),
            Variant::WithoutTraceNorm => Some(SolverConfig { alpha: 0.0, ..base.clone() }),
            Variant::Identity => None,
        }
    }
}

/// Recovers `hidden` with one variant. The solver result is absent for the
/// identity baseline.
pub fn recover_variant(
    variant: Variant,
    hidden: &HiddenView,
    graph: &SimilarityGraph,
    base: &SolverConfig,
) -> Result<(Matrix, Option<RecoveryResult>)> {
    match variant.solver_config(base) {
        None => Ok((hidden.observed.clone(), None)),
        Some(cfg) => {
            let r = solve(hidden, graph, &cfg)?;
            Ok((r.recovered.clone(), Some(r)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AblationFlags {
    pub without_constraint: bool,
    pub without_trace_norm: bool,
}

impl Default for AblationFlags {
    fn default() -> Self {
        AblationFlags { without_constraint: true, without_trace_norm: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PredictorSettings {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub train_fraction: f64,
}

impl Default for PredictorSettings {
    fn default() -> Self {
        PredictorSettings { max_iterations: 500, tolerance: 1e-6, train_fraction: 0.8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub name: String,
    pub dataset: DatasetSource,
    pub mode: Mode,
    pub missing_rates: Vec<f64>,
    pub repeats: usize,
    pub alpha: AlphaSetting,
    /// Gaussian kernel bandwidth of the similarity graph.
    pub sigma: f64,
    pub rho: f64,
    pub seed: u64,
    pub zscore: bool,
    pub max_iterations: usize,
    pub residual_tolerance: f64,
    pub ablation: AblationFlags,
    pub predictor: PredictorSettings,
    pub significance_level: f64,
    /// Keep every solver's per-iteration residuals in the report.
    pub keep_traces: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "synthetic".into(),
            dataset: DatasetSource::default(),
            mode: Mode::Recovery,
            missing_rates: vec![0.4, 0.5, 0.6, 0.7, 0.8],
            repeats: 5,
            alpha: AlphaSetting::Grid(default_alpha_grid()),
            sigma: 1.0,
            rho: 2.0,
            seed: 0,
            zscore: false,
            max_iterations: 100,
            residual_tolerance: 1e-3,
            ablation: AblationFlags::default(),
            predictor: PredictorSettings::default(),
            significance_level: 0.05,
            keep_traces: true,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg: ExperimentConfig = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if let DatasetSource::Files { features, labels } = &mut cfg.dataset {
            let base = path.parent().unwrap_or(Path::new("."));
            *features = base.join(&*features);
            *labels = base.join(&*labels);
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats < 1 {
            return Err(Error::InvalidArgument("repeats must be >= 1".into()));
        }
        if self.missing_rates.is_empty() {
            return Err(Error::InvalidArgument("no missing rates given".into()));
        }
        if let Some(r) = self.missing_rates.iter().find(|r| !(**r >= 0.0 && **r < 1.0)) {
            return Err(Error::InvalidArgument(format!("missing rate {r} outside [0, 1)")));
        }
        let alphas = self.alpha.values();
        if alphas.is_empty() {
            return Err(Error::InvalidArgument("alpha grid is empty".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be > 0, got {}", self.sigma)));
        }
        for &alpha in &alphas {
            self.solver_config(alpha).validate()?;
        }
        if !(self.significance_level > 0.0 && self.significance_level < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "significance level {} outside (0, 1)",
                self.significance_level
            )));
        }
        Ok(())
    }

    pub fn solver_config(&self, alpha: f64) -> SolverConfig {
        SolverConfig {
            alpha,
            rho: self.rho,
            max_iterations: self.max_iterations,
            residual_tolerance: self.residual_tolerance,
            ..SolverConfig::default()
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    fn trial_seed(&self, repeat: usize) -> u64 {
        self.seed.wrapping_add(repeat as u64)
    }

    fn variants(&self) -> Vec<Variant> {
        match self.mode {
            Mode::Recovery | Mode::MissingRateSweep | Mode::Predictive => vec![Variant::Full, Variant::Identity],
            Mode::Ablation => {
                let mut v = vec![Variant::Full];
                if self.ablation.without_constraint {
                    v.push(Variant::WithoutConstraint);
                }
                if self.ablation.without_trace_norm {
                    v.push(Variant::WithoutTraceNorm);
                }
                v
            }
            Mode::AlphaSweep => vec![Variant::Full],
        }
    }
}

/// Mean and sample standard deviation over trial means, with the trial values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
    pub trials: Vec<f64>,
}

impl Aggregate {
    pub fn from_trials(trials: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&trials);
        Aggregate { mean, std, trials }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatedMetrics {
    pub chebyshev: Aggregate,
    pub clark: Aggregate,
    pub canberra: Aggregate,
    pub cosine: Aggregate,
    pub intersection: Aggregate,
}

impl AggregatedMetrics {
    fn from_reports(reports: &[MetricReport]) -> Self {
        let col = |k| Aggregate::from_trials(reports.iter().map(|r| r.mean(k)).collect());
        AggregatedMetrics {
            chebyshev: col(MetricKind::Chebyshev),
            clark: col(MetricKind::Clark),
            canberra: col(MetricKind::Canberra),
            cosine: col(MetricKind::Cosine),
            intersection: col(MetricKind::Intersection),
        }
    }

    pub fn get(&self, kind: MetricKind) -> &Aggregate {
        match kind {
            MetricKind::Chebyshev => &self.chebyshev,
            MetricKind::Clark => &self.clark,
            MetricKind::Canberra => &self.canberra,
            MetricKind::Cosine => &self.cosine,
            MetricKind::Intersection => &self.intersection,
        }
    }
}

/// Solver summary of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialTrace {
    pub seed: u64,
    pub converged: bool,
    pub iterations: usize,
    pub final_residuals: (f64, f64),
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<IterationRecord>,
}

/// Results of one variant at one missing rate (and α for sweeps).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub missing_rate: f64,
    pub variant: Variant,
    pub alpha: f64,
    pub metrics: AggregatedMetrics,
    /// Fingerprint of the mask each trial used, in repeat order.
    pub mask_fingerprints: Vec<String>,
    pub traces: Vec<TrialTrace>,
}

/// One-sided test that the full method beats `baseline` on a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub missing_rate: f64,
    pub metric: MetricKind,
    pub baseline: Variant,
    pub test: TTestOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaSelection {
    pub missing_rate: f64,
    /// `(α, mean Canberra)` for every grid point.
    pub canberra_by_alpha: Vec<(f64, f64)>,
    pub selected: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_sha256: String,
    pub base_seed: u64,
    pub trial_seeds: Vec<u64>,
    pub crate_version: String,
    /// Seconds since the Unix epoch; the one field that differs between reruns.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub mode: Mode,
    pub n: usize,
    pub m: usize,
    pub provenance: Provenance,
    pub alpha_selection: Vec<AlphaSelection>,
    pub cells: Vec<Cell>,
    pub comparisons: Vec<Comparison>,
}

impl ExperimentReport {
    pub fn cell(&self, missing_rate: f64, variant: Variant) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.missing_rate == missing_rate && c.variant == variant)
    }

    /// One line per cell: rate, variant, α, then mean and std of every metric.
    pub fn table_csv(&self) -> String {
        let mut out = String::from("missing_rate,variant,alpha");
        for k in MetricKind::ALL {
            let _ = write!(out, ",{k}_mean,{k}_std");
        }
        out.push('\n');
        for c in &self.cells {
            let _ = write!(out, "{},{},{}", c.missing_rate, c.variant.name(), c.alpha);
            for k in MetricKind::ALL {
                let a = c.metrics.get(k);
                let _ = write!(out, ",{},{}", a.mean, a.std);
            }
            out.push('\n');
        }
        out
    }

    /// Curve points for plotting: the swept parameter followed by every metric mean.
    ///
    /// α sweeps are keyed by α, everything else by missing rate.
    pub fn curves_csv(&self) -> String {
        let sweep_alpha = self.mode == Mode::AlphaSweep;
        let mut out = String::from(if sweep_alpha { "missing_rate,alpha" } else { "variant,missing_rate" });
        for k in MetricKind::ALL {
            let _ = write!(out, ",{k}");
        }
        out.push('\n');
        let mut cells: Vec<&Cell> = self.cells.iter().collect();
        if !sweep_alpha {
            cells.sort_by(|a, b| a.variant.cmp(&b.variant).then(a.missing_rate.total_cmp(&b.missing_rate)));
        }
        for c in cells {
            if sweep_alpha {
                let _ = write!(out, "{},{}", c.missing_rate, c.alpha);
            } else {
                let _ = write!(out, "{},{}", c.variant.name(), c.missing_rate);
            }
            for k in MetricKind::ALL {
                let _ = write!(out, ",{}", c.metrics.get(k).mean);
            }
            out.push('\n');
        }
        out
    }
}

/// Everything a trial needs that does not depend on the variant.
struct Prepared {
    /// Data whose labels get hidden and recovered.
    train: Dataset,
    graph: SimilarityGraph,
    /// Held-out data for the predictive setting.
    test: Option<Dataset>,
}

fn prepare(config: &ExperimentConfig, dataset: &Dataset, repeat: usize) -> Result<Prepared> {
    let features = if config.zscore { zscore(&dataset.features) } else { dataset.features.clone() };
    let data = Dataset { features, ..dataset.clone() };
    let (train, test) = if config.mode == Mode::Predictive {
        let (tr, te) = split_indices(data.n(), config.predictor.train_fraction, config.trial_seed(repeat))?;
        (data.select_rows(&tr), Some(data.select_rows(&te)))
    } else {
        (data, None)
    };
    let graph = build_graph(&train.features, train.m(), config.sigma)?;
    Ok(Prepared { train, graph, test })
}

struct TrialResult {
    report: MetricReport,
    fingerprint: String,
    trace: Option<TrialTrace>,
}

fn run_trial(
    config: &ExperimentConfig,
    prepared: &Prepared,
    hidden: &HiddenView,
    variant: Variant,
    alpha: f64,
    seed: u64,
) -> Result<TrialResult> {
    let (recovered, result) = recover_variant(variant, hidden, &prepared.graph, &config.solver_config(alpha))?;
    let report = match &prepared.test {
        None => evaluate(&recovered, &prepared.train.labels)?,
        Some(test) => {
            let p = &config.predictor;
            let model = predictor::fit(&prepared.train.features, &recovered, p.max_iterations, p.tolerance, seed)?;
            evaluate(&model.predict(&test.features)?, &test.labels)?
        }
    };
    let trace = result.map(|r| TrialTrace {
        seed,
        converged: r.converged,
        iterations: r.iterations_used,
        final_residuals: r.final_residuals,
        history: if config.keep_traces { r.trace() } else { Vec::new() },
    });
    Ok(TrialResult { report, fingerprint: hidden.mask.fingerprint(), trace })
}

struct Job {
    rate_index: usize,
    repeat: usize,
    variant: Variant,
    alpha: f64,
}

/// Runs the jobs in parallel over shared per-repeat preparations and masks,
/// returning results in job order.
fn run_jobs(
    config: &ExperimentConfig,
    prepared: &[Prepared],
    hidden: &[Vec<HiddenView>],
    jobs: &[Job],
) -> Result<Vec<TrialResult>> {
    jobs.par_iter()
        .map(|job| {
            let rate = config.missing_rates[job.rate_index];
            run_trial(
                config,
                &prepared[job.repeat],
                &hidden[job.rate_index][job.repeat],
                job.variant,
                job.alpha,
                config.trial_seed(job.repeat),
            )
            .map_err(|e| {
                e.in_trial(format!(
                    "missing rate {rate}, repeat {}, variant {}, alpha {}",
                    job.repeat,
                    job.variant.name(),
                    job.alpha
                ))
            })
        })
        .collect()
}

fn assemble_cell(rate: f64, variant: Variant, alpha: f64, results: &[&TrialResult]) -> Cell {
    let reports: Vec<MetricReport> = results.iter().map(|r| r.report.clone()).collect();
    Cell {
        missing_rate: rate,
        variant,
        alpha,
        metrics: AggregatedMetrics::from_reports(&reports),
        mask_fingerprints: results.iter().map(|r| r.fingerprint.clone()).collect(),
        traces: results.iter().filter_map(|r| r.trace.clone()).collect(),
    }
}

/// Runs whatever `config.mode` asks for.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let dataset = config.dataset.load()?;
    run_on_dataset(config, &dataset)
}

/// Same as [`run_experiment`] on an already loaded dataset.
pub fn run_on_dataset(config: &ExperimentConfig, dataset: &Dataset) -> Result<ExperimentReport> {
    config.validate()?;
    let prepared: Vec<Prepared> = (0..config.repeats)
        .map(|r| prepare(config, dataset, r))
        .collect::<Result<_>>()?;
    let hidden: Vec<Vec<HiddenView>> = config
        .missing_rates
        .iter()
        .map(|&rate| {
            prepared
                .iter()
                .enumerate()
                .map(|(r, p)| {
                    let mask = generate_mask(&p.train.labels, rate, config.trial_seed(r))?;
                    hide(&p.train.labels, &mask)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let grid = config.alpha.values();
    let mut alpha_selection = Vec::new();
    let mut alpha_for_rate = vec![grid[0]; config.missing_rates.len()];

    if config.mode != Mode::AlphaSweep && grid.len() > 1 {
        let sweep = sweep_cells(config, &prepared, &hidden, &grid)?;
        for (ri, &rate) in config.missing_rates.iter().enumerate() {
            let curve: Vec<(f64, f64)> = sweep
                .iter()
                .filter(|c| c.missing_rate == rate)
                .map(|c| (c.alpha, c.metrics.canberra.mean))
                .collect();
            let selected = curve
                .iter()
                .copied()
                .reduce(|best, p| if p.1 < best.1 { p } else { best })
                .map(|p| p.0)
                .expect("grid is nonempty");
            log::info!("missing rate {rate}: selected alpha {selected}");
            alpha_for_rate[ri] = selected;
            alpha_selection.push(AlphaSelection { missing_rate: rate, canberra_by_alpha: curve, selected });
        }
    }

    let cells = if config.mode == Mode::AlphaSweep {
        sweep_cells(config, &prepared, &hidden, &grid)?
    } else {
        let variants = config.variants();
        let mut jobs = Vec::new();
        for (ri, &alpha) in alpha_for_rate.iter().enumerate() {
            for &variant in &variants {
                for repeat in 0..config.repeats {
                    jobs.push(Job { rate_index: ri, repeat, variant, alpha });
                }
            }
        }
        let results = run_jobs(config, &prepared, &hidden, &jobs)?;
        jobs.chunks(config.repeats)
            .zip(results.chunks(config.repeats))
            .map(|(js, rs)| {
                let j = &js[0];
                let alpha = if j.variant == Variant::WithoutTraceNorm { 0.0 } else { j.alpha };
                assemble_cell(config.missing_rates[j.rate_index], j.variant, alpha, &rs.iter().collect::<Vec<_>>())
            })
            .collect()
    };

    let comparisons = compare_with_full(config, &cells)?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(ExperimentReport {
        name: config.name.clone(),
        mode: config.mode,
        n: dataset.n(),
        m: dataset.m(),
        provenance: Provenance {
            config_sha256: config.fingerprint(),
            base_seed: config.seed,
            trial_seeds: (0..config.repeats).map(|r| config.trial_seed(r)).collect(),
            crate_version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
        },
        alpha_selection,
        cells,
        comparisons,
    })
}

fn sweep_cells(
    config: &ExperimentConfig,
    prepared: &[Prepared],
    hidden: &[Vec<HiddenView>],
    grid: &[f64],
) -> Result<Vec<Cell>> {
    let mut jobs = Vec::new();
    for ri in 0..config.missing_rates.len() {
        for &alpha in grid {
            for repeat in 0..config.repeats {
                jobs.push(Job { rate_index: ri, repeat, variant: Variant::Full, alpha });
            }
        }
    }
    let results = run_jobs(config, prepared, hidden, &jobs)?;
    Ok(jobs
        .chunks(config.repeats)
        .zip(results.chunks(config.repeats))
        .map(|(js, rs)| {
            assemble_cell(
                config.missing_rates[js[0].rate_index],
                Variant::Full,
                js[0].alpha,
                &rs.iter().collect::<Vec<_>>(),
            )
        })
        .collect())
}

/// Paired tests of the full method against every other variant at each rate.
/// Needs at least two repeats; returns nothing otherwise.
fn compare_with_full(config: &ExperimentConfig, cells: &[Cell]) -> Result<Vec<Comparison>> {
    if config.repeats < 2 || config.mode == Mode::AlphaSweep {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for &rate in &config.missing_rates {
        let Some(full) = cells.iter().find(|c| c.missing_rate == rate && c.variant == Variant::Full) else {
            continue;
        };
        for other in cells.iter().filter(|c| c.missing_rate == rate && c.variant != Variant::Full) {
            for kind in MetricKind::ALL {
                let (f, o) = (&full.metrics.get(kind).trials, &other.metrics.get(kind).trials);
                let test = if kind.lower_is_better() {
                    paired_ttest_one_sided(f, o, config.significance_level)?
                } else {
                    paired_ttest_one_sided(o, f, config.significance_level)?
                };
                out.push(Comparison { missing_rate: rate, metric: kind, baseline: other.variant, test });
            }
        }
    }
    Ok(out)
}

pub fn run_recovery(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig { mode: Mode::Recovery, ..config.clone() })
}

pub fn run_predictive(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig { mode: Mode::Predictive, ..config.clone() })
}

pub fn run_ablation(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig { mode: Mode::Ablation, ..config.clone() })
}

pub fn run_alpha_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig { mode: Mode::AlphaSweep, ..config.clone() })
}

pub fn run_missing_rate_sweep(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment(&ExperimentConfig { mode: Mode::MissingRateSweep, ..config.clone() })
}

/// Serializes a report with the timestamp zeroed, for byte comparisons.
pub fn without_timestamp(report: &ExperimentReport) -> Result<String> {
    let mut r = report.clone();
    r.provenance.timestamp = 0;
    Ok(serde_json::to_string_pretty(&r)?)
}
