//! Experiment harness: violation profiles, LP cost sweeps, batched runs and
//! JSON/CSV reports.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use fairclust_core::baselines::{kmeanspp_baseline, plesnik_baseline};
use fairclust_core::metric::{distances_to_set, pow_p, root_p};
use fairclust_core::synth::gaussian_mixture;
use fairclust_core::{
    build_lp, clustering_cost, fair_radii, fair_round, solve_lp, sparsify_and_round, BetaChoice,
    LpBackend, MetricInstance, PNorm, SparsifyConfig,
};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::backend::BackendChoice;
use crate::data::{load_csv, sample_points, standardize, DataError};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Histogram edges for `theta`: 0 to 2 in steps of 0.25.
pub const DEFAULT_EDGES: [f64; 9] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

/// Slack on the hard per-row bounds, relative.
const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Core(#[from] fairclust_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Counts per bin: `[e0, e1]`, then `(e_i, e_{i+1}]`, then an overflow bin
/// for values above the last edge (including infinity).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(edges: &[f64], values: &[f64]) -> Self {
        let mut counts = vec![0; edges.len()];
        for &t in values {
            let bin = edges[1..]
                .iter()
                .position(|&e| t <= e)
                .unwrap_or(edges.len() - 1);
            counts[bin] += 1;
        }
        Self {
            edges: edges.to_vec(),
            counts,
        }
    }
}

/// `theta(v) = d(v,T) / r(v)`, with `theta = 0` when `d = 0` and `+inf` when
/// `r = 0 < d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationProfile {
    pub theta: Vec<f64>,
    /// Largest finite entry.
    pub max_violation: f64,
    /// Number of infinite entries.
    pub infinite: usize,
    pub histogram: Histogram,
    /// Share of points with `theta <= 1`.
    pub fair_fraction: f64,
}

pub fn violation_profile(
    inst: &MetricInstance,
    radii: &[f64],
    centers: &[usize],
    edges: &[f64],
) -> fairclust_core::Result<ViolationProfile> {
    let dist = distances_to_set(inst, centers)?;
    if radii.len() != dist.len() {
        return Err(fairclust_core::Error::LengthMismatch {
            expected: dist.len(),
            found: radii.len(),
        });
    }
    let theta: Vec<f64> = dist
        .iter()
        .zip(radii)
        .map(|(&d, &r)| {
            if d == 0.0 {
                0.0
            } else if r == 0.0 {
                f64::INFINITY
            } else {
                d / r
            }
        })
        .collect();
    let max_violation = theta
        .iter()
        .copied()
        .filter(|t| t.is_finite())
        .fold(0.0, f64::max);
    let infinite = theta.iter().filter(|t| t.is_infinite()).count();
    let fair = theta.iter().filter(|&&t| t <= 1.0).count();
    Ok(ViolationProfile {
        histogram: Histogram::new(edges, &theta),
        fair_fraction: fair as f64 / theta.len() as f64,
        max_violation,
        infinite,
        theta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(serialize_with = "ser_f64")]
    pub factor: f64,
    /// LP objective with radii `factor * r`; `None` when infeasible.
    #[serde(serialize_with = "ser_opt_f64")]
    pub lp_cost: Option<f64>,
}

/// LP objective for each dilation factor of the radii.
pub fn cost_of_fairness_sweep<B: LpBackend + ?Sized>(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    p: PNorm,
    grid: &[f64],
    epsilon: f64,
    backend: &B,
) -> Result<Vec<SweepPoint>, EvalError> {
    grid.iter()
        .map(|&factor| {
            if !(factor > 0.0) {
                return Err(EvalError::Config(format!(
                    "dilation factor {factor} must be positive"
                )));
            }
            let scaled: Vec<f64> = radii.iter().map(|r| r * factor).collect();
            let model = build_lp(inst, &scaled, k, p, None)?;
            let sol = solve_lp(&model, epsilon, backend)?;
            Ok(SweepPoint {
                factor,
                lp_cost: sol.is_feasible().then_some(sol.objective),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    FairRound,
    Sparse(f64),
    Plesnik,
    KMeansPP,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FairRound => f.write_str("fair_round"),
            Self::Sparse(d) => write!(f, "sparse({d})"),
            Self::Plesnik => f.write_str("plesnik"),
            Self::KMeansPP => f.write_str("kmeanspp"),
        }
    }
}

impl FromStr for Algorithm {
    type Err = String;

    /// `fair_round`, `plesnik`, `kmeanspp`, or `sparse(DELTA)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "fair_round" => Ok(Self::FairRound),
            "plesnik" => Ok(Self::Plesnik),
            "kmeanspp" => Ok(Self::KMeansPP),
            other => other
                .strip_prefix("sparse(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.parse::<f64>().ok())
                .filter(|d| *d > 0.0 && d.is_finite())
                .map(Self::Sparse)
                .ok_or_else(|| format!("unknown algorithm {s:?}")),
        }
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    Csv {
        path: PathBuf,
        features: Vec<String>,
    },
    /// Gaussian mixture in `dim` dimensions with `clusters` components.
    Synthetic {
        n: usize,
        dim: usize,
        clusters: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub standardize: bool,
    /// Points drawn per trial; `None` uses every point.
    pub sample_size: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub ks: Vec<usize>,
    #[serde(serialize_with = "ser_pnorm")]
    pub p: PNorm,
    pub algorithms: Vec<Algorithm>,
    #[serde(serialize_with = "ser_beta")]
    pub beta: BetaChoice,
    pub epsilon: f64,
    /// Radii handed to the LP and rounding are `dilation * r`; violations
    /// are always measured against `r`.
    pub dilation: f64,
    #[serde(serialize_with = "ser_display")]
    pub backend: BackendChoice,
    #[serde(skip)]
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(source: DataSource, ks: Vec<usize>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            source,
            standardize: false,
            sample_size: None,
            trials: 1,
            seed: 0,
            ks,
            p: PNorm::Finite(1.0),
            algorithms,
            beta: BetaChoice::default(),
            epsilon: 0.0,
            dilation: 1.0,
            backend: BackendChoice::default(),
            workers: 1,
        }
    }

    fn validate(&self) -> Result<(), EvalError> {
        let bad = |msg: String| Err(EvalError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.ks.is_empty() || self.ks.contains(&0) {
            return bad("k list must be non-empty and positive".into());
        }
        if self.algorithms.is_empty() {
            return bad("algorithm list is empty".into());
        }
        if !(self.dilation > 0.0 && self.dilation.is_finite()) {
            return bad(format!("dilation {} must be positive", self.dilation));
        }
        Ok(())
    }
}

/// One (algorithm, k, trial) result. `lp_cost` is an LP objective, in p-th
/// power units; `cost` is the l_p norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub trial: usize,
    pub n: usize,
    pub centers: usize,
    #[serde(serialize_with = "ser_opt_f64")]
    pub cost: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub lp_cost: Option<f64>,
    /// `cost / lp_cost^(1/p)`.
    #[serde(serialize_with = "ser_opt_f64")]
    pub cost_ratio: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub max_violation: Option<f64>,
    pub infinite_violations: usize,
    #[serde(serialize_with = "ser_opt_f64")]
    pub fair_fraction: Option<f64>,
    pub histogram: Vec<usize>,
    pub reduced_n: Option<usize>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub beta: Option<f64>,
    pub shortcut: Option<bool>,
    /// Hard guarantees of the algorithm, checked on this row.
    pub guarantee_ok: Option<bool>,
    /// `lp_cost^(1/p) <= cost`; informative only, since the rounded centers
    /// may break the radii the LP respects.
    pub lp_lower_bound_holds: Option<bool>,
    #[serde(serialize_with = "ser_f64")]
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

impl EvalRow {
    fn empty(algorithm: Algorithm, k: usize, trial: usize, n: usize) -> Self {
        Self {
            algorithm,
            k,
            trial,
            n,
            centers: 0,
            cost: None,
            lp_cost: None,
            cost_ratio: None,
            max_violation: None,
            infinite_violations: 0,
            fair_fraction: None,
            histogram: Vec::new(),
            reduced_n: None,
            beta: None,
            shortcut: None,
            guarantee_ok: None,
            lp_lower_bound_holds: None,
            wall_time_ms: 0.0,
            error: None,
        }
    }

    fn key(&self) -> (String, usize, usize) {
        (self.algorithm.to_string(), self.k, self.trial)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(serialize_with = "ser_f64")]
    pub mean: f64,
    #[serde(serialize_with = "ser_f64")]
    pub stddev: f64,
}

impl Summary {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Self {
            mean,
            stddev: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub k: usize,
    pub ok_trials: usize,
    pub failed_trials: usize,
    pub cost: Option<Summary>,
    pub max_violation: Option<Summary>,
    pub fair_fraction: Option<Summary>,
    pub wall_time_ms: Option<Summary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    /// Rows dropped while loading the data set.
    pub skipped_rows: usize,
    pub rows: Vec<EvalRow>,
    pub aggregates: Vec<Aggregate>,
}

impl EvalReport {
    /// Copy with every wall-time field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            row.wall_time_ms = 0.0;
        }
        out.aggregates = aggregate(&out.rows);
        out
    }
}

fn aggregate(rows: &[EvalRow]) -> Vec<Aggregate> {
    let mut out: Vec<Aggregate> = Vec::new();
    for group in rows.chunk_by(|a, b| a.algorithm == b.algorithm && a.k == b.k) {
        let ok: Vec<&EvalRow> = group.iter().filter(|r| r.error.is_none()).collect();
        let collect = |f: &dyn Fn(&EvalRow) -> Option<f64>| -> Option<Summary> {
            Summary::of(&ok.iter().filter_map(|r| f(r)).collect::<Vec<_>>())
        };
        out.push(Aggregate {
            algorithm: group[0].algorithm,
            k: group[0].k,
            ok_trials: ok.len(),
            failed_trials: group.len() - ok.len(),
            cost: collect(&|r| r.cost),
            max_violation: collect(&|r| r.max_violation),
            fair_fraction: collect(&|r| r.fair_fraction),
            wall_time_ms: collect(&|r| Some(r.wall_time_ms)),
        });
    }
    out
}

/// Loads, samples and evaluates every (trial, k, algorithm) combination.
/// Failures inside a trial are recorded on its rows.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EvalReport, EvalError> {
    cfg.validate()?;
    let (points, skipped_rows) = match &cfg.source {
        DataSource::Csv { path, features } => {
            let d = load_csv(path, features)?;
            (d.points, d.skipped)
        }
        DataSource::Synthetic { n, dim, clusters } => {
            (gaussian_mixture(*n, *dim, *clusters, 1.0, cfg.seed), 0)
        }
    };
    if let Some(m) = cfg.sample_size {
        if m > points.len() {
            return Err(DataError::SampleTooLarge {
                requested: m,
                available: points.len(),
            }
            .into());
        }
    }

    let run = || -> Vec<EvalRow> {
        (0..cfg.trials)
            .into_par_iter()
            .flat_map_iter(|trial| run_trial(cfg, &points, trial))
            .collect()
    };
    let mut rows = if cfg.workers > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| EvalError::Config(e.to_string()))?
            .install(run)
    } else {
        (0..cfg.trials)
            .flat_map(|trial| run_trial(cfg, &points, trial))
            .collect()
    };
    rows.sort_by_key(EvalRow::key);
    let aggregates = aggregate(&rows);
    Ok(EvalReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: cfg.clone(),
        skipped_rows,
        rows,
        aggregates,
    })
}

fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

fn run_trial(cfg: &ExperimentConfig, points: &[Vec<f64>], trial: usize) -> Vec<EvalRow> {
    let seed = trial_seed(cfg.seed, trial);
    let prepared = (|| -> Result<MetricInstance, EvalError> {
        let mut pts = match cfg.sample_size {
            Some(m) => sample_points(points, m, seed)?,
            None => points.to_vec(),
        };
        if cfg.standardize {
            standardize(&mut pts);
        }
        Ok(MetricInstance::from_points(&pts)?)
    })();
    let inst = match prepared {
        Ok(inst) => inst,
        Err(e) => {
            return cfg
                .ks
                .iter()
                .flat_map(|&k| {
                    let msg = e.to_string();
                    cfg.algorithms.iter().map(move |&a| {
                        let mut row = EvalRow::empty(a, k, trial, 0);
                        row.error = Some(msg.clone());
                        row
                    })
                })
                .collect();
        }
    };
    let mut rows = Vec::new();
    for &k in &cfg.ks {
        let mut shared = SharedLp::default();
        for &alg in &cfg.algorithms {
            let mut row = EvalRow::empty(alg, k, trial, inst.len());
            if let Err(e) = evaluate(cfg, &inst, k, alg, seed, &mut shared, &mut row) {
                row.error = Some(e.to_string());
            }
            rows.push(row);
        }
    }
    rows
}

/// The LP for one (trial, k), solved at most once.
#[derive(Default)]
struct SharedLp {
    solved: Option<(fairclust_core::LpSolution, f64)>,
}

fn p_exponent(p: PNorm) -> Option<f64> {
    p.exponent().ok()
}

fn evaluate(
    cfg: &ExperimentConfig,
    inst: &MetricInstance,
    k: usize,
    alg: Algorithm,
    seed: u64,
    shared: &mut SharedLp,
    row: &mut EvalRow,
) -> Result<(), EvalError> {
    let n = inst.len();
    if k > n {
        return Err(fairclust_core::Error::KOutOfRange { k, n }.into());
    }
    let radii = fair_radii(inst, k)?;
    let relaxed: Vec<f64> = radii.iter().map(|r| r * cfg.dilation).collect();
    let start = Instant::now();
    let mut violation_cap = None;
    let mut cost_cap = None;
    let centers = match alg {
        Algorithm::Plesnik => {
            violation_cap = Some(2.0 * cfg.dilation);
            plesnik_baseline(inst, &relaxed)?
        }
        Algorithm::KMeansPP => kmeanspp_baseline(inst, k, seed)?,
        Algorithm::FairRound => {
            let (sol, lp_ms) = match &shared.solved {
                Some(done) => done.clone(),
                None => {
                    let t = Instant::now();
                    let model = build_lp(inst, &relaxed, k, cfg.p, None)?;
                    let sol = solve_lp(&model, cfg.epsilon, &cfg.backend)?;
                    let ms = t.elapsed().as_secs_f64() * 1e3;
                    shared.solved = Some((sol.clone(), ms));
                    (sol, ms)
                }
            };
            sol.require_feasible()?;
            row.lp_cost = Some(sol.objective);
            let out = fair_round(inst, &relaxed, &sol, k, cfg.p, cfg.beta)?;
            row.beta = Some(out.beta_searched.unwrap_or(out.beta));
            row.shortcut = Some(out.shortcut);
            row.wall_time_ms = lp_ms;
            violation_cap = Some(8.0 * cfg.dilation);
            let p = p_exponent(cfg.p).unwrap_or(1.0);
            cost_cap = Some(pow_p(2.0, p + 2.0) * sol.objective);
            out.centers
        }
        Algorithm::Sparse(delta) => {
            let sc = SparsifyConfig {
                delta,
                epsilon: cfg.epsilon,
                beta: cfg.beta,
            };
            let (out, diag) = sparsify_and_round(inst, &relaxed, k, cfg.p, &sc, &cfg.backend)?;
            row.lp_cost = Some(diag.reduced_objective);
            row.reduced_n = Some(diag.reduced_n);
            row.beta = Some(out.beta_searched.unwrap_or(out.beta));
            row.shortcut = Some(out.shortcut);
            violation_cap = Some(8.0 * cfg.dilation * (1.0 + delta));
            let p = p_exponent(cfg.p).unwrap_or(1.0);
            cost_cap = Some(pow_p(2.0, p + 2.0) * (diag.reduced_objective + diag.additive_term));
            out.centers
        }
    };
    row.wall_time_ms += start.elapsed().as_secs_f64() * 1e3;

    let profile = violation_profile(inst, &radii, &centers, &DEFAULT_EDGES)?;
    let cost = clustering_cost(inst, &centers, cfg.p)?;
    row.centers = centers.len();
    row.cost = Some(cost);
    row.max_violation = Some(profile.max_violation);
    row.infinite_violations = profile.infinite;
    row.fair_fraction = Some(profile.fair_fraction);
    row.histogram = profile.histogram.counts;

    if let (Some(lp), Some(p)) = (row.lp_cost, p_exponent(cfg.p)) {
        let lp_root = root_p(lp, p);
        row.cost_ratio = (lp_root > 0.0).then(|| cost / lp_root);
        if alg == Algorithm::FairRound {
            row.lp_lower_bound_holds = Some(lp_root <= cost * (1.0 + BOUND_TOL) + BOUND_TOL);
        }
    }
    if let Some(vcap) = violation_cap {
        let mut ok = centers.len() <= k
            && profile.infinite == 0
            && profile.max_violation <= vcap * (1.0 + BOUND_TOL);
        if let (Some(ccap), Some(p)) = (cost_cap, p_exponent(cfg.p)) {
            ok &= pow_p(cost, p) <= ccap * (1.0 + BOUND_TOL) + BOUND_TOL;
        }
        row.guarantee_ok = Some(ok);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(format!("unknown format {s:?}; expected json or csv")),
        }
    }
}

pub const CSV_COLUMNS: [&str; 17] = [
    "algorithm",
    "k",
    "trial",
    "n",
    "centers",
    "cost",
    "lp_cost",
    "cost_ratio",
    "max_violation",
    "infinite_violations",
    "fair_fraction",
    "reduced_n",
    "beta",
    "shortcut",
    "guarantee_ok",
    "wall_time_ms",
    "error",
];

/// Writes `report` as pretty JSON or as one CSV line per row. CSV appends one
/// `hist_i` column per histogram bin.
pub fn emit_report<W: Write>(
    report: &EvalReport,
    format: ReportFormat,
    out: W,
) -> Result<(), EvalError> {
    match format {
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
            out.flush()?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header: Vec<String> = CSV_COLUMNS.iter().map(|s| s.to_string()).collect();
            header.extend((0..DEFAULT_EDGES.len()).map(|i| format!("hist_{i}")));
            w.write_record(&header)?;
            for r in &report.rows {
                let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
                let mut rec = vec![
                    r.algorithm.to_string(),
                    r.k.to_string(),
                    r.trial.to_string(),
                    r.n.to_string(),
                    r.centers.to_string(),
                    opt(r.cost),
                    opt(r.lp_cost),
                    opt(r.cost_ratio),
                    opt(r.max_violation),
                    r.infinite_violations.to_string(),
                    opt(r.fair_fraction),
                    r.reduced_n.map(|v| v.to_string()).unwrap_or_default(),
                    opt(r.beta),
                    r.shortcut.map(|v| v.to_string()).unwrap_or_default(),
                    r.guarantee_ok.map(|v| v.to_string()).unwrap_or_default(),
                    fmt_f64(r.wall_time_ms),
                    r.error.clone().unwrap_or_default(),
                ];
                for i in 0..DEFAULT_EDGES.len() {
                    rec.push(
                        r.histogram
                            .get(i)
                            .map(|c| c.to_string())
                            .unwrap_or_default(),
                    );
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Rounds to 12 significant digits; non-finite values become `None`.
pub fn round_sig(x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(0.0);
    }
    format!("{x:.11e}").parse().ok()
}

fn fmt_f64(x: f64) -> String {
    round_sig(x)
        .map(|v| v.to_string())
        .unwrap_or_else(|| x.to_string())
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    round_sig(*x).serialize(s)
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    x.and_then(round_sig).serialize(s)
}

fn ser_pnorm<S: Serializer>(p: &PNorm, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

fn ser_beta<S: Serializer>(b: &BetaChoice, s: S) -> Result<S::Ok, S::Error> {
    match b {
        BetaChoice::Fixed(v) => s.collect_str(v),
        BetaChoice::Search => s.serialize_str("search"),
    }
}

fn ser_display<S: Serializer, T: fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> MetricInstance {
        let pts: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        MetricInstance::from_points(&pts).unwrap()
    }

    #[test]
    fn histogram_bins() {
        let h = Histogram::new(
            &DEFAULT_EDGES,
            &[0.0, 0.25, 0.26, 1.0, 2.0, 2.01, f64::INFINITY],
        );
        assert_eq!(h.counts, [2, 1, 0, 1, 0, 0, 0, 1, 2]);
    }

    #[test]
    fn all_points_open() {
        let inst = line(&[0.0, 1.0, 3.0]);
        let p = violation_profile(&inst, &[1.0, 1.0, 2.0], &[0, 1, 2], &DEFAULT_EDGES).unwrap();
        assert_eq!(p.theta, [0.0, 0.0, 0.0]);
        assert_eq!(p.max_violation, 0.0);
        assert_eq!(p.fair_fraction, 1.0);
        assert_eq!(p.histogram.counts.iter().sum::<usize>(), 3);
    }

    #[test]
    fn zero_radius_conventions() {
        let inst = line(&[0.0, 0.0, 4.0]);
        let p = violation_profile(&inst, &[0.0, 0.0, 0.0], &[0], &DEFAULT_EDGES).unwrap();
        assert_eq!(p.theta[1], 0.0);
        assert!(p.theta[2].is_infinite());
        assert_eq!(p.infinite, 1);
        assert_eq!(p.max_violation, 0.0);
    }

    #[test]
    fn algorithm_labels_round_trip() {
        for a in [
            Algorithm::FairRound,
            Algorithm::Sparse(0.3),
            Algorithm::Plesnik,
            Algorithm::KMeansPP,
        ] {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert!("sparse(0)".parse::<Algorithm>().is_err());
        assert!("lloyd".parse::<Algorithm>().is_err());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(round_sig(1.0 / 3.0), Some(0.333333333333));
        assert_eq!(round_sig(f64::NAN), None);
        assert_eq!(round_sig(123456789.1234), Some(123456789.123));
    }

    #[test]
    fn empty_report_csv_is_header_only() {
        let cfg = ExperimentConfig::new(
            DataSource::Synthetic {
                n: 10,
                dim: 2,
                clusters: 2,
            },
            vec![2],
            vec![Algorithm::Plesnik],
        );
        let report = EvalReport {
            schema_version: REPORT_SCHEMA_VERSION,
            config: cfg,
            skipped_rows: 0,
            rows: Vec::new(),
            aggregates: Vec::new(),
        };
        let mut buf = Vec::new();
        emit_report(&report, ReportFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }
}
