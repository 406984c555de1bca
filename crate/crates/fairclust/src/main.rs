use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use fairclust::backend::{BackendChoice, SparseSimplex};
use fairclust::data::{load_csv, sample_points, standardize, DataError};
use fairclust::eval::{
    cost_of_fairness_sweep, emit_report, round_sig, run_experiment, violation_profile, Algorithm,
    DataSource, EvalError, ExperimentConfig, ReportFormat, DEFAULT_EDGES,
};
use fairclust::exchange::{ExchangeError, ExchangeModel};
use fairclust_core::baselines::{brute_force_opt, kmeanspp_baseline, plesnik_baseline};
use fairclust_core::synth::gaussian_mixture;
use fairclust_core::{
    build_lp, clustering_cost, fair_radii, fair_round, solve_lp, sparsify_and_round,
    validate_solution, BetaChoice, MetricInstance, PNorm, SparsifyConfig,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "fairclust",
    version,
    about = "Individually fair (p,k)-clustering by LP rounding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fairness radius of every point.
    Radii(Common),
    /// Solve the LP relaxation.
    SolveLp {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Solve the LP and round it to at most k centers.
    Round {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Sparsify, solve the reduced LP and round.
    SparseRound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
    },
    /// Filter on the radii (plesnik) or D^2 seeding (kmeanspp).
    Baseline {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "plesnik", value_parser = ["plesnik", "kmeanspp"])]
        algorithm: String,
        #[arg(long, default_value_t = 1.0)]
        dilation: f64,
    },
    /// Exhaustive optimum for tiny instances.
    Oracle(Common),
    /// Batched trials over several k and algorithms.
    Experiment {
        #[command(flatten)]
        input: InputArgs,
        /// Comma separated k values.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        #[arg(long, default_value = "1", value_parser = parse_p)]
        p: PNorm,
        /// Comma separated: fair_round, sparse, sparse(DELTA), plesnik, kmeanspp.
        #[arg(long, value_delimiter = ',', default_value = "fair_round,plesnik")]
        algorithms: Vec<String>,
        /// Default delta for a bare `sparse` entry.
        #[arg(long, default_value_t = 0.3)]
        delta: f64,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Zero every wall-time field so reports compare byte for byte.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// LP objective as the radii are dilated.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "1,1.25,1.5,2,4")]
        grid: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value = "simplex")]
        backend: BackendChoice,
    },
    /// Solve an exchange-format model with the built-in sparse simplex.
    SolveExchange { model: PathBuf, solution: PathBuf },
}

#[derive(Args, Clone)]
struct InputArgs {
    /// CSV file with a header row.
    #[arg(long, conflicts_with = "synthetic")]
    input: Option<PathBuf>,
    /// Comma separated feature columns; all columns when omitted.
    #[arg(long, value_delimiter = ',')]
    features: Vec<String>,
    /// Use N points from a 2-D Gaussian mixture instead of a file.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    standardize: bool,
}

impl InputArgs {
    fn source(&self) -> Result<DataSource> {
        match (&self.input, self.synthetic) {
            (Some(path), _) => Ok(DataSource::Csv {
                path: path.clone(),
                features: self.features.clone(),
            }),
            (None, Some(n)) => Ok(DataSource::Synthetic {
                n,
                dim: 2,
                clusters: 5,
            }),
            (None, None) => Err(Usage("one of --input or --synthetic is required".into()).into()),
        }
    }

    fn load(&self) -> Result<MetricInstance> {
        let mut points = match self.source()? {
            DataSource::Csv { path, features } => {
                let data = load_csv(&path, &features)?;
                if data.skipped > 0 {
                    eprintln!("warning: skipped {} malformed rows", data.skipped);
                }
                data.points
            }
            DataSource::Synthetic { n, dim, clusters } => {
                gaussian_mixture(n, dim, clusters, 1.0, self.seed)
            }
        };
        if let Some(m) = self.sample {
            points = sample_points(&points, m, self.seed)?;
        }
        if self.standardize {
            standardize(&mut points);
        }
        Ok(MetricInstance::from_points(&points)?)
    }
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: ReportFormat,
}

impl OutputArgs {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn json(&self, value: &Value) -> Result<()> {
        if self.format != ReportFormat::Json {
            return Err(Usage("this subcommand only writes json".into()).into());
        }
        let mut out = self.writer()?;
        serde_json::to_writer_pretty(&mut out, value)?;
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }
}

#[derive(Args, Clone)]
struct Common {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "1", value_parser = parse_p)]
    p: PNorm,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// `2` (or any positive number) or `search`.
    #[arg(long, default_value = "2", value_parser = parse_beta)]
    beta: BetaChoice,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Radii handed to the LP are `dilation * r`.
    #[arg(long, default_value_t = 1.0)]
    dilation: f64,
    /// simplex, dense or external:PATH.
    #[arg(long, default_value = "simplex")]
    backend: BackendChoice,
}

fn parse_p(s: &str) -> Result<PNorm, String> {
    if matches!(s, "inf" | "infinity") {
        return Ok(PNorm::Infinity);
    }
    let p: f64 = s.parse().map_err(|_| format!("invalid p {s:?}"))?;
    PNorm::new(p).map_err(|e| e.to_string())
}

fn parse_beta(s: &str) -> Result<BetaChoice, String> {
    if s == "search" {
        return Ok(BetaChoice::Search);
    }
    match s.parse::<f64>() {
        Ok(b) if b > 0.0 && b.is_finite() => Ok(BetaChoice::Fixed(b)),
        _ => Err(format!(
            "invalid beta {s:?}; expected a positive number or `search`"
        )),
    }
}

/// Bad arguments detected after parsing.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

fn num(x: f64) -> Value {
    round_sig(x).map_or(Value::Null, Value::from)
}

fn dilated(radii: &[f64], factor: f64) -> Result<Vec<f64>> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Usage(format!("dilation {factor} must be positive")).into());
    }
    Ok(radii.iter().map(|r| r * factor).collect())
}

fn outcome(inst: &MetricInstance, radii: &[f64], centers: &[usize], p: PNorm) -> Result<Value> {
    let profile = violation_profile(inst, radii, centers, &DEFAULT_EDGES)?;
    Ok(json!({
        "centers": centers,
        "cost": num(clustering_cost(inst, centers, p)?),
        "max_violation": num(profile.max_violation),
        "infinite_violations": profile.infinite,
        "fair_fraction": num(profile.fair_fraction),
        "histogram": profile.histogram.counts,
    }))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Radii(c) => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            match c.output.format {
                ReportFormat::Json => c.output.json(&json!({
                    "n": inst.len(),
                    "k": c.k,
                    "radii": radii.iter().map(|&r| num(r)).collect::<Vec<_>>(),
                }))?,
                ReportFormat::Csv => {
                    let mut w = csv::Writer::from_writer(c.output.writer()?);
                    w.write_record(["point", "radius"])?;
                    for (v, r) in radii.iter().enumerate() {
                        w.write_record([v.to_string(), num(*r).to_string()])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::SolveLp { common: c, solve } => {
            let inst = c.input.load()?;
            let radii = dilated(&fair_radii(&inst, c.k)?, solve.dilation)?;
            let model = build_lp(&inst, &radii, c.k, c.p, None)?;
            let sol = solve_lp(&model, solve.epsilon, &solve.backend)?;
            sol.require_feasible()?;
            let res = validate_solution(&model, &sol);
            c.output.json(&json!({
                "status": format!("{:?}", sol.status),
                "objective": num(sol.objective),
                "variables": model.variable_count(),
                "y": sol.y.iter().map(|&v| num(v)).collect::<Vec<_>>(),
                "max_residual": num(res.max()),
            }))?;
        }
        Command::Round { common: c, solve } => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            let relaxed = dilated(&radii, solve.dilation)?;
            let model = build_lp(&inst, &relaxed, c.k, c.p, None)?;
            let sol = solve_lp(&model, solve.epsilon, &solve.backend)?;
            sol.require_feasible()?;
            let out = fair_round(&inst, &relaxed, &sol, c.k, c.p, solve.beta)?;
            let mut v = outcome(&inst, &radii, &out.centers, c.p)?;
            v["lp_objective"] = num(sol.objective);
            v["beta"] = num(out.beta_searched.unwrap_or(out.beta));
            v["shortcut"] = out.shortcut.into();
            c.output.json(&v)?;
        }
        Command::SparseRound {
            common: c,
            solve,
            delta,
        } => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            let relaxed = dilated(&radii, solve.dilation)?;
            let cfg = SparsifyConfig {
                delta,
                epsilon: solve.epsilon,
                beta: solve.beta,
            };
            let (out, diag) = sparsify_and_round(&inst, &relaxed, c.k, c.p, &cfg, &solve.backend)?;
            let mut v = outcome(&inst, &radii, &out.centers, c.p)?;
            v["reduced_n"] = diag.reduced_n.into();
            v["reduced_k"] = diag.reduced_k.into();
            v["variables_full"] = diag.variable_count_full.into();
            v["variables_reduced"] = diag.variable_count_reduced.into();
            v["reduced_objective"] = num(diag.reduced_objective);
            v["additive_term"] = num(diag.additive_term);
            v["beta"] = num(out.beta_searched.unwrap_or(out.beta));
            v["shortcut"] = out.shortcut.into();
            c.output.json(&v)?;
        }
        Command::Baseline {
            common: c,
            algorithm,
            dilation,
        } => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            let centers = match algorithm.as_str() {
                "plesnik" => plesnik_baseline(&inst, &dilated(&radii, dilation)?)?,
                _ => kmeanspp_baseline(&inst, c.k, c.input.seed)?,
            };
            let mut v = outcome(&inst, &radii, &centers, c.p)?;
            v["within_k"] = (centers.len() <= c.k).into();
            c.output.json(&v)?;
        }
        Command::Oracle(c) => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            let res = brute_force_opt(&inst, &radii, c.k, c.p)?;
            c.output.json(&json!({
                "feasible": res.feasible,
                "opt_cost": res.opt_cost.map_or(Value::Null, num),
                "opt_centers": res.opt_centers,
                "sets_examined": res.sets_examined,
            }))?;
        }
        Command::Experiment {
            input,
            k,
            p,
            algorithms,
            delta,
            solve,
            trials,
            workers,
            no_timing,
            output,
        } => {
            let algorithms = algorithms
                .iter()
                .map(|a| match a.trim() {
                    "sparse" => Ok(Algorithm::Sparse(delta)),
                    other => other.parse::<Algorithm>().map_err(Usage),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut cfg = ExperimentConfig::new(input.source()?, k, algorithms);
            cfg.standardize = input.standardize;
            cfg.sample_size = input.sample;
            cfg.trials = trials;
            cfg.seed = input.seed;
            cfg.p = p;
            cfg.beta = solve.beta;
            cfg.epsilon = solve.epsilon;
            cfg.dilation = solve.dilation;
            cfg.backend = solve.backend;
            cfg.workers = workers;
            let mut report = run_experiment(&cfg)?;
            if no_timing {
                report = report.without_timing();
            }
            emit_report(&report, output.format, output.writer()?)?;
        }
        Command::Sweep {
            common: c,
            grid,
            epsilon,
            backend,
        } => {
            let inst = c.input.load()?;
            let radii = fair_radii(&inst, c.k)?;
            let points = cost_of_fairness_sweep(&inst, &radii, c.k, c.p, &grid, epsilon, &backend)?;
            match c.output.format {
                ReportFormat::Json => c.output.json(&serde_json::to_value(&points)?)?,
                ReportFormat::Csv => {
                    let mut w = csv::Writer::from_writer(c.output.writer()?);
                    w.write_record(["factor", "lp_cost"])?;
                    for pt in &points {
                        let cost = pt
                            .lp_cost
                            .and_then(round_sig)
                            .map(|v| v.to_string())
                            .unwrap_or_default();
                        w.write_record([num(pt.factor).to_string(), cost])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::SolveExchange { model, solution } => {
            let file =
                File::open(&model).with_context(|| format!("opening {}", model.display()))?;
            let m = ExchangeModel::read(BufReader::new(file))?;
            let sol = SparseSimplex.solve_exchange(&m)?;
            let file = File::create(&solution)
                .with_context(|| format!("creating {}", solution.display()))?;
            sol.write(&m, BufWriter::new(file))?;
        }
    }
    Ok(())
}

fn core_code(e: &fairclust_core::Error) -> u8 {
    use fairclust_core::Error as E;
    match e {
        E::Infeasible(_) | E::InfeasibleReducedLp(_) | E::NoFeasibleBeta { .. } => 2,
        E::NumericalFailure(_)
        | E::BackendUnavailable(_)
        | E::NonTermination { .. }
        | E::MassMismatch { .. }
        | E::PhaseInvariant { .. }
        | E::ForestCycle { .. }
        | E::PartitionBroken(_) => 3,
        _ => 1,
    }
}

/// 2 infeasible, 3 solver failure, 4 I/O, 1 anything else.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<fairclust_core::Error>() {
            return core_code(e);
        }
        if let Some(e) = cause.downcast_ref::<EvalError>() {
            match e {
                EvalError::Core(c) => return core_code(c),
                EvalError::Config(_) => return 1,
                EvalError::Data(DataError::SampleTooLarge { .. }) => return 1,
                _ => return 4,
            }
        }
        if let Some(e) = cause.downcast_ref::<DataError>() {
            return if matches!(e, DataError::SampleTooLarge { .. }) {
                1
            } else {
                4
            };
        }
        if cause.is::<ExchangeError>() || cause.is::<io::Error>() || cause.is::<csv::Error>() {
            return 4;
        }
        if cause.is::<serde_json::Error>() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
