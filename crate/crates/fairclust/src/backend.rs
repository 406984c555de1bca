//! LP backends: the sparse simplex from `microlp`, an adapter for external
//! solver programs, and a selector used by the CLI.

use std::ffi::OsString;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::Command;
use std::str::FromStr;

use fairclust_core::lp::BackendSolution;
use fairclust_core::{DenseSimplex, Error, LpBackend, LpModel};
use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::exchange::{ExchangeModel, ExchangeSolution};

/// Sparse revised simplex (`microlp`). Exact up to floating point.
#[derive(Debug, Clone, Copy, Default)]
pub struct SparseSimplex;

impl SparseSimplex {
    pub fn solve_exchange(
        &self,
        model: &ExchangeModel,
    ) -> fairclust_core::Result<ExchangeSolution> {
        let n = model.n;
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let y: Vec<_> = (0..n).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
        let x: Vec<Vec<_>> = model
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(_, c)| problem.add_var(c, (0.0, 1.0)))
                    .collect()
            })
            .collect();
        for (v, row) in model.rows.iter().enumerate() {
            problem.add_constraint(x[v].iter().map(|&var| (var, 1.0)), ComparisonOp::Eq, 1.0);
            for (i, &(u, _)) in row.iter().enumerate() {
                problem.add_constraint([(x[v][i], 1.0), (y[u], -1.0)], ComparisonOp::Le, 0.0);
            }
        }
        problem.add_constraint(
            y.iter().map(|&var| (var, 1.0)),
            ComparisonOp::Eq,
            model.k as f64,
        );

        match problem.solve().map(microlp::SolveOutcome::into_solution) {
            Ok(Err(_)) => Err(Error::NumericalFailure(
                "sparse simplex was interrupted".into(),
            )),
            Ok(Ok(solution)) => Ok(ExchangeSolution::Solved {
                x: x.iter()
                    .map(|row| row.iter().map(|&var| solution.var_value(var)).collect())
                    .collect(),
                y: y.iter().map(|&var| solution.var_value(var)).collect(),
            }),
            Err(microlp::Error::Infeasible) => Ok(ExchangeSolution::Infeasible(
                "sparse simplex proved the LP infeasible".into(),
            )),
            Err(e) => Err(Error::NumericalFailure(format!("sparse simplex: {e}"))),
        }
    }
}

impl LpBackend for SparseSimplex {
    fn name(&self) -> &str {
        "simplex"
    }

    fn solve(&self, model: &LpModel) -> fairclust_core::Result<BackendSolution> {
        Ok(into_backend(
            self.solve_exchange(&ExchangeModel::from_model(model))?,
        ))
    }
}

fn into_backend(sol: ExchangeSolution) -> BackendSolution {
    match sol {
        ExchangeSolution::Solved { x, y } => BackendSolution::Solved { x, y },
        ExchangeSolution::Infeasible(reason) => BackendSolution::Infeasible(reason),
    }
}

/// Runs `program [args..] MODEL_FILE SOLUTION_FILE` and reads the solution
/// file back. Both files use the exchange format.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<OsString>,
}

impl ExternalSolver {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        Self {
            program: program.into(),
            args: Vec::new(),
        }
    }

    pub fn with_args<I, S>(mut self, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<OsString>,
    {
        self.args.extend(args.into_iter().map(Into::into));
        self
    }
}

impl LpBackend for ExternalSolver {
    fn name(&self) -> &str {
        "external"
    }

    fn solve(&self, model: &LpModel) -> fairclust_core::Result<BackendSolution> {
        let unavailable =
            |what: &str, e: &dyn fmt::Display| Error::BackendUnavailable(format!("{what}: {e}"));
        let dir = tempfile::tempdir().map_err(|e| unavailable("temporary directory", &e))?;
        let model_path = dir.path().join("model.fairlp");
        let solution_path = dir.path().join("solution.fairlp");
        let exchange = ExchangeModel::from_model(model);
        let file = File::create(&model_path).map_err(|e| unavailable("writing model", &e))?;
        exchange
            .write(BufWriter::new(file))
            .map_err(|e| unavailable("writing model", &e))?;

        let status = Command::new(&self.program)
            .args(&self.args)
            .arg(&model_path)
            .arg(&solution_path)
            .status()
            .map_err(|e| unavailable(&format!("launching {}", self.program.display()), &e))?;
        if !status.success() {
            return Err(Error::BackendUnavailable(format!(
                "{} exited with {status}",
                self.program.display()
            )));
        }
        let file = File::open(&solution_path).map_err(|e| unavailable("reading solution", &e))?;
        let sol = ExchangeSolution::read(&exchange, BufReader::new(file))
            .map_err(|e| Error::NumericalFailure(format!("external solution: {e}")))?;
        Ok(into_backend(sol))
    }
}

/// Backend named on the command line: `simplex`, `dense` or
/// `external:PATH`.
#[derive(Debug, Clone, Default)]
pub enum BackendChoice {
    #[default]
    Simplex,
    Dense,
    External(PathBuf),
}

impl FromStr for BackendChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "simplex" => Ok(Self::Simplex),
            "dense" => Ok(Self::Dense),
            _ => match s.strip_prefix("external:") {
                Some(path) if !path.is_empty() => Ok(Self::External(path.into())),
                _ => Err(format!(
                    "unknown backend {s:?}; expected simplex, dense or external:PATH"
                )),
            },
        }
    }
}

impl fmt::Display for BackendChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Simplex => f.write_str("simplex"),
            Self::Dense => f.write_str("dense"),
            Self::External(path) => write!(f, "external:{}", path.display()),
        }
    }
}

impl LpBackend for BackendChoice {
    fn name(&self) -> &str {
        match self {
            Self::Simplex => "simplex",
            Self::Dense => "dense",
            Self::External(_) => "external",
        }
    }

    fn solve(&self, model: &LpModel) -> fairclust_core::Result<BackendSolution> {
        match self {
            Self::Simplex => SparseSimplex.solve(model),
            Self::Dense => DenseSimplex::default().solve(model),
            Self::External(path) => ExternalSolver::new(path).solve(model),
        }
    }
}
