//! Sparsification: solve the LP on Filter representatives only.
//!
//! Filter at `delta * r` groups the points; the LP is solved on the
//! representatives with weight `|D(u)|` and radius `r(u)`; every point then
//! copies its representative's assignment, and Fair-Round runs on the lifted
//! solution with radii `(1 + delta) r`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::{filter, FilterOutput};
use crate::lp::{
    build_lp, solve_lp, validate_for_radii, LpBackend, LpSolution, LpStatus, ResidualReport,
};
use crate::metric::{pow_p, root_p, MetricInstance, PNorm};
use crate::round::{fair_round, BetaChoice, RoundedSolution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsifyConfig {
    pub delta: f64,
    pub epsilon: f64,
    pub beta: BetaChoice,
}

impl SparsifyConfig {
    pub fn new(delta: f64) -> Self {
        Self {
            delta,
            epsilon: 0.0,
            beta: BetaChoice::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsifyDiagnostics {
    /// Number of representatives after Filter at `delta * r`.
    pub reduced_n: usize,
    /// Budget used by the reduced LP, `min(k, reduced_n)`.
    pub reduced_k: usize,
    pub variable_count_full: usize,
    pub variable_count_reduced: usize,
    /// Weighted objective of the reduced LP.
    pub reduced_objective: f64,
    /// `sum_v (delta r(v))^p`.
    pub additive_term: f64,
    /// `(sum_v r(v)^p)^(1/p) / reduced_objective^(1/p)`: a computable stand-in
    /// for `(sum_v r(v)^p)^(1/p) / opt`. `None` when the objective is zero.
    pub phi_upper: Option<f64>,
    /// Residuals of the lifted solution against the dilated radii.
    pub lifted_residuals: ResidualReport,
}

/// Number of LP variables (`x` plus `y`) the full model over `radii` would
/// have, counted without building it.
pub fn full_variable_count(inst: &MetricInstance, radii: &[f64]) -> usize {
    let n = inst.len();
    let x: usize = (0..n)
        .map(|v| inst.row(v).iter().filter(|&&d| d <= radii[v]).count())
        .sum();
    x + n
}

/// Copies the reduced solution (indexed by position in `groups.reps`) to
/// every point: `x*_v` is the row of `v`'s representative, `y*` is `y'` on
/// the representatives and zero elsewhere.
pub fn lift_solution(reduced: &LpSolution, groups: &FilterOutput, n: usize) -> Result<LpSolution> {
    let m = groups.reps.len();
    if reduced.x.len() != m || reduced.y.len() != m || groups.covered.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: reduced.x.len().min(reduced.y.len()),
        });
    }
    let mut seen = alloc::vec![false; n];
    for members in &groups.covered {
        for &v in members {
            if v >= n || seen[v] {
                return Err(Error::PartitionBroken(format!(
                    "point {v} is covered twice or out of range"
                )));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::PartitionBroken(format!("point {v} is not covered")));
    }
    if groups.owner.len() != n {
        return Err(Error::PartitionBroken(format!(
            "owner map has {} entries for {n} points",
            groups.owner.len()
        )));
    }

    let rows: Vec<Vec<(usize, f64)>> = reduced
        .x
        .iter()
        .map(|row| row.iter().map(|&(j, val)| (groups.reps[j], val)).collect())
        .collect();
    let x = (0..n).map(|v| rows[groups.owner[v]].clone()).collect();
    let mut y = alloc::vec![0.0; n];
    for (j, &u) in groups.reps.iter().enumerate() {
        y[u] = reduced.y[j];
    }
    Ok(LpSolution {
        x,
        y,
        objective: reduced.objective,
        status: reduced.status.clone(),
    })
}

/// Runs the sparsified pipeline and rounds with radii `(1 + delta) r`.
pub fn sparsify_and_round<B: LpBackend + ?Sized>(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    p: PNorm,
    cfg: &SparsifyConfig,
    backend: &B,
) -> Result<(RoundedSolution, SparsifyDiagnostics)> {
    let n = inst.len();
    if !(cfg.delta > 0.0 && cfg.delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {}",
            cfg.delta
        )));
    }
    let exponent = p.exponent()?;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: radii.len(),
        });
    }

    let small: Vec<f64> = radii.iter().map(|&r| cfg.delta * r).collect();
    let groups = filter(inst, &small)?;
    let reduced_n = groups.len();
    let reduced_k = k.min(reduced_n);

    let sub = inst.sub_instance(&groups.reps);
    let sub_radii: Vec<f64> = groups.reps.iter().map(|&u| radii[u]).collect();
    let weights: Vec<f64> = groups.covered.iter().map(|c| c.len() as f64).collect();
    let model = build_lp(&sub, &sub_radii, reduced_k, p, Some(&weights))?;
    let reduced = solve_lp(&model, cfg.epsilon, backend)?;
    if let LpStatus::Infeasible(reason) = &reduced.status {
        return Err(Error::InfeasibleReducedLp(reason.clone()));
    }

    let lifted = lift_solution(&reduced, &groups, n)?;
    let dilated: Vec<f64> = radii.iter().map(|&r| (1.0 + cfg.delta) * r).collect();
    let lifted_residuals = validate_for_radii(inst, &dilated, reduced_k, &lifted);
    let rounded = fair_round(inst, &dilated, &lifted, reduced_k, p, cfg.beta)?;

    let additive_term = small.iter().map(|&r| pow_p(r, exponent)).sum();
    let radius_norm = root_p(radii.iter().map(|&r| pow_p(r, exponent)).sum(), exponent);
    let phi_upper =
        (reduced.objective > 0.0).then(|| radius_norm / root_p(reduced.objective, exponent));
    let diagnostics = SparsifyDiagnostics {
        reduced_n,
        reduced_k,
        variable_count_full: full_variable_count(inst, radii),
        variable_count_reduced: model.variable_count(),
        reduced_objective: reduced.objective,
        additive_term,
        phi_upper,
        lifted_residuals,
    };
    Ok((rounded, diagnostics))
}
