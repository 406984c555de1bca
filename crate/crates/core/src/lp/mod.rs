//! The fair-clustering LP relaxation.
//!
//! Variables are `x[v][u]` (how much `v` is served by `u`) and `y[u]` (how
//! much `u` is open):
//!
//! ```text
//! min  sum_{v,u} w_v d(v,u)^p x[v][u]
//!      sum_u x[v][u] = 1          for every v
//!      sum_u y[u]    = k
//!      x[v][u]      <= y[u]
//!      0 <= x, y <= 1
//! ```
//!
//! and `x[v][u]` only exists when `d(v,u) <= r(v)`. Any solver implementing
//! [`LpBackend`] can be plugged into [`solve_lp`], which validates whatever
//! comes back before handing it out.

mod dense;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

pub use dense::DenseSimplex;

use crate::error::{Error, Result};
use crate::metric::{pow_p, MetricInstance, PNorm};
use crate::FEAS_TOL;

#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    n: usize,
    k: usize,
    p: f64,
    radii: Vec<f64>,
    weights: Vec<f64>,
    support: Vec<Vec<usize>>,
    dist_pow: Vec<Vec<f64>>,
}

impl LpModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Centers `v` may connect to, ascending.
    pub fn support(&self, v: usize) -> &[usize] {
        &self.support[v]
    }

    /// `d(v,u)^p` for each entry of `support(v)`.
    pub fn dist_pow(&self, v: usize) -> &[f64] {
        &self.dist_pow[v]
    }

    /// Objective coefficient of the `i`-th support entry of `v`.
    #[inline]
    pub fn cost(&self, v: usize, i: usize) -> f64 {
        self.weights[v] * self.dist_pow[v][i]
    }

    pub fn in_support(&self, v: usize, u: usize) -> bool {
        self.support[v].binary_search(&u).is_ok()
    }

    /// Number of assignment variables.
    pub fn x_count(&self) -> usize {
        self.support.iter().map(Vec::len).sum()
    }

    /// Assignment plus opening variables.
    pub fn variable_count(&self) -> usize {
        self.x_count() + self.n
    }
}

pub fn build_lp(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    p: PNorm,
    weights: Option<&[f64]>,
) -> Result<LpModel> {
    let n = inst.len();
    let p = p.exponent()?;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: radii.len(),
        });
    }
    let weights = match weights {
        Some(w) if w.len() != n => {
            return Err(Error::LengthMismatch {
                expected: n,
                found: w.len(),
            })
        }
        Some(w) => {
            if let Some(i) = w.iter().position(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(Error::InvalidParameter(format!(
                    "weight {i} is {} but must be positive",
                    w[i]
                )));
            }
            w.to_vec()
        }
        None => vec![1.0; n],
    };
    let mut support = Vec::with_capacity(n);
    let mut dist_pow = Vec::with_capacity(n);
    for v in 0..n {
        let row = inst.row(v);
        let (s, c): (Vec<usize>, Vec<f64>) = row
            .iter()
            .enumerate()
            .filter(|&(_, &d)| d <= radii[v])
            .map(|(u, &d)| (u, pow_p(d, p)))
            .unzip();
        debug_assert!(s.contains(&v));
        support.push(s);
        dist_pow.push(c);
    }
    Ok(LpModel {
        n,
        k,
        p,
        radii: radii.to_vec(),
        weights,
        support,
        dist_pow,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal,
    /// Feasible, with no claim about the objective.
    Feasible,
    /// Objective within `(1 + epsilon)` of the optimum.
    Approx(f64),
    Infeasible(String),
}

/// A fractional solution. `x[v]` holds `(u, value)` pairs with `value > 0`,
/// ascending in `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<Vec<(usize, f64)>>,
    pub y: Vec<f64>,
    pub objective: f64,
    pub status: LpStatus,
}

impl LpSolution {
    pub fn infeasible(reason: impl Into<String>) -> Self {
        Self {
            x: Vec::new(),
            y: Vec::new(),
            objective: f64::INFINITY,
            status: LpStatus::Infeasible(reason.into()),
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self.status, LpStatus::Infeasible(_))
    }

    /// `Err(Error::Infeasible)` for infeasible solutions.
    pub fn require_feasible(&self) -> Result<&Self> {
        match &self.status {
            LpStatus::Infeasible(reason) => Err(Error::Infeasible(reason.clone())),
            _ => Ok(self),
        }
    }

    pub fn x_value(&self, v: usize, u: usize) -> f64 {
        let row = &self.x[v];
        row.binary_search_by_key(&u, |&(w, _)| w)
            .map_or(0.0, |i| row[i].1)
    }
}

/// What a backend hands back before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum BackendSolution {
    /// `x[v][i]` is the value of the `i`-th support entry of `v`.
    Solved {
        x: Vec<Vec<f64>>,
        y: Vec<f64>,
    },
    Infeasible(String),
}

pub trait LpBackend {
    fn name(&self) -> &str;

    /// Whether solutions are optimal (as opposed to `(1+eps)`-approximate).
    fn is_exact(&self) -> bool {
        true
    }

    fn solve(&self, model: &LpModel) -> Result<BackendSolution>;
}

impl<B: LpBackend + ?Sized> LpBackend for &B {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn is_exact(&self) -> bool {
        (**self).is_exact()
    }

    fn solve(&self, model: &LpModel) -> Result<BackendSolution> {
        (**self).solve(model)
    }
}

/// Solves `model`, then validates feasibility (tolerance 1e-6) and that every
/// radius ball carries at least one unit of `y`.
///
/// `k = n` short-circuits to opening every point.
pub fn solve_lp<B: LpBackend + ?Sized>(
    model: &LpModel,
    epsilon: f64,
    backend: &B,
) -> Result<LpSolution> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    let n = model.n;
    if model.k == n {
        return Ok(LpSolution {
            x: (0..n).map(|v| vec![(v, 1.0)]).collect(),
            y: vec![1.0; n],
            objective: 0.0,
            status: LpStatus::Optimal,
        });
    }
    let (raw_x, raw_y) = match backend.solve(model)? {
        BackendSolution::Infeasible(reason) => return Ok(LpSolution::infeasible(reason)),
        BackendSolution::Solved { x, y } => (x, y),
    };
    if raw_y.len() != n || raw_x.len() != n {
        return Err(Error::NumericalFailure(format!(
            "backend {} returned {} y values and {} x rows for n = {n}",
            backend.name(),
            raw_y.len(),
            raw_x.len()
        )));
    }
    let mut x = Vec::with_capacity(n);
    for (v, row) in raw_x.iter().enumerate() {
        if row.len() != model.support[v].len() {
            return Err(Error::NumericalFailure(format!(
                "backend {} returned a malformed x row for point {v}",
                backend.name()
            )));
        }
        x.push(
            model.support[v]
                .iter()
                .zip(row)
                .filter(|&(_, &val)| val > 0.0)
                .map(|(&u, &val)| (u, val.min(1.0)))
                .collect::<Vec<_>>(),
        );
    }
    let y: Vec<f64> = raw_y.iter().map(|&val| val.clamp(0.0, 1.0)).collect();
    let mut sol = LpSolution {
        objective: 0.0,
        x,
        y,
        status: if backend.is_exact() {
            LpStatus::Optimal
        } else {
            LpStatus::Approx(epsilon)
        },
    };
    sol.objective = objective_of(model, &sol);

    let residuals = validate_solution(model, &sol);
    if residuals.max() > FEAS_TOL {
        return Err(Error::NumericalFailure(format!(
            "backend {} returned an infeasible point: {residuals:?}",
            backend.name()
        )));
    }
    if let Some((v, mass)) = min_ball_mass(model, &sol) {
        if mass < 1.0 - FEAS_TOL {
            return Err(Error::NumericalFailure(format!(
                "ball of point {v} carries y mass {mass} < 1"
            )));
        }
    }
    Ok(sol)
}

/// `sum_{v,u} w_v d(v,u)^p x[v][u]`, summed row by row.
pub fn objective_of(model: &LpModel, sol: &LpSolution) -> f64 {
    let mut total = 0.0;
    for (v, row) in sol.x.iter().enumerate() {
        let mut acc = 0.0;
        for &(u, val) in row {
            if let Ok(i) = model.support[v].binary_search(&u) {
                acc += model.dist_pow[v][i] * val;
            }
        }
        total += model.weights[v] * acc;
    }
    total
}

/// Smallest `y(B(v, r(v)))` over all points, with its point.
pub fn min_ball_mass(model: &LpModel, sol: &LpSolution) -> Option<(usize, f64)> {
    (0..model.n)
        .map(|v| {
            let mass: f64 = model.support[v].iter().map(|&u| sol.y[u]).sum();
            (v, mass)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Per-client LP cost shares `C_v = sum_u d(v,u)^p x[v][u]` (unweighted).
pub fn per_point_cost(inst: &MetricInstance, sol: &LpSolution, p: f64) -> Vec<f64> {
    sol.x
        .iter()
        .enumerate()
        .map(|(v, row)| {
            let d = inst.row(v);
            row.iter().map(|&(u, val)| pow_p(d[u], p) * val).sum()
        })
        .collect()
}

/// Largest violation per constraint family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualReport {
    /// `max_v |sum_u x[v][u] - 1|`.
    pub cover: f64,
    /// `|sum_u y[u] - k|`.
    pub budget: f64,
    /// `max (x[v][u] - y[u])^+`.
    pub open: f64,
    /// Largest excursion of any variable outside `[0, 1]`.
    pub bounds: f64,
    /// Largest `x[v][u]` on a pair outside the support.
    pub support: f64,
    /// `|objective - sum c x|`, relative to `max(1, |objective|)`.
    pub objective: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        [
            self.cover,
            self.budget,
            self.open,
            self.bounds,
            self.support,
            self.objective,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn residuals_with(
    n: usize,
    k: usize,
    sol: &LpSolution,
    in_support: impl Fn(usize, usize) -> bool,
) -> ResidualReport {
    let mut rep = ResidualReport::default();
    if sol.x.len() != n || sol.y.len() != n {
        rep.cover = f64::INFINITY;
        return rep;
    }
    let budget: f64 = sol.y.iter().sum();
    rep.budget = (budget - k as f64).abs();
    for &yu in &sol.y {
        rep.bounds = rep.bounds.max(-yu).max(yu - 1.0);
    }
    for (v, row) in sol.x.iter().enumerate() {
        let mut s = 0.0;
        for &(u, val) in row {
            s += val;
            rep.bounds = rep.bounds.max(-val).max(val - 1.0);
            if u >= n {
                rep.support = f64::INFINITY;
                continue;
            }
            rep.open = rep.open.max(val - sol.y[u]);
            if !in_support(v, u) {
                rep.support = rep.support.max(val.abs());
            }
        }
        rep.cover = rep.cover.max((s - 1.0).abs());
    }
    rep
}

/// Recomputes every constraint residual of `sol` against `model`.
pub fn validate_solution(model: &LpModel, sol: &LpSolution) -> ResidualReport {
    let mut rep = residuals_with(model.n, model.k, sol, |v, u| model.in_support(v, u));
    if rep.cover.is_finite() {
        let recomputed = objective_of(model, sol);
        rep.objective = (sol.objective - recomputed).abs() / sol.objective.abs().max(1.0);
    }
    rep
}

/// A feasible, generally non-optimal point: `y = k/n` everywhere and each
/// point fills its unit of assignment from its nearest points first (ties to
/// the smaller index). Fails when some radius ball holds fewer than `n/k`
/// points.
pub fn uniform_solution(model: &LpModel) -> Result<LpSolution> {
    let n = model.n;
    let share = model.k as f64 / n as f64;
    let mut x = Vec::with_capacity(n);
    for v in 0..n {
        let mut order: Vec<usize> = (0..model.support[v].len()).collect();
        order.sort_by(|&a, &b| {
            model.dist_pow[v][a]
                .total_cmp(&model.dist_pow[v][b])
                .then(a.cmp(&b))
        });
        let mut left = 1.0f64;
        let mut row = Vec::new();
        for i in order {
            if left <= 0.0 {
                break;
            }
            let t = share.min(left);
            row.push((model.support[v][i], t));
            left -= t;
        }
        if left > FEAS_TOL {
            return Err(Error::Infeasible(format!(
                "the radius ball of point {v} holds too few points"
            )));
        }
        row.sort_by_key(|&(u, _)| u);
        x.push(row);
    }
    let mut sol = LpSolution {
        x,
        y: vec![share; n],
        objective: 0.0,
        status: LpStatus::Feasible,
    };
    sol.objective = objective_of(model, &sol);
    Ok(sol)
}

/// Residuals of `sol` for the LP over `radii`, without building a model.
/// The support test is `d(v,u) <= r(v) (1 + 1e-9)`.
pub fn validate_for_radii(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    sol: &LpSolution,
) -> ResidualReport {
    residuals_with(inst.len(), k, sol, |v, u| {
        inst.dist(v, u) <= radii[v] * (1.0 + crate::EPS)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::fair_radii;

    fn line(xs: &[f64]) -> MetricInstance {
        let pts: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        MetricInstance::from_points(&pts).unwrap()
    }

    fn p1() -> PNorm {
        PNorm::new(1.0).unwrap()
    }

    #[test]
    fn support_sizes() {
        let inst = line(&[0.0, 1.0, 5.0]);
        let all = build_lp(&inst, &[100.0; 3], 2, p1(), None).unwrap();
        assert_eq!(all.x_count(), 9);
        assert_eq!(all.variable_count(), 12);

        let none = build_lp(&inst, &[0.0; 3], 2, p1(), None).unwrap();
        assert!((0..3).all(|v| none.support(v) == [v]));

        let mixed = build_lp(&inst, &[1.0, 1.0, 4.0], 2, p1(), None).unwrap();
        let sizes: Vec<usize> = (0..3).map(|v| mixed.support(v).len()).collect();
        assert_eq!(sizes, [2, 2, 2]);
        assert_eq!(mixed.support(2), [1, 2]);
    }

    #[test]
    fn infinite_p_rejected() {
        let inst = line(&[0.0, 1.0]);
        assert_eq!(
            build_lp(&inst, &[1.0; 2], 1, PNorm::Infinity, None),
            Err(Error::InfinitePNorm)
        );
    }

    #[test]
    fn bad_weights_rejected() {
        let inst = line(&[0.0, 1.0]);
        assert!(build_lp(&inst, &[1.0; 2], 1, p1(), Some(&[1.0, 0.0])).is_err());
        assert!(build_lp(&inst, &[1.0; 2], 1, p1(), Some(&[1.0])).is_err());
    }

    #[test]
    fn k_equals_n_short_circuit() {
        let inst = line(&[0.0, 1.0, 5.0]);
        let radii = fair_radii(&inst, 3).unwrap();
        let model = build_lp(&inst, &radii, 3, p1(), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert_eq!(sol.objective, 0.0);
        assert_eq!(sol.y, [1.0; 3]);
        assert!((0..3).all(|v| sol.x_value(v, v) == 1.0));
        assert_eq!(per_point_cost(&inst, &sol, 1.0), [0.0; 3]);
    }

    #[test]
    fn two_points_one_center() {
        // Every vertex of this LP costs 2: brute force over y in {(1,0),(0,1)}
        // gives 2, and the half-half point also gives 0.5*2 + 0.5*2 = 2.
        let inst = line(&[0.0, 2.0]);
        let model = build_lp(&inst, &[2.0, 2.0], 1, p1(), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-9);
        let c = per_point_cost(&inst, &sol, 1.0);
        assert!((c.iter().sum::<f64>() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn cost_shares_of_hand_solution() {
        let inst = line(&[0.0, 2.0]);
        let sol = LpSolution {
            x: vec![vec![(0, 1.0)], vec![(0, 1.0)]],
            y: vec![1.0, 0.0],
            objective: 2.0,
            status: LpStatus::Optimal,
        };
        assert_eq!(per_point_cost(&inst, &sol, 1.0), [0.0, 2.0]);
        let model = build_lp(&inst, &[2.0, 2.0], 1, p1(), None).unwrap();
        assert!(validate_solution(&model, &sol).max() <= 1e-12);
    }

    #[test]
    fn far_points_with_zero_radius_are_infeasible() {
        let inst = line(&[0.0, 10.0]);
        let model = build_lp(&inst, &[0.0, 0.0], 1, p1(), None).unwrap();
        let sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert!(matches!(sol.status, LpStatus::Infeasible(_)));
        assert!(sol.require_feasible().is_err());
    }

    #[test]
    fn perturbed_x_shows_in_cover_residual() {
        let inst = line(&[0.0, 1.0, 5.0, 6.0]);
        let radii = fair_radii(&inst, 2).unwrap();
        let model = build_lp(&inst, &radii, 2, p1(), None).unwrap();
        let mut sol = solve_lp(&model, 0.0, &DenseSimplex::default()).unwrap();
        assert!(validate_solution(&model, &sol).max() <= 1e-6);
        sol.x[0][0].1 += 0.1;
        let rep = validate_solution(&model, &sol);
        assert!((rep.cover - 0.1).abs() < 1e-9);
    }

    #[test]
    fn negative_epsilon_rejected() {
        let inst = line(&[0.0, 1.0]);
        let model = build_lp(&inst, &[1.0; 2], 1, p1(), None).unwrap();
        assert!(solve_lp(&model, -1.0, &DenseSimplex::default()).is_err());
    }
}
