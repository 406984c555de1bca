//! Fair-Round: from a fractional LP solution to at most `k` centers.
//!
//! 1. Shrink each radius to `R(v) = min(r(v), (beta C_v)^(1/p))`, where `C_v`
//!    is the LP cost share of `v`, and run Filter with `R`.
//! 2. If Filter returns at most `k` representatives they are the answer.
//! 3. Otherwise move all `y` mass onto the representatives (nearest one wins),
//!    cap every representative at 1, and push the remaining fractional values
//!    to `{1/2, 1}` by shifting mass from costlier to cheaper representatives.
//! 4. Representatives at 1 are opened. Among those at 1/2, one parity class of
//!    the nearest-representative forest is opened, whichever is smaller.
//!
//! For `beta = 2` the result has every point within `8 r(v)` of a center and
//! `sum_v d(v,T)^p <= 2^(p+2) * LP`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::filter::{filter, FilterOutput};
use crate::lp::{per_point_cost, LpSolution};
use crate::metric::{nearest_in, pow_p, root_p, MetricInstance, PNorm, RadiusProfile};
use crate::{EPS, FEAS_TOL};

/// Smallest multiplier tried by [`beta_search`].
pub const BETA_MIN: f64 = 1.0 / (1u64 << 30) as f64;
/// Largest multiplier tried by [`beta_search`].
pub const BETA_MAX: f64 = (1u64 << 30) as f64;
/// Relative precision of [`beta_search`].
pub const BETA_TOL: f64 = 1e-3;

/// How the radius-shrinking multiplier is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaChoice {
    Fixed(f64),
    /// Smallest multiplier for which Filter already yields at most `k`
    /// representatives. Used only when it is at most 2; otherwise rounding
    /// runs with 2.
    Search,
}

impl Default for BetaChoice {
    fn default() -> Self {
        Self::Fixed(2.0)
    }
}

/// `y` on the representatives (aligned with `RoundedSolution::reps`) after
/// each rounding phase.
#[derive(Debug, Clone, PartialEq)]
pub struct YTrace {
    pub after_redistribute: Vec<f64>,
    pub after_cap: Vec<f64>,
    pub after_half_integral: Vec<f64>,
}

/// Forest over the representatives with edges `{u, S_u}`, `S_u` being the
/// nearest other representative. All fields are indexed by position in
/// `nodes`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestStructure {
    /// Point index of each vertex.
    pub nodes: Vec<usize>,
    /// Position of `S_u`.
    pub nearest_other: Vec<usize>,
    /// Position of the parent, `None` at roots.
    pub parent: Vec<Option<usize>>,
    pub level: Vec<usize>,
}

impl ForestStructure {
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&i| self.parent[i].is_none())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundedSolution {
    /// Final centers, ascending.
    pub centers: Vec<usize>,
    /// Filter representatives in selection order.
    pub reps: Vec<usize>,
    /// Multiplier actually used for the shrunk radii.
    pub beta: f64,
    /// Result of the binary search, when requested.
    pub beta_searched: Option<f64>,
    /// `None` on the shortcut path.
    pub y_trace: Option<YTrace>,
    /// LP cost share of every point.
    pub cost_shares: Vec<f64>,
    /// Filter already gave at most `k` representatives.
    pub shortcut: bool,
    pub forest: Option<ForestStructure>,
}

/// `R(v) = min(r(v), (beta C_v)^(1/p))`.
pub fn shrunk_radii(
    radii: &[f64],
    cost_shares: &[f64],
    p: f64,
    beta: f64,
) -> Result<RadiusProfile> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must be positive, got {beta}"
        )));
    }
    if radii.len() != cost_shares.len() {
        return Err(Error::LengthMismatch {
            expected: radii.len(),
            found: cost_shares.len(),
        });
    }
    RadiusProfile::new(
        radii
            .iter()
            .zip(cost_shares)
            .map(|(&r, &c)| r.min(root_p(beta * c.max(0.0), p)))
            .collect(),
    )
}

fn rep_count(
    inst: &MetricInstance,
    radii: &[f64],
    cost_shares: &[f64],
    p: f64,
    beta: f64,
) -> Result<usize> {
    Ok(filter(inst, &shrunk_radii(radii, cost_shares, p, beta)?)?.len())
}

/// Smallest `beta` (to relative precision 1e-3) such that Filter on the
/// shrunk radii returns at most `k` representatives.
///
/// The returned value is feasible and, unless it is [`BETA_MIN`], dividing it
/// by `1 + 1e-3` gives more than `k` representatives.
pub fn beta_search(
    inst: &MetricInstance,
    radii: &[f64],
    cost_shares: &[f64],
    k: usize,
    p: f64,
) -> Result<f64> {
    let feasible =
        |beta: f64| -> Result<bool> { Ok(rep_count(inst, radii, cost_shares, p, beta)? <= k) };
    if feasible(BETA_MIN)? {
        return Ok(BETA_MIN);
    }
    let mut lo = BETA_MIN;
    let mut hi = 2.0;
    while !feasible(hi)? {
        if hi >= BETA_MAX {
            return Err(Error::NoFeasibleBeta {
                k,
                beta_cap: BETA_MAX,
            });
        }
        lo = hi;
        hi *= 2.0;
    }
    while hi / lo > 1.0 + BETA_TOL {
        let mid = libm::sqrt(lo * hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // The count is not monotone in beta in general; step down until the
    // next grid point below is infeasible.
    loop {
        let probe = hi / (1.0 + BETA_TOL);
        if probe < BETA_MIN || !feasible(probe)? {
            return Ok(hi);
        }
        hi = probe;
    }
}

/// Moves the `y` mass of every non-representative to its nearest
/// representative (ties to the smaller index). Returns `y` on `reps`.
pub fn redistribute_y(inst: &MetricInstance, reps: &[usize], y: &[f64]) -> Result<Vec<f64>> {
    let n = inst.len();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    let mut position = vec![usize::MAX; n];
    for (i, &u) in reps.iter().enumerate() {
        inst.check_index(u)?;
        position[u] = i;
    }
    let mut sums: Vec<Neumaier> = reps.iter().map(|&u| Neumaier::new(y[u])).collect();
    for v in 0..n {
        if position[v] == usize::MAX {
            let (u, _) = nearest_in(inst, v, reps)?;
            sums[position[u]].add(y[v]);
        }
    }
    Ok(sums.into_iter().map(Neumaier::total).collect())
}

/// Compensated summation.
#[derive(Debug, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn new(x: f64) -> Self {
        Self { sum: x, carry: 0.0 }
    }

    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(self) -> f64 {
        self.sum + self.carry
    }
}

fn check_mass(y: &[f64], k: usize) -> Result<()> {
    let sum: f64 = y.iter().sum();
    if (sum - k as f64).abs() > FEAS_TOL {
        Err(Error::MassMismatch { sum, k })
    } else {
        Ok(())
    }
}

/// Shifts mass from representatives above 1 to those below 1 until none
/// exceeds 1. Donor: largest excess; receiver: lowest position.
pub fn cap_y(y: &mut [f64], k: usize) -> Result<()> {
    check_mass(y, k)?;
    loop {
        let donor = y
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v > 1.0 + EPS)
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(i, _)| i);
        let Some(u) = donor else { break };
        let Some(v) = y.iter().position(|&val| val < 1.0 - EPS) else {
            break;
        };
        let excess = y[u] - 1.0;
        let room = 1.0 - y[v];
        if room <= excess {
            y[u] -= room;
            y[v] = 1.0;
        } else {
            y[u] = 1.0;
            y[v] += excess;
        }
    }
    Ok(())
}

/// `|D(u)| d(u, S_u)^p` for every representative.
pub fn surrogate_costs(
    inst: &MetricInstance,
    reps: &[usize],
    covered_sizes: &[usize],
    nearest_other: &[usize],
    p: f64,
) -> Vec<f64> {
    reps.iter()
        .enumerate()
        .map(|(i, &u)| covered_sizes[i] as f64 * pow_p(inst.dist(u, reps[nearest_other[i]]), p))
        .collect()
}

/// `sum_u cost_u (1 - y_u)`, the quantity the half-integral loop never raises.
pub fn surrogate_objective(y: &[f64], costs: &[f64]) -> f64 {
    y.iter().zip(costs).map(|(&yu, &c)| c * (1.0 - yu)).sum()
}

/// Drives `y` (all in `[1/2, 1]`, summing to an integer) to `{1/2, 1}`.
///
/// A fractional `u` gives mass to any `v` below 1 with strictly larger cost,
/// so the surrogate objective never rises. The pair with the largest cost gap
/// is taken first (then smallest `(ids[u], ids[v])`). When no such pair exists
/// but two fractional entries have equal cost, the one with the larger id
/// gives to the smaller. Returns the number of transfers.
pub fn half_integralize(y: &mut [f64], costs: &[f64], ids: &[usize]) -> Result<usize> {
    let m = y.len();
    if costs.len() != m || ids.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: costs.len().min(ids.len()),
        });
    }
    let limit = 4 * m * m + 4;
    let fractional = |val: f64| val > 0.5 + EPS && val < 1.0 - EPS;
    let mut objective = surrogate_objective(y, costs);
    let mut iterations = 0;
    loop {
        let mut best: Option<(usize, usize)> = None;
        for u in (0..m).filter(|&u| fractional(y[u])) {
            for v in (0..m).filter(|&v| v != u && y[v] < 1.0 - EPS) {
                if costs[v] <= costs[u] {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bu, bv)) => {
                        let gap = costs[v] - costs[u];
                        let best_gap = costs[bv] - costs[bu];
                        gap > best_gap || (gap == best_gap && (ids[u], ids[v]) < (ids[bu], ids[bv]))
                    }
                };
                if better {
                    best = Some((u, v));
                }
            }
        }
        if best.is_none() {
            let mut frac: Vec<usize> = (0..m).filter(|&u| fractional(y[u])).collect();
            frac.sort_by_key(|&u| ids[u]);
            'tie: for &u in frac.iter().rev() {
                for &v in &frac {
                    if ids[v] < ids[u] && costs[u] == costs[v] {
                        best = Some((u, v));
                        break 'tie;
                    }
                }
            }
        }
        let Some((u, v)) = best else {
            return Ok(iterations);
        };
        iterations += 1;
        if iterations > limit {
            return Err(Error::NonTermination { iterations: limit });
        }
        let room = 1.0 - y[v];
        let spare = y[u] - 0.5;
        if room <= spare {
            y[u] -= room;
            y[v] = 1.0;
        } else {
            y[u] = 0.5;
            y[v] += spare;
        }
        let next = surrogate_objective(y, costs);
        if next > objective + EPS * (1.0 + objective.abs()) {
            return Err(Error::PhaseInvariant {
                phase: "half_integral",
                detail: format!("surrogate objective rose from {objective} to {next}"),
            });
        }
        objective = next;
    }
}

/// Position of the nearest other representative for each representative,
/// ties to the smaller point index.
pub fn nearest_others(inst: &MetricInstance, reps: &[usize]) -> Result<Vec<usize>> {
    if reps.len() < 2 {
        return Err(Error::SingletonS);
    }
    Ok(reps
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let row = inst.row(u);
            let mut best = usize::MAX;
            for (j, &w) in reps.iter().enumerate() {
                if j == i {
                    continue;
                }
                if best == usize::MAX
                    || row[w] < row[reps[best]]
                    || (row[w] == row[reps[best]] && w < reps[best])
                {
                    best = j;
                }
            }
            best
        })
        .collect())
}

/// Roots every component of the nearest-representative graph at the smaller
/// endpoint of its mutual pair and assigns BFS levels.
pub fn build_forest(inst: &MetricInstance, reps: &[usize]) -> Result<ForestStructure> {
    let nearest_other = nearest_others(inst, reps)?;
    let m = reps.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, &j) in nearest_other.iter().enumerate() {
        let mutual = nearest_other[j] == i;
        if !mutual || i < j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }

    let mut component = vec![usize::MAX; m];
    let mut parent = vec![None; m];
    let mut level = vec![0; m];
    let mut queue = VecDeque::new();
    for start in 0..m {
        if component[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        component[start] = start;
        queue.push_back(start);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if component[b] == usize::MAX {
                    component[b] = start;
                    members.push(b);
                    queue.push_back(b);
                }
            }
        }
        let root = members
            .iter()
            .copied()
            .filter(|&i| nearest_other[nearest_other[i]] == i)
            .map(|i| {
                let j = nearest_other[i];
                (
                    reps[i].min(reps[j]),
                    reps[i].max(reps[j]),
                    if reps[i] < reps[j] { i } else { j },
                )
            })
            .min()
            .map(|(_, _, root)| root);
        let Some(root) = root else {
            return Err(Error::ForestCycle {
                point: reps[start],
                len: cycle_len(&nearest_other, start),
            });
        };
        let edges: usize = members.iter().map(|&i| adj[i].len()).sum::<usize>() / 2;
        if edges + 1 != members.len() {
            return Err(Error::ForestCycle {
                point: reps[root],
                len: cycle_len(&nearest_other, start),
            });
        }
        let mut seen = vec![false; m];
        seen[root] = true;
        queue.push_back(root);
        while let Some(a) = queue.pop_front() {
            for &b in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = Some(a);
                    level[b] = level[a] + 1;
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(ForestStructure {
        nodes: reps.to_vec(),
        nearest_other,
        parent,
        level,
    })
}

fn cycle_len(next: &[usize], start: usize) -> usize {
    // Walk far enough to land on the cycle, then measure it.
    let mut a = start;
    for _ in 0..next.len() {
        a = next[a];
    }
    let mut len = 1;
    let mut b = next[a];
    while b != a {
        b = next[b];
        len += 1;
    }
    len
}

/// Rounds a feasible LP solution for `(inst, radii, k, p)` to at most `k`
/// centers.
pub fn fair_round(
    inst: &MetricInstance,
    radii: &[f64],
    sol: &LpSolution,
    k: usize,
    p: PNorm,
    beta: BetaChoice,
) -> Result<RoundedSolution> {
    let n = inst.len();
    let p = p.exponent()?;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    sol.require_feasible()?;
    if radii.len() != n || sol.y.len() != n || sol.x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: sol.y.len().min(sol.x.len()).min(radii.len()),
        });
    }
    let cost_shares = per_point_cost(inst, sol, p);

    let (beta_used, beta_searched) = match beta {
        BetaChoice::Fixed(b) => (b, None),
        BetaChoice::Search => {
            let found = beta_search(inst, radii, &cost_shares, k, p)?;
            (found.min(2.0), Some(found))
        }
    };
    let shrunk = shrunk_radii(radii, &cost_shares, p, beta_used)?;
    let out = filter(inst, &shrunk)?;

    if out.len() <= k {
        let mut centers = out.reps.clone();
        centers.sort_unstable();
        return Ok(RoundedSolution {
            centers,
            reps: out.reps,
            beta: beta_used,
            beta_searched,
            y_trace: None,
            cost_shares,
            shortcut: true,
            forest: None,
        });
    }
    round_representatives(inst, sol, k, p, beta_used, beta_searched, cost_shares, out)
}

#[allow(clippy::too_many_arguments)]
fn round_representatives(
    inst: &MetricInstance,
    sol: &LpSolution,
    k: usize,
    p: f64,
    beta: f64,
    beta_searched: Option<f64>,
    cost_shares: Vec<f64>,
    out: FilterOutput,
) -> Result<RoundedSolution> {
    let reps = &out.reps;
    let after_redistribute = redistribute_y(inst, reps, &sol.y)?;
    check_mass(&after_redistribute, k)?;

    let mut y = after_redistribute.clone();
    cap_y(&mut y, k)?;
    if let Some((i, &val)) = y
        .iter()
        .enumerate()
        .find(|&(_, &val)| !(0.5 - FEAS_TOL..=1.0 + FEAS_TOL).contains(&val))
    {
        return Err(Error::PhaseInvariant {
            phase: "cap",
            detail: format!("representative {} holds y = {val}", reps[i]),
        });
    }
    y.iter_mut().for_each(|val| *val = val.min(1.0));
    let after_cap = y.clone();

    let forest = build_forest(inst, reps)?;
    let costs = surrogate_costs(inst, reps, &out.covered_sizes(), &forest.nearest_other, p);
    half_integralize(&mut y, &costs, reps)?;
    check_mass(&y, k).map_err(|e| Error::PhaseInvariant {
        phase: "half_integral",
        detail: format!("{e}"),
    })?;

    let mut open = vec![false; reps.len()];
    let (mut even, mut odd) = (Vec::new(), Vec::new());
    for (i, &val) in y.iter().enumerate() {
        if (val - 1.0).abs() <= FEAS_TOL {
            open[i] = true;
        } else if (val - 0.5).abs() <= FEAS_TOL {
            if forest.level[i] % 2 == 0 {
                even.push(i);
            } else {
                odd.push(i);
            }
        } else {
            return Err(Error::PhaseInvariant {
                phase: "half_integral",
                detail: format!("representative {} holds y = {val}", reps[i]),
            });
        }
    }
    let ones = open.iter().filter(|&&o| o).count();
    let chosen = if even.len() <= odd.len() { &even } else { &odd };
    for &i in chosen {
        open[i] = true;
    }
    let size = ones + chosen.len();
    if size > k || size == 0 {
        return Err(Error::PhaseInvariant {
            phase: "selection",
            detail: format!("selected {size} centers for k = {k}"),
        });
    }
    if let Some(i) = (0..reps.len()).find(|&i| !open[i] && !open[forest.nearest_other[i]]) {
        return Err(Error::PhaseInvariant {
            phase: "selection",
            detail: format!("closed representative {} has a closed neighbour", reps[i]),
        });
    }

    let mut centers: Vec<usize> = (0..reps.len())
        .filter(|&i| open[i])
        .map(|i| reps[i])
        .collect();
    centers.sort_unstable();
    Ok(RoundedSolution {
        centers,
        reps: out.reps.clone(),
        beta,
        beta_searched,
        y_trace: Some(YTrace {
            after_redistribute,
            after_cap,
            after_half_integral: y,
        }),
        cost_shares,
        shortcut: false,
        forest: Some(forest),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> MetricInstance {
        let pts: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        MetricInstance::from_points(&pts).unwrap()
    }

    #[test]
    fn shrunk_radii_examples() {
        assert_eq!(
            &*shrunk_radii(&[1.0, 2.0], &[0.0, 0.0], 2.0, 2.0).unwrap(),
            &[0.0, 0.0]
        );
        assert_eq!(
            &*shrunk_radii(&[1.0, 2.0], &[1e9, 1e9], 2.0, 2.0).unwrap(),
            &[1.0, 2.0]
        );
        assert_eq!(&*shrunk_radii(&[3.0], &[2.0], 1.0, 2.0).unwrap(), &[3.0]);
        assert_eq!(&*shrunk_radii(&[3.0], &[1.0], 1.0, 2.0).unwrap(), &[2.0]);
        assert!(shrunk_radii(&[3.0], &[1.0], 1.0, 0.0).is_err());
    }

    #[test]
    fn redistribute_examples() {
        let inst = line(&[0.0, 1.0, 5.0]);
        let y = [0.4, 0.3, 0.3];
        assert_eq!(redistribute_y(&inst, &[0, 1, 2], &y).unwrap(), y);
        let moved = redistribute_y(&inst, &[0, 2], &y).unwrap();
        assert!((moved[0] - 0.7).abs() < 1e-15 && moved[1] == 0.3);
    }

    #[test]
    fn redistribute_breaks_ties_by_index() {
        let inst = line(&[0.0, 1.0, 2.0]);
        let moved = redistribute_y(&inst, &[2, 0], &[0.2, 0.6, 0.2]).unwrap();
        assert_eq!(moved, [0.2, 0.8]);
    }

    #[test]
    fn cap_examples() {
        let mut y = [0.6, 0.9, 0.5];
        cap_y(&mut y, 2).unwrap();
        assert_eq!(y, [0.6, 0.9, 0.5]);

        let mut y = [1.3, 0.7];
        cap_y(&mut y, 2).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-15);

        let mut bad = [1.3, 0.2];
        assert!(matches!(
            cap_y(&mut bad, 2),
            Err(Error::MassMismatch { .. })
        ));
    }

    #[test]
    fn half_integral_hand_trace() {
        // Costs a > b > c. Only b is a fractional donor with a costlier
        // receiver below 1 (a): delta = min(1 - 0.7, 0.8 - 0.5) = 0.3.
        let mut y = [0.7, 0.8, 0.5];
        let costs = [3.0, 2.0, 1.0];
        assert_eq!(half_integralize(&mut y, &costs, &[0, 1, 2]).unwrap(), 1);
        assert_eq!(y, [1.0, 0.5, 0.5]);
        assert!(surrogate_objective(&y, &costs) <= surrogate_objective(&[0.7, 0.8, 0.5], &costs));
    }

    #[test]
    fn half_integral_largest_gap_first() {
        // b -> c (gap 3) moves 0.3, then a -> c (gap 2) moves 0.2.
        let mut y = [0.7, 0.8, 0.5];
        let costs = [3.0, 2.0, 5.0];
        assert_eq!(half_integralize(&mut y, &costs, &[0, 1, 2]).unwrap(), 2);
        assert_eq!(y[0], 0.5);
        assert_eq!(y[1], 0.5);
        assert!((y[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equal_cost_stall_is_resolved() {
        let mut y = [0.75, 0.75, 0.5];
        let costs = [2.0, 2.0, 1.0];
        let steps = half_integralize(&mut y, &costs, &[0, 1, 2]).unwrap();
        assert_eq!(steps, 1);
        // Higher index gives to lower.
        assert_eq!(y, [1.0, 0.5, 0.5]);
    }

    #[test]
    fn half_integral_input_unchanged() {
        let mut y = [0.5, 1.0, 0.5];
        assert_eq!(
            half_integralize(&mut y, &[1.0, 2.0, 3.0], &[0, 1, 2]).unwrap(),
            0
        );
        assert_eq!(y, [0.5, 1.0, 0.5]);
    }

    #[test]
    fn forest_pair() {
        let inst = line(&[0.0, 4.0]);
        let f = build_forest(&inst, &[1, 0]).unwrap();
        assert_eq!(f.nearest_other, [1, 0]);
        // Root is point 0, at position 1.
        assert_eq!(f.parent, [Some(1), None]);
        assert_eq!(f.level, [1, 0]);
    }

    #[test]
    fn forest_collinear_chain() {
        let inst = line(&[0.0, 1.0, 3.0]);
        let f = build_forest(&inst, &[0, 1, 2]).unwrap();
        assert_eq!(f.nearest_other, [1, 0, 1]);
        assert_eq!(f.level, [0, 1, 2]);
        assert_eq!(f.parent, [None, Some(0), Some(1)]);
    }

    #[test]
    fn forest_equilateral_ties_give_mutual_pair() {
        let h = libm::sqrt(3.0) / 2.0;
        let inst = MetricInstance::from_points(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
        let f = build_forest(&inst, &[2, 1, 0]).unwrap();
        for i in 0..3 {
            let j = f.nearest_other[i];
            assert_ne!(f.level[i] % 2, f.level[j] % 2);
        }
        assert_eq!(f.roots().count(), 1);
    }

    #[test]
    fn forest_needs_two_reps() {
        assert_eq!(build_forest(&line(&[0.0]), &[0]), Err(Error::SingletonS));
    }
}
