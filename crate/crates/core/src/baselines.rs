//! Baselines: radius-only Filter, D^2 seeding, and an exhaustive oracle.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::filter::filter;
use crate::metric::{pow_p, root_p, MetricInstance, PNorm};

/// Largest instance the oracle accepts.
pub const ORACLE_MAX_N: usize = 16;
/// Largest `C(n, k)` the oracle accepts.
pub const ORACLE_MAX_SETS: u64 = 200_000;

/// Filter with `R = r`, centers ascending. Every point is within `2 r(v)` of
/// the result; more than `k` centers certifies that no fair `k`-set exists.
pub fn plesnik_baseline(inst: &MetricInstance, radii: &[f64]) -> Result<Vec<usize>> {
    let mut reps = filter(inst, radii)?.reps;
    reps.sort_unstable();
    Ok(reps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub feasible: bool,
    /// Optimal l_p cost (not raised to the p-th power).
    pub opt_cost: Option<f64>,
    /// Ascending; the lexicographically least among optimal sets.
    pub opt_centers: Option<Vec<usize>>,
    pub sets_examined: u64,
}

impl OracleResult {
    /// `opt_cost^p`, directly comparable with LP objectives.
    pub fn opt_cost_pow(&self, p: f64) -> Option<f64> {
        self.opt_cost.map(|c| pow_p(c, p))
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Exhaustive search over all center sets of size `1..=k` that put every
/// point within its radius, minimizing the l_p cost.
pub fn brute_force_opt(
    inst: &MetricInstance,
    radii: &[f64],
    k: usize,
    p: PNorm,
) -> Result<OracleResult> {
    let n = inst.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: radii.len(),
        });
    }
    if n > ORACLE_MAX_N || binomial(n, k) > ORACLE_MAX_SETS {
        return Err(Error::TooLarge { n, k });
    }

    // Aggregate is sum d^p for finite p and max d for p = infinity.
    let aggregate = |set: &[usize]| -> Option<f64> {
        let mut acc = 0.0f64;
        for v in 0..n {
            let row = inst.row(v);
            let d = set.iter().map(|&u| row[u]).fold(f64::INFINITY, f64::min);
            if d > radii[v] {
                return None;
            }
            acc = match p {
                PNorm::Finite(e) => acc + pow_p(d, e),
                PNorm::Infinity => acc.max(d),
            };
        }
        Some(acc)
    };

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut examined = 0u64;
    for size in 1..=k {
        let mut set: Vec<usize> = (0..size).collect();
        loop {
            examined += 1;
            if let Some(c) = aggregate(&set) {
                let better = match &best {
                    None => true,
                    Some((bc, bs)) => c < *bc || (c == *bc && set < *bs),
                };
                if better {
                    best = Some((c, set.clone()));
                }
            }
            if !next_combination(&mut set, n) {
                break;
            }
        }
    }
    Ok(match best {
        Some((agg, centers)) => OracleResult {
            feasible: true,
            opt_cost: Some(match p {
                PNorm::Finite(e) => root_p(agg, e),
                PNorm::Infinity => agg,
            }),
            opt_centers: Some(centers),
            sets_examined: examined,
        },
        None => OracleResult {
            feasible: false,
            opt_cost: None,
            opt_centers: None,
            sets_examined: examined,
        },
    })
}

/// Advances an ascending combination of `0..n` in lexicographic order.
fn next_combination(set: &mut [usize], n: usize) -> bool {
    let size = set.len();
    let Some(i) = (0..size).rev().find(|&i| set[i] < n - size + i) else {
        return false;
    };
    set[i] += 1;
    for j in i + 1..size {
        set[j] = set[j - 1] + 1;
    }
    true
}

/// k-means++ seeding (no Lloyd steps): the first center is uniform, each
/// further one is drawn with probability proportional to the squared
/// distance to the centers chosen so far. Centers ascending.
pub fn kmeanspp_baseline(inst: &MetricInstance, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = inst.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if k == 0 {
        return Err(Error::KOutOfRange { k, n });
    }
    if k >= n {
        return Ok((0..n).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![false; n];
    let first = rng.random_range(0..n);
    chosen[first] = true;
    let mut centers = vec![first];
    let mut weight: Vec<f64> = inst.row(first).iter().map(|d| d * d).collect();
    while centers.len() < k {
        let total: f64 = (0..n).filter(|&v| !chosen[v]).map(|v| weight[v]).sum();
        let pick = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut last = usize::MAX;
            let mut found = None;
            for v in (0..n).filter(|&v| !chosen[v] && weight[v] > 0.0) {
                last = v;
                if target < weight[v] {
                    found = Some(v);
                    break;
                }
                target -= weight[v];
            }
            found.unwrap_or(last)
        } else {
            let free: Vec<usize> = (0..n).filter(|&v| !chosen[v]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen[pick] = true;
        centers.push(pick);
        for (w, &d) in weight.iter_mut().zip(inst.row(pick)) {
            *w = w.min(d * d);
        }
    }
    centers.sort_unstable();
    Ok(centers)
}
