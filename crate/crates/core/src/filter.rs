//! Greedy Filter: far-apart representatives and the partition they cover.
//!
//! Points are scanned in non-decreasing `R` order (ties to the smaller index).
//! Each still-uncovered point becomes a representative `u` and covers every
//! uncovered `v` with `d(u,v) <= 2 R(v)`. Membership is decided on the stored
//! doubles without tolerance so the covered sets always partition the points.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::MetricInstance;

/// Representatives in selection order and the set each one covers.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    /// Representatives in the order they were selected.
    pub reps: Vec<usize>,
    /// `covered[i]` is the covered set of `reps[i]`, ascending.
    pub covered: Vec<Vec<usize>>,
    /// For each point, the position in `reps` of the representative covering it.
    pub owner: Vec<usize>,
}

impl FilterOutput {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representative covering point `v`.
    pub fn rep_of(&self, v: usize) -> usize {
        self.reps[self.owner[v]]
    }

    /// `|D(u)|` for each representative, aligned with `reps`.
    pub fn covered_sizes(&self) -> Vec<usize> {
        self.covered.iter().map(Vec::len).collect()
    }
}

pub fn filter(inst: &MetricInstance, radii: &[f64]) -> Result<FilterOutput> {
    let n = inst.len();
    if radii.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: radii.len(),
        });
    }
    if let Some(i) = radii.iter().position(|r| r.is_nan() || *r < 0.0) {
        return Err(Error::InvalidParameter(alloc::format!(
            "filter radius {i} is {}",
            radii[i]
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| radii[a].total_cmp(&radii[b]).then(a.cmp(&b)));

    let mut owner = vec![usize::MAX; n];
    let mut uncovered: Vec<usize> = (0..n).collect();
    let mut reps = Vec::new();
    let mut covered = Vec::new();
    for &u in &order {
        if owner[u] != usize::MAX {
            continue;
        }
        let slot = reps.len();
        let row = inst.row(u);
        let mut members = Vec::new();
        uncovered.retain(|&v| {
            if row[v] <= 2.0 * radii[v] {
                owner[v] = slot;
                members.push(v);
                false
            } else {
                true
            }
        });
        debug_assert!(members.contains(&u));
        reps.push(u);
        covered.push(members);
    }
    Ok(FilterOutput {
        reps,
        covered,
        owner,
    })
}

/// One broken clause of the Filter guarantees.
#[derive(Debug, Clone, PartialEq)]
pub enum FilterViolation {
    /// (a) two representatives closer than `2 max(R(u), R(v))`.
    Separation { u: usize, v: usize },
    /// (b) a point inside the `R`-balls of two representatives.
    BallsOverlap { u: usize, v: usize, w: usize },
    /// (c) a point covered zero or several times, or ownership inconsistent.
    NotPartition { point: usize, times: usize },
    /// A representative missing from its own covered set.
    RepNotCovered { u: usize },
    /// (d) a covered point with a smaller radius than its representative.
    RadiusOrder { u: usize, v: usize },
    /// (e) a covered point farther than `2 R(v)` from its representative.
    CoverDistance { u: usize, v: usize },
    /// A point in `B(u, R(u))` whose nearest representative is not uniquely `u`.
    CoreInside { u: usize, w: usize, other: usize },
}

impl FilterViolation {
    /// Short clause label: `a`..`e`, `rep` or `core`.
    pub fn clause(&self) -> &'static str {
        match self {
            Self::Separation { .. } => "a",
            Self::BallsOverlap { .. } => "b",
            Self::NotPartition { .. } => "c",
            Self::RepNotCovered { .. } => "rep",
            Self::RadiusOrder { .. } => "d",
            Self::CoverDistance { .. } => "e",
            Self::CoreInside { .. } => "core",
        }
    }
}

/// Checks every Filter guarantee against `out`; empty when all hold.
pub fn verify_filter_properties(
    inst: &MetricInstance,
    radii: &[f64],
    out: &FilterOutput,
) -> Vec<FilterViolation> {
    let n = inst.len();
    let mut report = Vec::new();

    let mut times = vec![0usize; n];
    for members in &out.covered {
        for &v in members {
            if v < n {
                times[v] += 1;
            }
        }
    }
    for (point, &t) in times.iter().enumerate() {
        if t != 1 {
            report.push(FilterViolation::NotPartition { point, times: t });
        }
    }
    if out.owner.len() != n || out.covered.len() != out.reps.len() {
        report.push(FilterViolation::NotPartition { point: n, times: 0 });
        return report;
    }
    for (slot, members) in out.covered.iter().enumerate() {
        for &v in members {
            if v < n && out.owner[v] != slot && times[v] == 1 {
                report.push(FilterViolation::NotPartition { point: v, times: 1 });
            }
        }
    }

    for (slot, &u) in out.reps.iter().enumerate() {
        if !out.covered[slot].contains(&u) {
            report.push(FilterViolation::RepNotCovered { u });
        }
        for &v in &out.covered[slot] {
            if v >= n {
                continue;
            }
            if radii[u] > radii[v] {
                report.push(FilterViolation::RadiusOrder { u, v });
            }
            if inst.dist(u, v) > 2.0 * radii[v] {
                report.push(FilterViolation::CoverDistance { u, v });
            }
        }
    }

    for (i, &u) in out.reps.iter().enumerate() {
        for &v in &out.reps[i + 1..] {
            if inst.dist(u, v) <= 2.0 * radii[u].max(radii[v]) {
                report.push(FilterViolation::Separation { u, v });
            }
        }
    }

    for w in 0..n {
        let row = inst.row(w);
        let inside: Vec<usize> = out
            .reps
            .iter()
            .copied()
            .filter(|&u| row[u] <= radii[u])
            .collect();
        for pair in inside.windows(2) {
            report.push(FilterViolation::BallsOverlap {
                u: pair[0],
                v: pair[1],
                w,
            });
        }
        for &u in &inside {
            for &other in &out.reps {
                if other != u && row[other] <= row[u] {
                    report.push(FilterViolation::CoreInside { u, w, other });
                }
            }
        }
    }
    report
}
