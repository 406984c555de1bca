//! Finite metric spaces, fairness radii and l_p clustering cost.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use crate::error::{Error, Result};

/// Asymmetry tolerated (and averaged away) when building from a matrix.
const ASYMMETRY_TOL: f64 = 1e-6;

/// Above this exponent costs are accumulated relative to the largest term.
const SCALED_POW_THRESHOLD: f64 = 32.0;

/// A point set with a dense symmetric distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricInstance {
    n: usize,
    coords: Option<Vec<Vec<f64>>>,
    dist: Vec<f64>,
}

impl MetricInstance {
    /// Euclidean instance over `points`. All vectors must share a dimension.
    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        let dim = points[0].as_ref().len();
        let mut coords = Vec::with_capacity(n);
        for (row, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::RaggedVectors {
                    row,
                    expected: dim,
                    found: p.len(),
                });
            }
            if let Some(j) = p.iter().position(|c| !c.is_finite()) {
                return Err(Error::NonFinite { i: row, j });
            }
            coords.push(p.to_vec());
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&coords[i], &coords[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            coords: Some(coords),
            dist,
        })
    }

    /// Instance from an explicit distance matrix. Asymmetry up to 1e-6 is
    /// averaged out; anything larger is rejected.
    pub fn from_matrix<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::NotSquare {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
            for (j, &d) in r.iter().enumerate() {
                if !d.is_finite() {
                    return Err(Error::NonFinite { i: row, j });
                }
                if d < 0.0 {
                    return Err(Error::NegativeDistance { i: row, j });
                }
            }
            if r[row] > crate::EPS {
                return Err(Error::InvalidParameter(alloc::format!(
                    "diagonal entry ({row}, {row}) is {} but must be 0",
                    r[row]
                )));
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let a = rows[i].as_ref()[j];
                let b = rows[j].as_ref()[i];
                let gap = (a - b).abs();
                if gap > ASYMMETRY_TOL {
                    return Err(Error::AsymmetricMatrix { i, j, gap });
                }
                let d = if a == b { a } else { 0.5 * (a + b) };
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(Self {
            n,
            coords: None,
            dist,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    /// The instance induced on `indices` (in that order).
    pub fn sub_instance(&self, indices: &[usize]) -> Self {
        let m = indices.len();
        let mut dist = vec![0.0; m * m];
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                dist[a * m + b] = self.dist(i, j);
            }
        }
        let coords = self
            .coords
            .as_ref()
            .map(|c| indices.iter().map(|&i| c[i].clone()).collect());
        Self { n: m, coords, dist }
    }

    /// First triple `(i, j, l)` with `d(i,l) > d(i,j) + d(j,l) + tol`. O(n^3).
    pub fn find_triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                let dij = self.dist(i, j);
                for l in 0..self.n {
                    if self.dist(i, l) > dij + self.dist(j, l) + tol {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// First pair whose stored distance disagrees with the coordinates.
    pub fn find_coordinate_mismatch(&self, tol: f64) -> Option<(usize, usize)> {
        let coords = self.coords.as_ref()?;
        for i in 0..self.n {
            for j in 0..self.n {
                if (self.dist(i, j) - euclidean(&coords[i], &coords[j])).abs() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n })
        }
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    libm::sqrt(s)
}

/// Per-point fairness radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusProfile(Vec<f64>);

impl RadiusProfile {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if let Some(i) = radii.iter().position(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::InvalidParameter(alloc::format!(
                "radius {i} is {} but must be finite and non-negative",
                radii[i]
            )));
        }
        Ok(Self(radii))
    }

    /// Every radius multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|r| r * factor).collect())
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for RadiusProfile {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Exponent of the clustering objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PNorm {
    Finite(f64),
    Infinity,
}

impl PNorm {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Self::Finite(p))
        } else {
            Err(Error::InvalidPNorm(p))
        }
    }

    /// The finite exponent, or [`Error::InfinitePNorm`].
    pub fn exponent(self) -> Result<f64> {
        match self {
            Self::Finite(p) => Ok(p),
            Self::Infinity => Err(Error::InfinitePNorm),
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(p) => write!(f, "{p}"),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// `d^p` with exact fast paths for the common exponents.
#[inline]
pub fn pow_p(d: f64, p: f64) -> f64 {
    if p == 1.0 {
        d
    } else if p == 2.0 {
        d * d
    } else {
        libm::pow(d, p)
    }
}

/// `x^(1/p)`.
#[inline]
pub fn root_p(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        libm::sqrt(x)
    } else {
        libm::pow(x, 1.0 / p)
    }
}

/// Radius of the smallest closed ball around each point holding
/// `ceil(n/k)` points, the point itself included.
pub fn fair_radii(inst: &MetricInstance, k: usize) -> Result<RadiusProfile> {
    let n = inst.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let m = n.div_ceil(k);
    let mut scratch = vec![0.0; n];
    let radii = (0..n)
        .map(|v| {
            scratch.copy_from_slice(inst.row(v));
            let (_, r, _) = scratch.select_nth_unstable_by(m - 1, f64::total_cmp);
            *r
        })
        .collect();
    Ok(RadiusProfile(radii))
}

/// Nearest member of `set` to `v`, ties to the smallest index.
pub fn nearest_in(inst: &MetricInstance, v: usize, set: &[usize]) -> Result<(usize, f64)> {
    inst.check_index(v)?;
    let mut best: Option<(usize, f64)> = None;
    for &u in set {
        inst.check_index(u)?;
        let d = inst.dist(v, u);
        best = match best {
            Some((bu, bd)) if bd < d || (bd == d && bu < u) => Some((bu, bd)),
            _ => Some((u, d)),
        };
    }
    best.ok_or(Error::EmptySet)
}

/// `d(v, centers)` for every point.
pub fn distances_to_set(inst: &MetricInstance, centers: &[usize]) -> Result<Vec<f64>> {
    if centers.is_empty() {
        return Err(Error::EmptyCenters);
    }
    for &c in centers {
        inst.check_index(c)?;
    }
    Ok((0..inst.len())
        .map(|v| {
            let row = inst.row(v);
            centers
                .iter()
                .map(|&c| row[c])
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

/// `(sum_v d(v, centers)^p)^(1/p)`, or the maximum distance for p = infinity.
pub fn clustering_cost(inst: &MetricInstance, centers: &[usize], p: PNorm) -> Result<f64> {
    let dists = distances_to_set(inst, centers)?;
    Ok(lp_norm(&dists, p))
}

/// `sum_v d(v, centers)^p`, the cost in the units of the LP objective.
pub fn clustering_cost_pow(inst: &MetricInstance, centers: &[usize], p: f64) -> Result<f64> {
    let dists = distances_to_set(inst, centers)?;
    Ok(dists.iter().map(|&d| pow_p(d, p)).sum())
}

pub(crate) fn lp_norm(values: &[f64], p: PNorm) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    match p {
        PNorm::Infinity => max,
        PNorm::Finite(p) if p >= SCALED_POW_THRESHOLD => {
            if max == 0.0 {
                return 0.0;
            }
            let s: f64 = values.iter().map(|&d| libm::pow(d / max, p)).sum();
            max * root_p(s, p)
        }
        PNorm::Finite(p) => root_p(values.iter().map(|&d| pow_p(d, p)).sum(), p),
    }
}
