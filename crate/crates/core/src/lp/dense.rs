//! Two-phase dense tableau simplex with Bland's rule.
//!
//! Meant as an exact reference for small models: every support entry, every
//! opening variable and a slack per `x <= y` row become tableau columns.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{BackendSolution, LpBackend, LpModel};
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct DenseSimplex {
    pub max_iterations: usize,
    /// Refuse models whose tableau would exceed this many cells.
    pub max_cells: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        Self {
            max_iterations: 500_000,
            max_cells: 8_000_000,
        }
    }
}

impl LpBackend for DenseSimplex {
    fn name(&self) -> &str {
        "dense"
    }

    fn solve(&self, model: &LpModel) -> Result<BackendSolution> {
        let n = model.n();
        let offsets: Vec<usize> = (0..n)
            .scan(0, |acc, v| {
                let start = *acc;
                *acc += model.support(v).len();
                Some(start)
            })
            .collect();
        let nx = model.x_count();
        let y0 = nx;
        let s0 = nx + n;
        let t0 = 2 * nx + n;
        let ncol = 2 * nx + 2 * n;
        let m = n + 1 + nx + n;
        if m.saturating_mul(ncol + n + 2) > self.max_cells {
            return Err(Error::BackendUnavailable(format!(
                "dense simplex limited to {} tableau cells, model needs {m} x {}",
                self.max_cells,
                ncol + n + 2
            )));
        }

        let mut lp = StandardLp::new(m, ncol);
        let mut row = 0;
        for v in 0..n {
            for i in 0..model.support(v).len() {
                lp.set(row, offsets[v] + i, 1.0);
                lp.cost[offsets[v] + i] = model.cost(v, i);
            }
            lp.rhs[row] = 1.0;
            row += 1;
        }
        for u in 0..n {
            lp.set(row, y0 + u, 1.0);
        }
        lp.rhs[row] = model.k() as f64;
        row += 1;
        for v in 0..n {
            for (i, &u) in model.support(v).iter().enumerate() {
                let j = offsets[v] + i;
                lp.set(row, j, 1.0);
                lp.set(row, y0 + u, -1.0);
                lp.set(row, s0 + j, 1.0);
                lp.basis_hint[row] = Some(s0 + j);
                row += 1;
            }
        }
        for u in 0..n {
            lp.set(row, y0 + u, 1.0);
            lp.set(row, t0 + u, 1.0);
            lp.rhs[row] = 1.0;
            lp.basis_hint[row] = Some(t0 + u);
            row += 1;
        }
        debug_assert_eq!(row, m);

        match lp.solve(self.max_iterations)? {
            None => Ok(BackendSolution::Infeasible(
                "phase one could not drive artificials to zero".into(),
            )),
            Some(values) => {
                let x = (0..n)
                    .map(|v| {
                        let start = offsets[v];
                        values[start..start + model.support(v).len()].to_vec()
                    })
                    .collect();
                let y = values[y0..y0 + n].to_vec();
                Ok(BackendSolution::Solved { x, y })
            }
        }
    }
}

/// `min c.x  s.t.  A x = b, x >= 0` with `b >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct StandardLp {
    rows: usize,
    cols: usize,
    a: Vec<f64>,
    rhs: Vec<f64>,
    cost: Vec<f64>,
    /// A column that is the unit vector of this row, usable as initial basis.
    basis_hint: Vec<Option<usize>>,
}

impl StandardLp {
    pub(crate) fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            a: vec![0.0; rows * cols],
            rhs: vec![0.0; rows],
            cost: vec![0.0; cols],
            basis_hint: vec![None; rows],
        }
    }

    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] = v;
    }

    /// Optimal primal values, or `None` when infeasible.
    pub(crate) fn solve(&self, max_iterations: usize) -> Result<Option<Vec<f64>>> {
        let art_rows: Vec<usize> = (0..self.rows)
            .filter(|&r| self.basis_hint[r].is_none())
            .collect();
        let nart = art_rows.len();
        let width = self.cols + nart + 1;
        let rhs_col = width - 1;
        let mut t = Tableau {
            rows: self.rows,
            width,
            data: vec![0.0; self.rows * width],
            obj: vec![0.0; width],
            basis: vec![0; self.rows],
            enterable: self.cols + nart,
        };
        for r in 0..self.rows {
            let src = &self.a[r * self.cols..(r + 1) * self.cols];
            t.data[r * width..r * width + self.cols].copy_from_slice(src);
            t.data[r * width + rhs_col] = self.rhs[r];
        }
        for (i, &r) in art_rows.iter().enumerate() {
            let col = self.cols + i;
            t.data[r * width + col] = 1.0;
            t.basis[r] = col;
        }
        for r in 0..self.rows {
            if let Some(c) = self.basis_hint[r] {
                t.basis[r] = c;
            }
        }

        // Phase one: minimise the sum of artificials.
        for &r in &art_rows {
            for j in 0..width {
                if j < self.cols || j == rhs_col {
                    t.obj[j] -= t.data[r * width + j];
                }
            }
        }
        let mut budget = max_iterations;
        t.run(&mut budget)?;
        if -t.obj[rhs_col] > PHASE1_TOL * (1.0 + self.rhs.iter().sum::<f64>()) {
            return Ok(None);
        }
        // Pivot remaining zero-level artificials out where possible.
        for r in 0..self.rows {
            if t.basis[r] >= self.cols {
                let row = &t.data[r * width..r * width + self.cols];
                if let Some(c) = (0..self.cols).find(|&c| row[c].abs() > PIVOT_TOL) {
                    t.pivot(r, c);
                }
            }
        }

        // Phase two on the real costs; artificials may no longer enter.
        t.enterable = self.cols;
        t.obj.iter_mut().for_each(|v| *v = 0.0);
        t.obj[..self.cols].copy_from_slice(&self.cost);
        for r in 0..self.rows {
            let cb = if t.basis[r] < self.cols {
                self.cost[t.basis[r]]
            } else {
                0.0
            };
            if cb != 0.0 {
                for j in 0..width {
                    t.obj[j] -= cb * t.data[r * width + j];
                }
            }
        }
        t.run(&mut budget)?;

        let mut values = vec![0.0; self.cols];
        for r in 0..self.rows {
            if t.basis[r] < self.cols {
                values[t.basis[r]] = t.data[r * width + rhs_col];
            }
        }
        Ok(Some(values))
    }
}

struct Tableau {
    rows: usize,
    width: usize,
    data: Vec<f64>,
    /// Reduced costs; the last entry is minus the objective value.
    obj: Vec<f64>,
    basis: Vec<usize>,
    /// Columns below this index may enter the basis.
    enterable: usize,
}

impl Tableau {
    fn run(&mut self, budget: &mut usize) -> Result<()> {
        let rhs_col = self.width - 1;
        loop {
            // Bland: lowest-index improving column, lowest-index leaving variable.
            let Some(c) = (0..self.enterable).find(|&j| self.obj[j] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.data[r * self.width + c];
                if a > PIVOT_TOL {
                    let ratio = self.data[r * self.width + rhs_col] / a;
                    leave = match leave {
                        Some((lr, lratio))
                            if lratio < ratio - 1e-12
                                || ((lratio - ratio).abs() <= 1e-12
                                    && self.basis[lr] < self.basis[r]) =>
                        {
                            Some((lr, lratio))
                        }
                        _ => Some((r, ratio)),
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Err(Error::NumericalFailure("LP is unbounded".into()));
            };
            if *budget == 0 {
                return Err(Error::NumericalFailure(
                    "dense simplex exceeded its iteration budget".into(),
                ));
            }
            *budget -= 1;
            self.pivot(r, c);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let pivot = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= pivot;
        }
        self.data[r * w + c] = 1.0;
        let (before, rest) = self.data.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for other in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = other[c];
            if f != 0.0 {
                for (o, p) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * p;
                }
                other[c] = 0.0;
            }
        }
        let f = self.obj[c];
        if f != 0.0 {
            for (o, p) in self.obj.iter_mut().zip(prow.iter()) {
                *o -= f * p;
            }
            self.obj[c] = 0.0;
        }
        self.basis[r] = c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_lp() {
        // min -x1 - 2 x2  s.t.  x1 + x2 + s1 = 4,  x2 + s2 = 3.  Optimum (1, 3).
        let mut lp = StandardLp::new(2, 4);
        lp.set(0, 0, 1.0);
        lp.set(0, 1, 1.0);
        lp.set(0, 2, 1.0);
        lp.set(1, 1, 1.0);
        lp.set(1, 3, 1.0);
        lp.rhs = vec![4.0, 3.0];
        lp.cost = vec![-1.0, -2.0, 0.0, 0.0];
        lp.basis_hint = vec![Some(2), Some(3)];
        let x = lp.solve(100).unwrap().unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn phase_one_detects_infeasibility() {
        // x1 + x2 = 1 and x1 + x2 = 2.
        let mut lp = StandardLp::new(2, 2);
        for r in 0..2 {
            lp.set(r, 0, 1.0);
            lp.set(r, 1, 1.0);
        }
        lp.rhs = vec![1.0, 2.0];
        assert_eq!(lp.solve(100).unwrap(), None);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        // x1 + x2 = 1 twice; min x1.
        let mut lp = StandardLp::new(2, 2);
        for r in 0..2 {
            lp.set(r, 0, 1.0);
            lp.set(r, 1, 1.0);
        }
        lp.rhs = vec![1.0, 1.0];
        lp.cost = vec![1.0, 0.0];
        let x = lp.solve(100).unwrap().unwrap();
        assert!(x[0].abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
