//! Individually fair (p,k)-clustering by LP rounding.
//!
//! Every point `v` gets a fairness radius `r(v)`: the smallest radius around
//! `v` that holds `ceil(n/k)` points. A solution is a set of at most `k`
//! centers; it is fair when each point has a center within its radius, and its
//! cost is the l_p norm of point-to-center distances.
//!
//! The pipeline implemented here:
//!
//! 1. [`metric`]: distances, fairness radii and l_p costs.
//! 2. [`lp`]: the fractional relaxation (assignment `x`, opening `y`) with the
//!    radius constraint enforced by variable elimination, plus a dense
//!    reference simplex. Other solvers plug in through [`lp::LpBackend`].
//! 3. [`round`]: Fair-Round, which turns an LP solution into at most `k`
//!    centers with every point within `8 r(v)` of a center and cost at most
//!    `2^(p+2)` times the LP objective (in p-th power units).
//! 4. [`sparsify`]: pre-clustering at `delta * r` so that the LP only sees
//!    representatives, then lifting and rounding with dilated radii.
//! 5. [`baselines`]: the radius-only Filter baseline, D^2 seeding and an
//!    exhaustive oracle for tiny instances.
//!
//! The crate is `no_std` and only needs `alloc`. Wall-clock timing, files and
//! the CLI live in the `fairclust` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod baselines;
pub mod error;
pub mod filter;
pub mod lp;
pub mod metric;
pub mod round;
pub mod sparsify;
pub mod synth;

pub use error::{Error, Result};
pub use filter::{filter, verify_filter_properties, FilterOutput, FilterViolation};
pub use lp::{
    build_lp, per_point_cost, solve_lp, uniform_solution, validate_solution, DenseSimplex,
    LpBackend, LpModel, LpSolution, LpStatus, ResidualReport,
};
pub use metric::{clustering_cost, fair_radii, nearest_in, MetricInstance, PNorm, RadiusProfile};
pub use round::{fair_round, BetaChoice, RoundedSolution};
pub use sparsify::{sparsify_and_round, SparsifyConfig, SparsifyDiagnostics};

/// Absolute tolerance for real comparisons that are not set-theoretic.
pub const EPS: f64 = 1e-9;

/// Tolerance used when validating LP solutions and final phase assertions.
pub const FEAS_TOL: f64 = 1e-6;
