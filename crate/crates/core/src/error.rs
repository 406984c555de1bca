use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,
    #[error("vector {row} has dimension {found}, expected {expected}")]
    RaggedVectors {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("distance matrix is not square (row {row} has {found} entries, expected {expected})")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("distance matrix is asymmetric at ({i}, {j}) by {gap}")]
    AsymmetricMatrix { i: usize, j: usize, gap: f64 },
    #[error("negative distance at ({i}, {j})")]
    NegativeDistance { i: usize, j: usize },
    #[error("non-finite value at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("k = {k} must satisfy 1 <= k <= n = {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("center set is empty")]
    EmptyCenters,
    #[error("point set is empty")]
    EmptySet,
    #[error("point index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid p-norm exponent {0}; p must be >= 1")]
    InvalidPNorm(f64),
    #[error("LP rounding is not defined for p = infinity")]
    InfinitePNorm,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("LP is infeasible: {0}")]
    Infeasible(String),
    #[error("reduced LP is infeasible: {0}")]
    InfeasibleReducedLp(String),
    #[error("LP solver failed numerically: {0}")]
    NumericalFailure(String),
    #[error("LP backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("no beta up to {beta_cap} yields at most {k} representatives")]
    NoFeasibleBeta { k: usize, beta_cap: f64 },
    #[error("y mass {sum} does not match k = {k}")]
    MassMismatch { sum: f64, k: usize },
    #[error("half-integral transfer loop exceeded {iterations} iterations")]
    NonTermination { iterations: usize },
    #[error("forest needs at least two representatives")]
    SingletonS,
    #[error("forest construction found a cycle of length {len} through point {point}")]
    ForestCycle { point: usize, len: usize },
    #[error("rounding invariant broken after {phase}: {detail}")]
    PhaseInvariant { phase: &'static str, detail: String },
    #[error("covered sets do not partition the points: {0}")]
    PartitionBroken(String),
    #[error("instance too large for exhaustive search (n = {n}, k = {k})")]
    TooLarge { n: usize, k: usize },
}
