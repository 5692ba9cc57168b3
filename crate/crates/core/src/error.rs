//! Error types shared across the crate.

use thiserror::Error;

/// Errors from operator-algebra construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    /// A formal power would exceed the configured term cap.
    #[error("operator power would produce {terms} terms, above the cap of {cap}")]
    TermCapExceeded { terms: u128, cap: usize },
    /// A recurrence was requested for an expression with no terms.
    #[error("cannot build a recurrence from an empty operator expression")]
    EmptyExpression,
}

/// Errors from the iteration engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AimError {
    #[error("invalid options: {0}")]
    InvalidOptions(String),
    /// The leading recurrence coefficient vanished at a reachable occupation.
    #[error("singular recurrence: leading coefficient vanishes at occupation {occupation}")]
    SingularRecurrence { occupation: u64 },
    /// Chains with more than two seed states are not supported.
    #[error("unsupported seed dimension {0} (only 1- and 2-seed chains are handled)")]
    UnsupportedSeedDimension(usize),
    /// The recurrence has no off-diagonal structure to iterate on.
    #[error("recurrence is purely diagonal; no chains to iterate")]
    TriviallyDiagonal,
    /// All off-diagonal bands lower the occupation; nothing to solve upward.
    #[error("recurrence has lowering bands only; cannot iterate upward")]
    NoRaisingBand,
    #[error("root search interval [{lo}, {hi}] is degenerate")]
    DegenerateInterval { lo: f64, hi: f64 },
    #[error("polynomial is identically zero; roots are undefined")]
    ZeroPolynomial,
    #[error("coefficient table has no level {level} (levels 0..={max})")]
    LevelOutOfRange { level: usize, max: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Errors from model construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("basis label m={m} lies outside [-j, j] for j={j}")]
    OutOfBasis { m: String, j: String },
    /// Only r = s couplings reduce to a single su(2) chain.
    #[error("two-mode coupling with r={r} != s={s} has no su(2) reduction; use the conserved-charge block solver")]
    UnsupportedReduction { r: u32, s: u32 },
    #[error("parameters are outside the exactly solvable family: {0}")]
    NotExactlySolvable(String),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
}

/// Errors from matrix construction and diagonalization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("truncation n_max={n_max} is too small; need at least {min}")]
    TruncationTooSmall { n_max: u64, min: u64 },
    #[error("conserved-charge block for charge {charge} is empty")]
    EmptyBlock { charge: u64 },
    #[error("eigenvalue iteration failed to converge for a {dim}x{dim} matrix")]
    EigIterationFailed { dim: usize },
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error("n_max list must be strictly ascending")]
    NonAscendingTruncations,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
