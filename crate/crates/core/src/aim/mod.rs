//! The asymptotic-iteration engine.
//!
//! A banded ket recurrence is split into decoupled parity chains; each
//! chain's sites are expanded over its seed kets as polynomials in E;
//! the termination function (seed polynomial, 2x2 determinant, or exact
//! boundary constraint) quantizes the energy. Roots are cross-checked
//! between two iteration depths to make convergence observable.

mod chain;
mod poly;
mod roots;
mod scalar;
mod table;

pub use chain::{decompose_chains, ChainDecomposition, ParityChain};
pub use poly::{EPolynomial, ScaledValue};
pub use roots::{real_roots, PolyRoot};
pub use scalar::{Dd, Scalar};
pub use table::{iterate, CoefficientTable};

use crate::algebra::{Domain, OperatorExpression, RecurrenceRelation};
use crate::error::AimError;
use crate::models::Su2Model;

/// Arithmetic used by the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PrecisionMode {
    /// Plain f64.
    #[default]
    Standard,
    /// Double-double (about 32 significant digits); for deep runs.
    Extended,
}

impl std::str::FromStr for PrecisionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Self::Standard),
            "extended" => Ok(Self::Extended),
            other => Err(format!(
                "unknown precision mode '{other}' (expected standard or extended)"
            )),
        }
    }
}

impl std::fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Standard => write!(f, "standard"),
            Self::Extended => write!(f, "extended"),
        }
    }
}

/// Knobs of one solve run.
#[derive(Debug, Clone, PartialEq)]
pub struct AimOptions {
    /// Iteration count: the table is built up to chain site `depth`.
    pub depth: usize,
    /// Energy window searched for roots.
    pub root_interval: (f64, f64),
    /// A root converged when it moved less than this across the window.
    pub convergence_tol: f64,
    /// Depth distance between the two compared iteration levels.
    pub stability_window: usize,
    pub precision: PrecisionMode,
}

impl AimOptions {
    /// Defaults scaled to a given depth; the interval tracks the depth
    /// so deeper runs can see their larger converged range.
    pub fn with_depth(depth: usize) -> Self {
        Self {
            depth,
            root_interval: (-10.0, 10.0 + 3.0 * depth as f64),
            convergence_tol: 1e-6,
            stability_window: 2,
            precision: PrecisionMode::Standard,
        }
    }

    fn validate(&self) -> Result<(), AimError> {
        if self.depth == 0 {
            return Err(AimError::InvalidOptions("depth must be >= 1".into()));
        }
        if self.stability_window == 0 {
            return Err(AimError::InvalidOptions(
                "stability window must be >= 1".into(),
            ));
        }
        if !(self.convergence_tol.is_finite() && self.convergence_tol > 0.0) {
            return Err(AimError::InvalidOptions(
                "convergence tolerance must be positive".into(),
            ));
        }
        let (lo, hi) = self.root_interval;
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(AimError::InvalidOptions(format!(
                "root interval [{lo}, {hi}] is not a proper interval"
            )));
        }
        Ok(())
    }
}

impl Default for AimOptions {
    fn default() -> Self {
        Self::with_depth(20)
    }
}

/// One converged-or-not eigenvalue candidate.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenRoot {
    pub value: f64,
    /// Distance to the nearest root at the shallower depth; `None` when
    /// the root had no counterpart there.
    pub delta: Option<f64>,
    pub converged: bool,
    /// Label of the chain the root came from.
    pub chain: String,
}

/// Sorted spectrum with per-root convergence data.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EigenResult {
    pub roots: Vec<EigenRoot>,
}

impl EigenResult {
    pub fn values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.value).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.roots.iter().all(|r| r.converged)
    }
}

/// Solve a single-boson Hamiltonian given as an operator expression.
pub fn solve_expression(
    expr: &OperatorExpression,
    options: &AimOptions,
) -> Result<EigenResult, AimError> {
    solve_recurrence(&expr.to_recurrence()?, options)
}

/// Solve a finite su(2) Hamiltonian; every chain is bounded, so the
/// termination condition is exact and all roots come back converged.
pub fn solve_su2(model: &Su2Model, options: &AimOptions) -> Result<EigenResult, AimError> {
    solve_recurrence(&model.recurrence(), options)
}

/// Solve any banded ket recurrence.
pub fn solve_recurrence(
    rec: &RecurrenceRelation,
    options: &AimOptions,
) -> Result<EigenResult, AimError> {
    options.validate()?;
    match options.precision {
        PrecisionMode::Standard => solve_typed::<f64>(rec, options),
        PrecisionMode::Extended => solve_typed::<Dd>(rec, options),
    }
}

fn solve_typed<S: Scalar>(
    rec: &RecurrenceRelation,
    options: &AimOptions,
) -> Result<EigenResult, AimError> {
    let mut out: Vec<EigenRoot> = Vec::new();
    match decompose_chains(rec)? {
        ChainDecomposition::Diagonal => diagonal_spectrum(rec, options, &mut out),
        ChainDecomposition::Chains(chains) => {
            for chain in &chains {
                solve_chain::<S>(rec, chain, options, &mut out)?;
            }
        }
    }
    out.sort_by(|a, b| {
        a.value
            .total_cmp(&b.value)
            .then_with(|| a.chain.cmp(&b.chain))
    });
    Ok(EigenResult { roots: out })
}

/// A diagonal relation is its own spectrum: E_n = coeff(0, n).
fn diagonal_spectrum(rec: &RecurrenceRelation, options: &AimOptions, out: &mut Vec<EigenRoot>) {
    let (lo, hi) = options.root_interval;
    let scan_end = match rec.domain() {
        Domain::Bounded { len } => len,
        Domain::HalfLine => 1024.max(4 * options.depth as u64),
    };
    for n in 0..scan_end {
        let e = rec.coeff(0, n);
        if e >= lo && e <= hi {
            out.push(EigenRoot {
                value: e,
                delta: Some(0.0),
                converged: true,
                chain: "diagonal".to_string(),
            });
        }
    }
}

fn solve_chain<S: Scalar>(
    rec: &RecurrenceRelation,
    chain: &ParityChain,
    options: &AimOptions,
    out: &mut Vec<EigenRoot>,
) -> Result<(), AimError> {
    let d = chain.seed_count();
    let label = chain.label();

    if chain.domain().is_bounded() {
        let table: CoefficientTable<S> = iterate(rec, chain, options.depth.max(d))?;
        let constraint = table.termination(0)?;
        let shift = table.energy_shift();
        let window = (options.root_interval.0 - shift, options.root_interval.1 - shift);
        for root in real_roots(&constraint, window)? {
            for _ in 0..root.multiplicity {
                out.push(EigenRoot {
                    value: root.value + shift,
                    delta: Some(0.0),
                    converged: true,
                    chain: label.clone(),
                });
            }
        }
        return Ok(());
    }

    if options.depth < 2 * d {
        return Err(AimError::InvalidOptions(format!(
            "depth {} is below twice the seed count {d} of chain '{label}'",
            options.depth
        )));
    }

    let table: CoefficientTable<S> = iterate(rec, chain, options.depth)?;
    let level_hi = options.depth - (d - 1);
    let level_lo = level_hi.saturating_sub(options.stability_window);
    let roots_hi = real_roots(&table.termination(level_hi)?, options.root_interval)?;
    let shallow = table.termination(level_lo)?;
    let roots_lo = if shallow.degree().is_none_or(|d| d == 0) {
        Vec::new()
    } else {
        real_roots(&shallow, options.root_interval)?
    };

    for root in &roots_hi {
        let delta = roots_lo
            .iter()
            .map(|r| (r.value - root.value).abs())
            .min_by(f64::total_cmp);
        let converged = delta.is_some_and(|d| d <= options.convergence_tol);
        for _ in 0..root.multiplicity {
            out.push(EigenRoot {
                value: root.value,
                delta,
                converged,
                chain: label.clone(),
            });
        }
    }
    Ok(())
}
