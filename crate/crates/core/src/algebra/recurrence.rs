//! Banded ket recurrences induced by operator expressions.
//!
//! Acting with `H - E` on `|n⟩` and reading off ket coefficients gives a
//! relation `Σ_Δ coeff(Δ, n) |n+Δ⟩ = 0` in which the Δ = 0 channel carries
//! the extra `-E` shift. The relation is what the iteration engine
//! consumes; the `-E` term is structural (slope exactly -1) and is never
//! stored, only implied.

use std::fmt;
use std::sync::Arc;

use super::{AmplitudeMode, OperatorExpression};
use crate::error::AlgebraError;

/// Occupation range a recurrence lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `n = 0, 1, 2, …` (single-boson chains).
    HalfLine,
    /// `n = 0, 1, …, len-1` (finite algebraic chains).
    Bounded { len: u64 },
}

impl Domain {
    pub fn contains(&self, n: i64) -> bool {
        match self {
            Domain::HalfLine => n >= 0,
            Domain::Bounded { len } => n >= 0 && (n as u64) < *len,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Domain::Bounded { .. })
    }
}

/// Coefficient function of one band: occupation ↦ amplitude.
pub type CoeffFn = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

/// A banded relation among occupation-number kets with
/// occupation-dependent coefficients.
///
/// `coeff(0, n)` returns the energy-free diagonal part; the full Δ = 0
/// channel of the relation is `coeff(0, n) - E`.
#[derive(Clone)]
pub struct RecurrenceRelation {
    offsets: Vec<i64>,
    bands: Vec<CoeffFn>,
    domain: Domain,
}

impl fmt::Debug for RecurrenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecurrenceRelation")
            .field("offsets", &self.offsets)
            .field("domain", &self.domain)
            .finish()
    }
}

impl RecurrenceRelation {
    /// Assemble from per-offset coefficient functions.
    ///
    /// Offsets are sorted and deduplicated; a zero band is inserted for
    /// Δ = 0 if absent, since that channel always exists through `-E`.
    /// On bounded domains, bands that vanish on every site are dropped
    /// (the check is finite, hence exact).
    pub fn from_bands(bands: impl IntoIterator<Item = (i64, CoeffFn)>, domain: Domain) -> Self {
        let mut pairs: Vec<(i64, CoeffFn)> = bands.into_iter().collect();
        pairs.sort_by_key(|(delta, _)| *delta);
        pairs.dedup_by_key(|(delta, _)| *delta);
        if let Domain::Bounded { len } = domain {
            pairs.retain(|(delta, f)| *delta == 0 || (0..len).any(|n| f(n) != 0.0));
        }
        if !pairs.iter().any(|(delta, _)| *delta == 0) {
            let zero: CoeffFn = Arc::new(|_| 0.0);
            pairs.push((0, zero));
            pairs.sort_by_key(|(delta, _)| *delta);
        }
        let (offsets, bands) = pairs.into_iter().unzip();
        Self {
            offsets,
            bands,
            domain,
        }
    }

    /// Sorted band offsets (always containing 0).
    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Amplitude multiplying `|n+Δ⟩` in `(H-E)|n⟩`, without the `-E`
    /// shift on the Δ = 0 channel. Zero whenever `n+Δ` or `n` falls
    /// outside the domain, or Δ is not a band.
    pub fn coeff(&self, delta: i64, n: u64) -> f64 {
        if !self.domain.contains(n as i64) || !self.domain.contains(n as i64 + delta) {
            return 0.0;
        }
        match self.offsets.binary_search(&delta) {
            Ok(idx) => (self.bands[idx])(n),
            Err(_) => 0.0,
        }
    }

    /// Offsets with a band attached, excluding Δ = 0.
    pub fn nonzero_offsets(&self) -> Vec<i64> {
        self.offsets.iter().copied().filter(|d| *d != 0).collect()
    }

    /// Largest positive offset, if any.
    pub fn max_offset(&self) -> Option<i64> {
        self.offsets.iter().copied().filter(|d| *d > 0).max()
    }
}

/// Number of low occupations probed when deciding whether a candidate
/// band is identically zero. Amplitudes are products of square roots
/// that can vanish only near the boundary, so a short probe suffices.
const BAND_PROBE_POINTS: u64 = 24;

pub(super) fn from_expression(
    expr: &OperatorExpression,
) -> Result<RecurrenceRelation, AlgebraError> {
    if expr.is_empty() {
        return Err(AlgebraError::EmptyExpression);
    }
    let mut bands: Vec<(i64, CoeffFn)> = Vec::new();
    for delta in expr.net_shifts() {
        let sub = OperatorExpression::from_terms(
            expr.terms()
                .iter()
                .filter(|(_, w)| w.net_shift() == delta)
                .map(|(c, w)| (*c, w.clone())),
        );
        let max_len = sub
            .terms()
            .iter()
            .map(|(_, w)| w.len() as u64)
            .max()
            .unwrap_or(0);
        let alive = (0..max_len + BAND_PROBE_POINTS).any(|n| {
            let row = n as i64 + delta;
            row >= 0 && sub.matrix_element(row as u64, n) != 0.0
        });
        if alive || delta == 0 {
            let f: CoeffFn = Arc::new(move |n| {
                let row = n as i64 + delta;
                if row < 0 {
                    0.0
                } else {
                    sub.matrix_element_in(AmplitudeMode::PerFactorSqrt, row as u64, n)
                }
            });
            bands.push((delta, f));
        }
    }
    Ok(RecurrenceRelation::from_bands(bands, Domain::HalfLine))
}
