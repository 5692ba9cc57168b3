//! Ladder-operator words and weighted sums of them.
//!
//! An operator is represented as a linear combination of *words*: finite
//! sequences over the alphabet {lower, raise}. Words act exactly on
//! occupation-number states,
//!
//! ```text
//! a|n⟩ = √n |n-1⟩,    a⁺|n⟩ = √(n+1) |n+1⟩,
//! ```
//!
//! so every matrix element is a product of square roots of nonnegative
//! integers. No normal ordering or commutator rewriting is performed;
//! algebraically equal but differently ordered words stay distinct.

mod recurrence;

pub use recurrence::{CoeffFn, Domain, RecurrenceRelation};

use std::collections::BTreeMap;

use crate::error::AlgebraError;

/// A single ladder letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Annihilation operator `a`.
    Lower,
    /// Creation operator `a⁺`.
    Raise,
}

/// How word amplitudes are accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeMode {
    /// Multiply one square root per letter (one rounding per factor).
    #[default]
    PerFactorSqrt,
    /// Accumulate the squared amplitude as an exact integer, then take a
    /// single square root. Falls back to per-factor products if the
    /// integer would overflow.
    ExactSquare,
}

/// Result of applying a word to an occupation-number state.
///
/// `Annihilated` means some intermediate occupation would have dropped
/// below zero; it is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LadderAction<I = u64> {
    Moved { amplitude: f64, occupation: I },
    Annihilated,
}

impl<I> LadderAction<I> {
    pub fn amplitude(&self) -> Option<f64> {
        match self {
            LadderAction::Moved { amplitude, .. } => Some(*amplitude),
            LadderAction::Annihilated => None,
        }
    }
}

/// An ordered sequence of ladder letters, applied rightmost-first.
///
/// The empty word is the identity operator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OperatorWord {
    letters: Vec<Letter>,
}

impl OperatorWord {
    pub fn new(letters: impl Into<Vec<Letter>>) -> Self {
        Self {
            letters: letters.into(),
        }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// The word consisting of the single letter `a`.
    pub fn lower() -> Self {
        Self::new([Letter::Lower])
    }

    /// The word consisting of the single letter `a⁺`.
    pub fn raise() -> Self {
        Self::new([Letter::Raise])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Net occupation shift, recomputed from the letters.
    pub fn net_shift(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::Raise => 1,
                Letter::Lower => -1,
            })
            .sum()
    }

    /// Operator product `self · other` (so `other` acts first).
    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Self { letters }
    }

    /// Hermitian conjugate: reverse the sequence and swap raise/lower.
    pub fn dagger(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| match l {
                    Letter::Raise => Letter::Lower,
                    Letter::Lower => Letter::Raise,
                })
                .collect(),
        }
    }

    /// Apply the word to `|n⟩` with the default amplitude mode.
    pub fn apply(&self, n: u64) -> LadderAction {
        self.apply_in(AmplitudeMode::PerFactorSqrt, n)
    }

    /// Apply the word to `|n⟩`, accumulating amplitudes per `mode`.
    pub fn apply_in(&self, mode: AmplitudeMode, n: u64) -> LadderAction {
        match mode {
            AmplitudeMode::PerFactorSqrt => self.apply_per_factor(n),
            AmplitudeMode::ExactSquare => self.apply_exact_square(n),
        }
    }

    fn apply_per_factor(&self, n: u64) -> LadderAction {
        let mut occ = n;
        let mut amplitude = 1.0_f64;
        for letter in self.letters.iter().rev() {
            match letter {
                Letter::Raise => {
                    amplitude *= ((occ + 1) as f64).sqrt();
                    occ += 1;
                }
                Letter::Lower => {
                    if occ == 0 {
                        return LadderAction::Annihilated;
                    }
                    amplitude *= (occ as f64).sqrt();
                    occ -= 1;
                }
            }
        }
        LadderAction::Moved {
            amplitude,
            occupation: occ,
        }
    }

    fn apply_exact_square(&self, n: u64) -> LadderAction {
        let mut occ = n;
        let mut square: u128 = 1;
        for letter in self.letters.iter().rev() {
            let factor = match letter {
                Letter::Raise => {
                    occ += 1;
                    occ
                }
                Letter::Lower => {
                    if occ == 0 {
                        return LadderAction::Annihilated;
                    }
                    let f = occ;
                    occ -= 1;
                    f
                }
            };
            square = match square.checked_mul(factor as u128) {
                Some(s) => s,
                // Integer overflow; per-factor products are the fallback.
                None => return self.apply_per_factor(n),
            };
        }
        LadderAction::Moved {
            amplitude: (square as f64).sqrt(),
            occupation: occ,
        }
    }
}

/// Default cap on the number of terms a formal power may produce.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// A weighted sum of operator words.
///
/// Terms with coefficient exactly zero are dropped and equal letter
/// sequences are merged, so the representation is canonical under
/// verbatim word comparison.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorExpression {
    terms: Vec<(f64, OperatorWord)>,
}

impl OperatorExpression {
    /// Build from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (f64, OperatorWord)>) -> Self {
        let mut merged: BTreeMap<OperatorWord, f64> = BTreeMap::new();
        for (coeff, word) in terms {
            *merged.entry(word).or_insert(0.0) += coeff;
        }
        Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|(w, c)| (c, w))
                .collect(),
        }
    }

    pub fn identity() -> Self {
        Self::from_terms([(1.0, OperatorWord::identity())])
    }

    /// The annihilation operator `a`.
    pub fn lower() -> Self {
        Self::from_terms([(1.0, OperatorWord::lower())])
    }

    /// The creation operator `a⁺`.
    pub fn raise() -> Self {
        Self::from_terms([(1.0, OperatorWord::raise())])
    }

    pub fn terms(&self) -> &[(f64, OperatorWord)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(c, w)| (*c, w.clone())),
        )
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, w)| (c * factor, w.clone())))
    }

    /// Formal operator product; words concatenate, no simplification.
    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(ca, wa)| {
            other
                .terms
                .iter()
                .map(move |(cb, wb)| (ca * cb, wa.concat(wb)))
        }))
    }

    /// Hermitian conjugate term by term.
    pub fn dagger(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, w)| (*c, w.dagger())))
    }

    /// `k`-fold formal product, with the default term cap.
    pub fn power(&self, k: u32) -> Result<Self, AlgebraError> {
        self.power_capped(k, DEFAULT_TERM_CAP)
    }

    /// `k`-fold formal product. `k = 0` gives the identity. The raw term
    /// count `(#terms)^k` is checked against `cap` before expanding.
    pub fn power_capped(&self, k: u32, cap: usize) -> Result<Self, AlgebraError> {
        let raw = (self.terms.len() as u128)
            .checked_pow(k)
            .unwrap_or(u128::MAX);
        if raw > cap as u128 {
            return Err(AlgebraError::TermCapExceeded { terms: raw, cap });
        }
        let mut out = Self::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// `⟨row| expr |col⟩` with the default amplitude mode.
    pub fn matrix_element(&self, row: u64, col: u64) -> f64 {
        self.matrix_element_in(AmplitudeMode::PerFactorSqrt, row, col)
    }

    /// `⟨row| expr |col⟩`: sum of term amplitudes landing on `row`.
    pub fn matrix_element_in(&self, mode: AmplitudeMode, row: u64, col: u64) -> f64 {
        let mut sum = 0.0;
        for (coeff, word) in &self.terms {
            if let LadderAction::Moved {
                amplitude,
                occupation,
            } = word.apply_in(mode, col)
            {
                if occupation == row {
                    sum += coeff * amplitude;
                }
            }
        }
        sum
    }

    /// Distinct net shifts over the expression's words, sorted.
    pub fn net_shifts(&self) -> Vec<i64> {
        let mut shifts: Vec<i64> = self.terms.iter().map(|(_, w)| w.net_shift()).collect();
        shifts.sort_unstable();
        shifts.dedup();
        shifts
    }

    /// Extract the banded ket recurrence this expression induces on the
    /// half-line of occupation numbers; see [`RecurrenceRelation`].
    pub fn to_recurrence(&self) -> Result<RecurrenceRelation, AlgebraError> {
        recurrence::from_expression(self)
    }
}
