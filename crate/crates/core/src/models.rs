//! The concrete Hamiltonians and the su(2) algebraic machinery.
//!
//! Three model families are provided: the quartic anharmonic oscillator,
//! a bistable two-photon medium, and two-mode multiphoton couplings that
//! reduce to finite su(2) chains when the photon exchange is balanced.
//! Closed-form spectra for the exactly solvable members serve as ground
//! truth in tests and comparisons.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{CoeffFn, Domain, LadderAction, OperatorExpression, RecurrenceRelation};
use crate::error::ModelError;

/// Half-integer stored exactly as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    pub fn from_int(v: i64) -> Self {
        Self { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Quartic oscillator strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnharmonicParams {
    pub alpha: f64,
}

/// Bistable two-photon medium parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BistableParams {
    pub omega: f64,
    pub kappa: f64,
    /// Strength of the Kerr-like a⁺²a² term.
    pub omega_nl: f64,
}

/// Two-mode multiphoton coupling parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeParams {
    pub omega: f64,
    pub kappa: f64,
    /// Photons created in mode a per exchange.
    pub s: u32,
    /// Photons absorbed from mode b per exchange.
    pub r: u32,
}

/// `H = a⁺a + aa⁺ + (α/4)(a + a⁺)⁴`.
pub fn anharmonic_hamiltonian(p: &AnharmonicParams) -> OperatorExpression {
    let a = OperatorExpression::lower();
    let ad = OperatorExpression::raise();
    let quartic = a.add(&ad).power(4).expect("2^4 words is far below the cap");
    ad.mul(&a)
        .add(&a.mul(&ad))
        .add(&quartic.scale(p.alpha / 4.0))
}

/// Bistable two-photon Hamiltonian `ω a⁺a + κ(a² - a⁺²) + Ω a⁺²a²`.
///
/// The coupling sign convention puts `+κ√(n(n-1))` on the sub-band and
/// `-κ√((n+1)(n+2))` on the super-band; the spectrum is even in κ.
pub fn bistable_hamiltonian(p: &BistableParams) -> OperatorExpression {
    let a = OperatorExpression::lower();
    let ad = OperatorExpression::raise();
    ad.mul(&a)
        .scale(p.omega)
        .add(&a.mul(&a).scale(p.kappa))
        .add(&ad.mul(&ad).scale(-p.kappa))
        .add(&ad.mul(&ad).mul(&a).mul(&a).scale(p.omega_nl))
}

/// su(2) generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Su2Generator {
    JPlus,
    JMinus,
    JZero,
}

/// A finite su(2) Hamiltonian `H = ωsN + κ(J₊ˢ + J₋ˢ)` on the spin-j
/// irreducible representation (total boson number N = 2j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Model {
    j: HalfInt,
    s: u32,
    pub omega: f64,
    pub kappa: f64,
}

impl Su2Model {
    pub fn new(j: HalfInt, s: u32, omega: f64, kappa: f64) -> Result<Self, ModelError> {
        if j.twice() < 0 {
            return Err(ModelError::InvalidParameter(format!("j={j} must be >= 0")));
        }
        if s == 0 {
            return Err(ModelError::InvalidParameter("s must be >= 1".into()));
        }
        Ok(Self { j, s, omega, kappa })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// Basis size 2j + 1.
    pub fn dim(&self) -> u64 {
        self.j.twice() as u64 + 1
    }

    /// Total boson number N = 2j.
    pub fn boson_number(&self) -> u64 {
        self.j.twice() as u64
    }

    /// Casimir eigenvalue j(j+1) = N(N+2)/4.
    pub fn casimir(&self) -> f64 {
        let tj = self.j.twice() as f64;
        tj * (tj + 2.0) / 4.0
    }

    /// Weight labels m = -j, -j+1, …, j.
    pub fn basis(&self) -> impl Iterator<Item = HalfInt> + '_ {
        let tj = self.j.twice();
        (-tj..=tj).step_by(2).map(HalfInt::from_twice)
    }

    fn in_basis(&self, m: HalfInt) -> bool {
        m.twice().abs() <= self.j.twice() && (m.twice() - self.j.twice()) % 2 == 0
    }

    /// Repeated action of a generator on `|j, m⟩`.
    ///
    /// `J₊|j,m⟩ = √((j-m)(j+m+1))|j,m+1⟩` and the mirror for J₋,
    /// composed `power` times; stepping outside [-j, j] annihilates.
    /// J₀ leaves the ket unchanged with amplitude m^power.
    pub fn apply(
        &self,
        generator: Su2Generator,
        power: u32,
        m: HalfInt,
    ) -> Result<LadderAction<HalfInt>, ModelError> {
        if !self.in_basis(m) {
            return Err(ModelError::OutOfBasis {
                m: m.to_string(),
                j: self.j.to_string(),
            });
        }
        let tj = self.j.twice();
        match generator {
            Su2Generator::JZero => Ok(LadderAction::Moved {
                amplitude: m.value().powi(power as i32),
                occupation: m,
            }),
            Su2Generator::JPlus | Su2Generator::JMinus => {
                let up = generator == Su2Generator::JPlus;
                let mut tm = m.twice();
                let mut amplitude = 1.0;
                for _ in 0..power {
                    // (j ∓ m)(j ± m + 1) in doubled-integer arithmetic
                    let (fore, aft) = if up {
                        (tj - tm, tj + tm + 2)
                    } else {
                        (tj + tm, tj - tm + 2)
                    };
                    if fore <= 0 {
                        return Ok(LadderAction::Annihilated);
                    }
                    amplitude *= ((fore * aft) as f64).sqrt() / 2.0;
                    tm += if up { 2 } else { -2 };
                }
                Ok(LadderAction::Moved {
                    amplitude,
                    occupation: HalfInt::from_twice(tm),
                })
            }
        }
    }

    /// The banded relation `(H - E)|j,m⟩ = 0` on the internal index
    /// `i = m + j ∈ {0, …, 2j}`, with offsets {-s, 0, +s}.
    ///
    /// Off-band amplitudes come from composing the single-step ladder
    /// action s times, which is well defined at every m.
    pub fn recurrence(&self) -> RecurrenceRelation {
        let len = self.dim();
        let diag = 2.0 * self.omega * self.s as f64 * self.j.value();
        let diag_fn: CoeffFn = Arc::new(move |_| diag);
        let model = *self;
        let up_fn: CoeffFn = Arc::new(move |i| model.band_amplitude(Su2Generator::JPlus, i));
        let model = *self;
        let down_fn: CoeffFn = Arc::new(move |i| model.band_amplitude(Su2Generator::JMinus, i));
        RecurrenceRelation::from_bands(
            [
                (-(self.s as i64), down_fn),
                (0, diag_fn),
                (self.s as i64, up_fn),
            ],
            Domain::Bounded { len },
        )
    }

    fn band_amplitude(&self, generator: Su2Generator, i: u64) -> f64 {
        let m = HalfInt::from_twice(2 * i as i64 - self.j.twice());
        match self.apply(generator, self.s, m) {
            Ok(LadderAction::Moved { amplitude, .. }) => self.kappa * amplitude,
            _ => 0.0,
        }
    }

    /// Label of the weight at internal index `i`.
    pub fn weight_at(&self, i: u64) -> HalfInt {
        HalfInt::from_twice(2 * i as i64 - self.j.twice())
    }
}

impl TwoModeParams {
    /// Reduce to the su(2) model on the block of total boson number
    /// `n_total`; only balanced exchanges (r = s) close into su(2).
    pub fn to_su2(&self, n_total: u64) -> Result<Su2Model, ModelError> {
        if self.r != self.s {
            return Err(ModelError::UnsupportedReduction {
                r: self.r,
                s: self.s,
            });
        }
        Su2Model::new(
            HalfInt::from_twice(n_total as i64),
            self.s,
            self.omega,
            self.kappa,
        )
    }
}

/// A model instance with a known closed-form spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactFamily {
    /// Bistable medium with Ω = 0.
    Bistable(BistableParams),
    /// su(2) chain with s = 1, or with κ = 0 at any s.
    Su2(Su2Model),
}

/// Closed-form eigenvalue `E_n` of an exactly solvable model.
///
/// - Bistable, Ω = 0: `E_n = -ω/2 + √(ω² + 4κ²)(n + 1/2)`, which is
///   `2n + 1/2` at ω = 1, κ = √3/2.
/// - su(2), s = 1: `E_n = 2ωj + 2(n - j)κ` for n = 0, …, 2j.
/// - su(2), κ = 0: `E_n = 2ωsj`.
pub fn exact_reference(family: &ExactFamily, n: u64) -> Result<f64, ModelError> {
    match family {
        ExactFamily::Bistable(p) => {
            if p.omega_nl != 0.0 {
                return Err(ModelError::NotExactlySolvable(format!(
                    "bistable medium is only solvable at Omega = 0 (got {})",
                    p.omega_nl
                )));
            }
            let gap = (p.omega * p.omega + 4.0 * p.kappa * p.kappa).sqrt();
            Ok(-p.omega / 2.0 + gap * (n as f64 + 0.5))
        }
        ExactFamily::Su2(model) => {
            if n >= model.dim() {
                return Err(ModelError::InvalidParameter(format!(
                    "level {n} exceeds the {}-state basis",
                    model.dim()
                )));
            }
            let j = model.j().value();
            if model.kappa == 0.0 {
                Ok(2.0 * model.omega * model.s() as f64 * j)
            } else if model.s() == 1 {
                Ok(2.0 * model.omega * j + 2.0 * (n as f64 - j) * model.kappa)
            } else {
                Err(ModelError::NotExactlySolvable(format!(
                    "su(2) chain with s={} and kappa != 0",
                    model.s()
                )))
            }
        }
    }
}
