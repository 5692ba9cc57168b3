//! Eigenvalues of bosonic and finite su(2) algebraic Hamiltonians by
//! asymptotic iteration of ket recurrences, with an independent
//! truncated-matrix oracle.
//!
//! The pieces fit together like this:
//!
//! - [`algebra`] represents operators as weighted ladder-operator words,
//!   evaluates their exact Fock-space action, and extracts the banded
//!   recurrence a Hamiltonian induces.
//! - [`models`] builds the bundled Hamiltonians (quartic anharmonic
//!   oscillator, bistable two-photon medium, two-mode multiphoton
//!   couplings and their su(2) reduction) plus closed-form spectra for
//!   the exactly solvable members.
//! - [`aim`] runs the iteration: parity-chain decomposition, polynomial
//!   seed expansions, termination functions and root extraction, in
//!   plain or double-double arithmetic.
//! - [`oracle`] cross-checks everything against dense diagonalization
//!   of truncated or conserved-charge-block matrices.

pub mod algebra;
pub mod aim;
pub mod error;
pub mod models;
pub mod oracle;

pub use aim::{solve_expression, solve_recurrence, solve_su2, AimOptions, EigenResult, EigenRoot};
