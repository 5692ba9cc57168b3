//! Decoupling a banded recurrence into parity chains.
//!
//! Occupations in different residue classes modulo the band gcd never
//! mix, so each class is iterated on its own. The seeds of a chain are
//! its first `Δ_max / step` sites: relations taken from the bottom up
//! determine every later site in terms of them, with kets below the
//! domain dropped as zero.

use crate::algebra::{Domain, RecurrenceRelation};
use crate::error::AimError;

/// One residue class of a banded recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityChain {
    step: u64,
    residue: u64,
    seeds: Vec<u64>,
    domain: Domain,
}

impl ParityChain {
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    /// Seed occupations, in increasing order.
    pub fn seeds(&self) -> &[u64] {
        &self.seeds
    }

    pub fn seed_count(&self) -> usize {
        self.seeds.len()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Occupation of the chain site at `position`.
    pub fn occupation(&self, position: usize) -> u64 {
        self.residue + self.step * position as u64
    }

    /// Number of chain sites, when the domain is bounded.
    pub fn site_count(&self) -> Option<u64> {
        match self.domain {
            Domain::HalfLine => None,
            Domain::Bounded { len } => {
                if self.residue >= len {
                    Some(0)
                } else {
                    Some((len - 1 - self.residue) / self.step + 1)
                }
            }
        }
    }

    pub fn label(&self) -> String {
        match (self.step, self.residue) {
            (1, _) => "full".to_string(),
            (2, 0) => "even".to_string(),
            (2, 1) => "odd".to_string(),
            (step, residue) => format!("n={residue} (mod {step})"),
        }
    }
}

/// Outcome of chain decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainDecomposition {
    /// No off-diagonal bands; the spectrum is the diagonal itself.
    Diagonal,
    Chains(Vec<ParityChain>),
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Split a recurrence into its decoupled residue-class chains.
pub fn decompose_chains(rec: &RecurrenceRelation) -> Result<ChainDecomposition, AimError> {
    let nonzero = rec.nonzero_offsets();
    if nonzero.is_empty() {
        return Ok(ChainDecomposition::Diagonal);
    }
    let max_offset = match rec.max_offset() {
        Some(m) => m as u64,
        None => return Err(AimError::NoRaisingBand),
    };
    let step = nonzero
        .iter()
        .map(|d| d.unsigned_abs())
        .fold(0, gcd);
    let seed_dim = (max_offset / step) as usize;
    let residue_limit = match rec.domain() {
        Domain::HalfLine => step,
        Domain::Bounded { len } => step.min(len),
    };
    let chains = (0..residue_limit)
        .map(|residue| {
            let mut chain = ParityChain {
                step,
                residue,
                seeds: Vec::new(),
                domain: rec.domain(),
            };
            let site_count = chain.site_count().unwrap_or(u64::MAX);
            chain.seeds = (0..seed_dim.min(site_count as usize))
                .map(|t| chain.occupation(t))
                .collect();
            chain
        })
        .collect();
    Ok(ChainDecomposition::Chains(chains))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{
        anharmonic_hamiltonian, bistable_hamiltonian, AnharmonicParams, BistableParams, HalfInt,
        Su2Model,
    };

    #[test]
    fn anharmonic_has_even_and_odd_two_seed_chains() {
        let rec = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 })
            .to_recurrence()
            .unwrap();
        match decompose_chains(&rec).unwrap() {
            ChainDecomposition::Chains(chains) => {
                assert_eq!(chains.len(), 2);
                assert_eq!(chains[0].step(), 2);
                assert_eq!(chains[0].seeds(), &[0, 2]);
                assert_eq!(chains[0].label(), "even");
                assert_eq!(chains[1].seeds(), &[1, 3]);
                assert_eq!(chains[1].label(), "odd");
            }
            ChainDecomposition::Diagonal => panic!("not diagonal"),
        }
    }

    #[test]
    fn bistable_has_single_seed_chains() {
        let rec = bistable_hamiltonian(&BistableParams {
            omega: 1.0,
            kappa: 0.1,
            omega_nl: 0.1,
        })
        .to_recurrence()
        .unwrap();
        match decompose_chains(&rec).unwrap() {
            ChainDecomposition::Chains(chains) => {
                assert_eq!(chains.len(), 2);
                assert_eq!(chains[0].seeds(), &[0]);
                assert_eq!(chains[1].seeds(), &[1]);
            }
            ChainDecomposition::Diagonal => panic!("not diagonal"),
        }
    }

    #[test]
    fn su2_chain_is_finite_with_single_seed() {
        let model = Su2Model::new(HalfInt::from_int(3), 2, 1.0, 0.5).unwrap();
        let rec = model.recurrence();
        match decompose_chains(&rec).unwrap() {
            ChainDecomposition::Chains(chains) => {
                assert_eq!(chains.len(), 2);
                // internal index chain {0,2,4,6} is m in {-3,-1,1,3}
                assert_eq!(chains[0].seeds(), &[0]);
                assert_eq!(chains[0].site_count(), Some(4));
                assert_eq!(chains[1].seeds(), &[1]);
                assert_eq!(chains[1].site_count(), Some(3));
            }
            ChainDecomposition::Diagonal => panic!("not diagonal"),
        }
    }

    #[test]
    fn harmonic_is_trivially_diagonal() {
        let rec = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.0 })
            .to_recurrence()
            .unwrap();
        assert_eq!(
            decompose_chains(&rec).unwrap(),
            ChainDecomposition::Diagonal
        );
    }
}
