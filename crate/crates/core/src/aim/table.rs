//! Seed-expansion tables: the iteration that writes every chain site as
//! a polynomial combination of the seed kets.
//!
//! Working up the chain, each relation is solved for its highest ket;
//! substituting earlier expansions leaves a vector of polynomials in E
//! per site. On bounded chains the top relation cannot be solved upward
//! and instead yields the exact termination constraint.

use super::chain::ParityChain;
use super::poly::EPolynomial;
use super::scalar::Scalar;
use crate::algebra::{Domain, RecurrenceRelation};
use crate::error::AimError;

/// Per-site seed expansions of one chain.
///
/// Expansions are polynomials in the shifted energy `x = E -
/// energy_shift`. Bounded chains center the variable on the mean
/// diagonal so clustered spectra stay well conditioned; half-line
/// chains use no shift.
#[derive(Debug, Clone)]
pub struct CoefficientTable<S: Scalar> {
    chain: ParityChain,
    levels: Vec<Vec<EPolynomial<S>>>,
    constraints: Vec<EPolynomial<S>>,
    energy_shift: f64,
}

impl<S: Scalar> CoefficientTable<S> {
    pub fn chain(&self) -> &ParityChain {
        &self.chain
    }

    /// The energy origin of the polynomial variable.
    pub fn energy_shift(&self) -> f64 {
        self.energy_shift
    }

    /// Number of computed sites.
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Seed-expansion vector of the site at `level`.
    pub fn level(&self, level: usize) -> Option<&[EPolynomial<S>]> {
        self.levels.get(level).map(|v| v.as_slice())
    }

    /// Boundary relations of a bounded chain (empty on the half-line).
    pub fn constraints(&self) -> &[EPolynomial<S>] {
        &self.constraints
    }

    /// Multiply one site's expansion vector by a constant. A positive
    /// factor never moves the roots of [`Self::termination`].
    pub fn scale_level(&mut self, level: usize, factor: f64) {
        if let Some(vec) = self.levels.get_mut(level) {
            for poly in vec {
                *poly = poly.scale_f64(factor);
            }
        }
    }

    /// The quantization function at `level`.
    ///
    /// Bounded chains return the exact boundary constraint. On the
    /// half-line a one-seed chain returns the site's expansion
    /// polynomial; a two-seed chain returns the 2x2 determinant over the
    /// sites `level` and `level + 1` (consecutive same-parity levels).
    pub fn termination(&self, level: usize) -> Result<EPolynomial<S>, AimError> {
        if !self.constraints.is_empty() {
            if self.constraints.len() == 1 {
                return Ok(self.constraints[0].clone());
            }
            return Err(AimError::UnsupportedSeedDimension(
                self.chain.seed_count(),
            ));
        }
        let max = self.levels.len().saturating_sub(1);
        match self.chain.seed_count() {
            1 => {
                let v = self
                    .levels
                    .get(level)
                    .ok_or(AimError::LevelOutOfRange { level, max })?;
                Ok(v[0].clone())
            }
            2 => {
                if level + 1 > max {
                    return Err(AimError::LevelOutOfRange { level, max });
                }
                let lo = &self.levels[level];
                let hi = &self.levels[level + 1];
                let det = lo[0].mul(&hi[1]).sub(&hi[0].mul(&lo[1]));
                // the determinant is the characteristic polynomial of the
                // leading `level`-site block up to a constant, so its true
                // degree is `level`; anything above is cancellation dust
                Ok(det.truncated(level))
            }
            d => Err(AimError::UnsupportedSeedDimension(d)),
        }
    }
}

/// Run the iteration on one chain.
///
/// For a half-line chain the table holds sites `0..=depth`. For a
/// bounded chain the whole chain is always computed and `depth` is
/// ignored; the boundary constraints appear in
/// [`CoefficientTable::constraints`].
pub fn iterate<S: Scalar>(
    rec: &RecurrenceRelation,
    chain: &ParityChain,
    depth: usize,
) -> Result<CoefficientTable<S>, AimError> {
    let d = chain.seed_count();
    let step = chain.step();
    let max_offset = rec.max_offset().ok_or(AimError::NoRaisingBand)?;
    let solve_stride = (max_offset as u64 / step) as usize;

    let (site_count, bounded) = match chain.domain() {
        Domain::HalfLine => {
            if depth < d {
                return Err(AimError::InvalidOptions(format!(
                    "depth {depth} is below the seed count {d}"
                )));
            }
            (depth + 1, false)
        }
        Domain::Bounded { .. } => (chain.site_count().unwrap_or(0) as usize, true),
    };

    // center the energy variable on a bounded chain's mean diagonal;
    // its roots cluster there, and monomial arithmetic is only well
    // conditioned near the origin
    let energy_shift = if bounded && site_count > 0 {
        (0..site_count)
            .map(|t| rec.coeff(0, chain.occupation(t)))
            .sum::<f64>()
            / site_count as f64
    } else {
        0.0
    };

    let mut levels: Vec<Vec<EPolynomial<S>>> = Vec::with_capacity(site_count);
    for t in 0..d.min(site_count) {
        let mut unit = vec![EPolynomial::zero(); d];
        unit[t] = EPolynomial::constant(1.0);
        levels.push(unit);
    }

    // accumulate the relation at site `u`, skipping the leading band
    let accumulate = |levels: &Vec<Vec<EPolynomial<S>>>, u: usize, skip_lead: bool| {
        let n_u = chain.occupation(u);
        let mut acc = vec![EPolynomial::<S>::zero(); d];
        for &delta in rec.offsets() {
            if skip_lead && delta == max_offset {
                continue;
            }
            debug_assert_eq!(delta.rem_euclid(step as i64), 0);
            let src = u as i64 + delta / step as i64;
            if src < 0 || src as usize >= levels.len() {
                continue;
            }
            let c = rec.coeff(delta, n_u);
            let source = &levels[src as usize];
            if delta == 0 {
                // the channel value is (c0 - E) = (c0 - shift) - x
                for (a, v) in acc.iter_mut().zip(source) {
                    *a = a.add(&v.mul_affine(c - energy_shift, -1.0));
                }
            } else if c != 0.0 {
                for (a, v) in acc.iter_mut().zip(source) {
                    *a = a.add(&v.scale_f64(c));
                }
            }
        }
        acc
    };

    for t in d..site_count {
        let u = t - solve_stride;
        let n_u = chain.occupation(u);
        let lead = rec.coeff(max_offset, n_u);
        if lead == 0.0 {
            return Err(AimError::SingularRecurrence { occupation: n_u });
        }
        let neg_inv = -(S::ONE / S::from_f64(lead));
        let acc = accumulate(&levels, u, true);
        levels.push(acc.into_iter().map(|p| p.scale_by(neg_inv)).collect());
    }

    let mut constraints = Vec::new();
    if bounded {
        let first_top = site_count.saturating_sub(solve_stride).min(site_count);
        for u in first_top..site_count {
            // the leading band vanishes here by the domain guard
            let acc = accumulate(&levels, u, false);
            constraints.extend(acc.into_iter().filter(|p| !p.is_zero()));
        }
    }

    Ok(CoefficientTable {
        chain: chain.clone(),
        levels,
        constraints,
        energy_shift,
    })
}
