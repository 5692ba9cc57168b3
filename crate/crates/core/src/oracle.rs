//! Independent ground truth by truncated-matrix diagonalization.
//!
//! Every model can be rendered as a finite banded matrix — a chain
//! restricted to occupations below a cutoff, a whole su(2) block, or a
//! conserved-charge block of the two-mode Hamiltonian — and handed to a
//! dense eigensolver. Nothing here shares code with the iteration
//! engine, which is the point: agreement between the two is evidence,
//! not tautology.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
pub use nalgebra::Complex;

use crate::aim::ParityChain;
use crate::algebra::OperatorExpression;
use crate::error::OracleError;
use crate::models::{Su2Model, TwoModeParams};

/// Dense-storage-free banded real matrix.
///
/// Band `δ` holds the entries `A[i, j]` with `i - j = δ` in column
/// order, so its length is `dim - |δ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    dim: usize,
    bands: BTreeMap<i64, Vec<f64>>,
    symmetric_hint: bool,
}

impl BandedMatrix {
    /// Build from an entry oracle over the given band offsets.
    pub fn from_fn(
        dim: usize,
        offsets: impl IntoIterator<Item = i64>,
        mut entry: impl FnMut(usize, usize) -> f64,
    ) -> Self {
        let mut bands = BTreeMap::new();
        for delta in offsets {
            if delta.unsigned_abs() as usize >= dim {
                continue;
            }
            let len = dim - delta.unsigned_abs() as usize;
            let band: Vec<f64> = (0..len)
                .map(|k| {
                    let (i, j) = if delta >= 0 {
                        (k + delta as usize, k)
                    } else {
                        (k, k + (-delta) as usize)
                    };
                    entry(i, j)
                })
                .collect();
            bands.insert(delta, band);
        }
        let mut m = Self {
            dim,
            bands,
            symmetric_hint: false,
        };
        m.symmetric_hint = m.detect_symmetry();
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetric_hint(&self) -> bool {
        self.symmetric_hint
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.bands.keys().copied().collect()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let delta = i as i64 - j as i64;
        match self.bands.get(&delta) {
            Some(band) => band[i.min(j)],
            None => 0.0,
        }
    }

    /// Exact sum of the diagonal band.
    pub fn trace(&self) -> f64 {
        self.bands
            .get(&0)
            .map_or(0.0, |band| band.iter().sum())
    }

    fn detect_symmetry(&self) -> bool {
        self.bands.iter().all(|(&delta, band)| {
            let mirror = match self.bands.get(&-delta) {
                Some(m) => m,
                None => return band.iter().all(|&x| x == 0.0),
            };
            band.iter().zip(mirror).all(|(&a, &b)| {
                (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
            })
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (&delta, band) in &self.bands {
            for (k, &v) in band.iter().enumerate() {
                let (i, j) = if delta >= 0 {
                    (k + delta as usize, k)
                } else {
                    (k, k + (-delta) as usize)
                };
                m[(i, j)] = v;
            }
        }
        m
    }
}

/// What finite object a spectrum was computed on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Truncation {
    /// Single-mode chain cut at this occupation.
    NMax(u64),
    /// A finite block, described.
    Block(String),
}

/// Eigenvalues of one finite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Sorted by real part, then imaginary part. Real spectra carry
    /// zero imaginary parts.
    pub eigenvalues: Vec<Complex<f64>>,
    pub truncation: Truncation,
    /// Relative Frobenius-norm backward error of the decomposition.
    pub residual_bound: f64,
}

impl SpectrumReport {
    /// The lowest `k` eigenvalues with |Im| below `im_tol`.
    pub fn lowest_real(&self, k: usize, im_tol: f64) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .filter(|z| z.im.abs() <= im_tol)
            .take(k)
            .map(|z| z.re)
            .collect()
    }
}

/// Matrix of an expression on one chain, truncated at `n_max`.
pub fn single_mode_matrix(
    expr: &OperatorExpression,
    chain: &ParityChain,
    n_max: u64,
) -> Result<BandedMatrix, OracleError> {
    let step = chain.step();
    let min = chain.seeds().last().copied().unwrap_or(0) + 2 * step;
    if n_max < min {
        return Err(OracleError::TruncationTooSmall { n_max, min });
    }
    if chain.residue() > n_max {
        return Err(OracleError::TruncationTooSmall { n_max, min });
    }
    let dim = ((n_max - chain.residue()) / step + 1) as usize;
    let rec = expr.to_recurrence()?;
    let offsets: Vec<i64> = rec
        .offsets()
        .iter()
        .map(|d| d / step as i64)
        .collect();
    Ok(BandedMatrix::from_fn(dim, offsets, |i, j| {
        expr.matrix_element(chain.occupation(i), chain.occupation(j))
    }))
}

/// Full (2j+1)-dimensional matrix of an su(2) model.
pub fn su2_matrix(model: &Su2Model) -> BandedMatrix {
    let rec = model.recurrence();
    let dim = model.dim() as usize;
    BandedMatrix::from_fn(dim, rec.offsets().iter().copied(), |i, j| {
        rec.coeff(i as i64 - j as i64, j as u64)
    })
}

/// All eigenvalues of a real banded matrix.
///
/// Symmetric matrices take the symmetric path (real spectrum by
/// construction); anything else goes through a real Schur
/// decomposition with complex output.
pub fn eig_general(matrix: &BandedMatrix) -> Result<SpectrumReport, OracleError> {
    if matrix.dim == 0 {
        return Err(OracleError::EmptyMatrix);
    }
    let dense = matrix.to_dense();
    let norm = dense.norm().max(f64::MIN_POSITIVE);
    let (mut eigenvalues, residual) = if matrix.symmetric_hint {
        let eig = dense.clone().symmetric_eigen();
        let mut residual = 0.0_f64;
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let r = (&dense * v - v * lambda).norm();
            residual = residual.max(r / norm);
        }
        let vals: Vec<Complex<f64>> = eig
            .eigenvalues
            .iter()
            .map(|&x| Complex::new(x, 0.0))
            .collect();
        (vals, residual)
    } else {
        let schur = nalgebra::Schur::try_new(dense.clone(), f64::EPSILON, 0).ok_or(
            OracleError::EigIterationFailed { dim: matrix.dim },
        )?;
        let vals: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
        let (q, t) = schur.unpack();
        let residual = (&dense - &q * t * q.transpose()).norm() / norm;
        (vals, residual)
    };
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(SpectrumReport {
        eigenvalues,
        truncation: Truncation::Block(format!("{0}x{0}", matrix.dim)),
        residual_bound: residual,
    })
}

/// Basis of the conserved-charge block: all (n_a, n_b) with
/// `r·n_a + s·n_b = charge`, ordered by n_a.
pub fn two_mode_basis(p: &TwoModeParams, charge: u64) -> Vec<(u64, u64)> {
    let (r, s) = (p.r as u64, p.s as u64);
    (0..=charge / r)
        .filter_map(|n_a| {
            let rest = charge - r * n_a;
            rest.is_multiple_of(s).then_some((n_a, rest / s))
        })
        .collect()
}

/// Falling-factorial amplitude of k-fold lowering from occupation n:
/// √(n (n-1) … (n-k+1)); zero when the mode empties out.
fn lower_amp(n: u64, k: u64) -> f64 {
    if n < k {
        return 0.0;
    }
    ((n - k + 1)..=n).map(|x| x as f64).product::<f64>().sqrt()
}

/// Rising-factorial amplitude of k-fold raising from occupation n:
/// √((n+1)(n+2) … (n+k)).
fn raise_amp(n: u64, k: u64) -> f64 {
    ((n + 1)..=(n + k)).map(|x| x as f64).product::<f64>().sqrt()
}

/// Matrix of the two-mode Hamiltonian on one conserved-charge block.
///
/// The coupling `a⁺ˢbʳ + b⁺ʳaˢ` moves (n_a, n_b) to (n_a ± s, n_b ∓ r),
/// which preserves `r·n_a + s·n_b`; the block is therefore finite and
/// the matrix real symmetric.
pub fn two_mode_block(p: &TwoModeParams, charge: u64) -> Result<BandedMatrix, OracleError> {
    let basis = two_mode_basis(p, charge);
    if basis.is_empty() {
        return Err(OracleError::EmptyBlock { charge });
    }
    let dim = basis.len();
    // consecutive basis states step n_a by s/gcd(r,s); the coupling
    // moves n_a by s, i.e. gcd(r,s) positions
    let jump = gcd(p.r as u64, p.s as u64) as i64;
    let (r, s) = (p.r as u64, p.s as u64);
    let (omega, kappa) = (p.omega, p.kappa);
    Ok(BandedMatrix::from_fn(dim, [-jump, 0, jump], |i, j| {
        let (na_j, nb_j) = basis[j];
        let (na_i, nb_i) = basis[i];
        if i == j {
            omega * (r as f64 * na_j as f64 + s as f64 * nb_j as f64)
        } else if na_i == na_j + s && nb_j >= r && nb_i == nb_j - r {
            // a⁺ˢ bʳ
            kappa * raise_amp(na_j, s) * lower_amp(nb_j, r)
        } else if na_j >= s && na_i == na_j - s && nb_i == nb_j + r {
            // b⁺ʳ aˢ
            kappa * lower_amp(na_j, s) * raise_amp(nb_j, r)
        } else {
            0.0
        }
    }))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Diagonalize the same chain at a ladder of truncations.
pub fn convergence_study(
    expr: &OperatorExpression,
    chain: &ParityChain,
    n_max_list: &[u64],
) -> Result<Vec<SpectrumReport>, OracleError> {
    if n_max_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(OracleError::NonAscendingTruncations);
    }
    n_max_list
        .iter()
        .map(|&n_max| {
            let matrix = single_mode_matrix(expr, chain, n_max)?;
            let mut report = eig_general(&matrix)?;
            report.truncation = Truncation::NMax(n_max);
            Ok(report)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aim::{decompose_chains, ChainDecomposition};
    use crate::models::{
        anharmonic_hamiltonian, bistable_hamiltonian, AnharmonicParams, BistableParams, HalfInt,
    };

    fn chains_of(expr: &OperatorExpression) -> Vec<ParityChain> {
        match decompose_chains(&expr.to_recurrence().unwrap()).unwrap() {
            ChainDecomposition::Chains(c) => c,
            ChainDecomposition::Diagonal => panic!("diagonal"),
        }
    }

    #[test]
    fn diagonal_two_by_two() {
        let m = BandedMatrix::from_fn(2, [0], |i, _| (i + 1) as f64);
        let report = eig_general(&m).unwrap();
        assert_eq!(report.eigenvalues.len(), 2);
        assert!((report.eigenvalues[0].re - 1.0).abs() < 1e-14);
        assert!((report.eigenvalues[1].re - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rotation_generator_has_imaginary_pair() {
        let m = BandedMatrix::from_fn(2, [-1, 1], |i, j| if i < j { 1.0 } else { -1.0 });
        assert!(!m.symmetric_hint());
        let report = eig_general(&m).unwrap();
        let im: Vec<f64> = report.eigenvalues.iter().map(|z| z.im).collect();
        assert!((im[0] + 1.0).abs() < 1e-12);
        assert!((im[1] - 1.0).abs() < 1e-12);
        assert!(report.eigenvalues.iter().all(|z| z.re.abs() < 1e-12));
    }

    #[test]
    fn harmonic_even_chain_is_diagonal() {
        // diagonal Hamiltonian on the even chain, cut at n_max = 8
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        let harmonic = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.0 });
        let m = single_mode_matrix(&harmonic, &chain, 8).unwrap();
        let report = eig_general(&m).unwrap();
        let got = report.lowest_real(5, 1e-12);
        assert_eq!(got.len(), 5);
        for (k, v) in got.iter().enumerate() {
            assert!((v - (4 * k + 1) as f64).abs() < 1e-13);
        }
    }

    #[test]
    fn truncation_must_clear_the_seeds() {
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        assert_eq!(
            single_mode_matrix(&h, &chain, 4).unwrap_err(),
            OracleError::TruncationTooSmall { n_max: 4, min: 6 }
        );
    }

    #[test]
    fn anharmonic_ground_state() {
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        let m = single_mode_matrix(&h, &chain, 200).unwrap();
        assert!(m.symmetric_hint());
        let report = eig_general(&m).unwrap();
        assert!((report.lowest_real(1, 1e-10)[0] - 1.065286).abs() < 5e-7);
        assert!(report.residual_bound < 1e-12);
    }

    #[test]
    fn bistable_second_odd_level_with_kerr() {
        let h = bistable_hamiltonian(&BistableParams {
            omega: 1.0,
            kappa: 0.1,
            omega_nl: 0.5,
        });
        let odd = chains_of(&h)[1].clone();
        let m = single_mode_matrix(&h, &odd, 200).unwrap();
        assert!(!m.symmetric_hint());
        let report = eig_general(&m).unwrap();
        let low = report.lowest_real(2, 1e-8);
        assert!((low[1] - 6.0102248594).abs() < 1e-8, "{}", low[1]);
    }

    #[test]
    fn su2_block_closed_forms() {
        let model = Su2Model::new(HalfInt::from_int(3), 2, 1.0, 0.5).unwrap();
        let m = su2_matrix(&model);
        assert_eq!(m.dim(), 7);
        assert!(m.symmetric_hint());
        let report = eig_general(&m).unwrap();
        let s6 = 2.0 * 6.0_f64.sqrt();
        let s15 = 2.0 * 15.0_f64.sqrt();
        let mut expect = vec![
            12.0,
            9.0 - s6,
            9.0 + s6,
            12.0 - s15,
            12.0 + s15,
            15.0 - s6,
            15.0 + s6,
        ];
        expect.sort_by(f64::total_cmp);
        for (z, e) in report.eigenvalues.iter().zip(&expect) {
            assert!((z.re - e).abs() < 1e-10 && z.im == 0.0, "{z} vs {e}");
        }
    }

    #[test]
    fn two_mode_block_enumerates_conserved_basis() {
        let p = TwoModeParams {
            omega: 1.0,
            kappa: 0.5,
            r: 2,
            s: 1,
        };
        assert_eq!(two_mode_basis(&p, 2), vec![(0, 2), (1, 0)]);
    }

    #[test]
    fn two_mode_mixed_exchange_block() {
        // r=2, s=1, charge 2: basis {(0,2),(1,0)}; coupling element
        // ⟨(1,0)|a⁺b²|(0,2)⟩ = √1·√2, so eigenvalues are the 2x2
        // quadratic-formula pair around the diagonal {2ω, 2ω}.
        let p = TwoModeParams {
            omega: 1.0,
            kappa: 0.3,
            r: 2,
            s: 1,
        };
        let m = two_mode_block(&p, 2).unwrap();
        assert_eq!(m.dim(), 2);
        let report = eig_general(&m).unwrap();
        let c = 0.3 * 2.0_f64.sqrt();
        let expect = [2.0 - c, 2.0 + c];
        for (z, e) in report.eigenvalues.iter().zip(&expect) {
            assert!((z.re - e).abs() < 1e-12);
        }
    }

    #[test]
    fn two_mode_balanced_block_matches_closed_forms() {
        let p = TwoModeParams {
            omega: 1.0,
            kappa: 0.5,
            r: 2,
            s: 2,
        };
        // n_a + n_b = 6 block: charge 12
        let m = two_mode_block(&p, 12).unwrap();
        assert_eq!(m.dim(), 7);
        let report = eig_general(&m).unwrap();
        let s6 = 2.0 * 6.0_f64.sqrt();
        let s15 = 2.0 * 15.0_f64.sqrt();
        let mut expect = vec![
            12.0,
            9.0 - s6,
            9.0 + s6,
            12.0 - s15,
            12.0 + s15,
            15.0 - s6,
            15.0 + s6,
        ];
        expect.sort_by(f64::total_cmp);
        for (z, e) in report.eigenvalues.iter().zip(&expect) {
            assert!((z.re - e).abs() < 1e-10);
        }
    }

    #[test]
    fn balanced_single_exchange_matches_linear_family() {
        // r=s=1, n_a+n_b=2, kappa=0.3: levels 2 + 2(n-1)*0.3
        let p = TwoModeParams {
            omega: 1.0,
            kappa: 0.3,
            r: 1,
            s: 1,
        };
        let m = two_mode_block(&p, 2).unwrap();
        let report = eig_general(&m).unwrap();
        for (z, e) in report.eigenvalues.iter().zip(&[1.4, 2.0, 2.6]) {
            assert!((z.re - e).abs() < 1e-12, "{z} vs {e}");
        }
    }

    #[test]
    fn triple_exchange_annihilates_small_blocks() {
        // r=s=3 with only two bosons: the coupling needs three, so the
        // block is purely diagonal at 6*omega
        let p = TwoModeParams {
            omega: 1.5,
            kappa: 0.7,
            r: 3,
            s: 3,
        };
        let m = two_mode_block(&p, 6).unwrap();
        assert_eq!(m.dim(), 3);
        let report = eig_general(&m).unwrap();
        for z in &report.eigenvalues {
            assert!((z.re - 9.0).abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn harmonic_study_is_exact_at_every_truncation() {
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        let harmonic = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.0 });
        for report in convergence_study(&harmonic, &chain, &[8, 16, 32]).unwrap() {
            for (k, v) in report.lowest_real(4, 1e-14).iter().enumerate() {
                assert!((v - (4 * k + 1) as f64).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn empty_charge_block_is_reported() {
        let p = TwoModeParams {
            omega: 1.0,
            kappa: 0.5,
            r: 2,
            s: 2,
        };
        assert_eq!(
            two_mode_block(&p, 3).unwrap_err(),
            OracleError::EmptyBlock { charge: 3 }
        );
    }

    #[test]
    fn convergence_study_stabilizes() {
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        let reports = convergence_study(&h, &chain, &[50, 100, 200]).unwrap();
        let a = reports[1].lowest_real(1, 1e-10)[0];
        let b = reports[2].lowest_real(1, 1e-10)[0];
        assert!((a - b).abs() < 1e-10);
        assert_eq!(reports[2].truncation, Truncation::NMax(200));
    }

    #[test]
    fn convergence_study_rejects_unsorted_list() {
        let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
        let chain = chains_of(&h)[0].clone();
        assert_eq!(
            convergence_study(&h, &chain, &[100, 50]).unwrap_err(),
            OracleError::NonAscendingTruncations
        );
    }

    #[test]
    fn trace_equals_diagonal_band_sum() {
        let model = Su2Model::new(HalfInt::from_int(3), 2, 1.0, 0.5).unwrap();
        let m = su2_matrix(&model);
        assert!((m.trace() - 84.0).abs() < 1e-10);
        let dense = m.to_dense();
        assert!((dense.trace() - m.trace()).abs() < 1e-12);
    }
}
