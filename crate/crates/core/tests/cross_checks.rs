//! Agreement between the iteration engine and the dense-matrix oracle,
//! plus the matrix-level identities the two-mode reduction rests on.

use bosonaim::aim::{
    decompose_chains, solve_expression, solve_su2, AimOptions, ChainDecomposition, ParityChain,
};
use bosonaim::algebra::OperatorExpression;
use bosonaim::models::{
    anharmonic_hamiltonian, bistable_hamiltonian, AnharmonicParams, BistableParams, HalfInt,
    Su2Model, TwoModeParams,
};
use bosonaim::oracle::{
    convergence_study, eig_general, single_mode_matrix, su2_matrix, two_mode_block,
};

fn chains_of(expr: &OperatorExpression) -> Vec<ParityChain> {
    match decompose_chains(&expr.to_recurrence().unwrap()).unwrap() {
        ChainDecomposition::Chains(c) => c,
        ChainDecomposition::Diagonal => panic!("diagonal"),
    }
}

/// Lowest eigenvalues of a single-mode model, merged over its chains.
fn oracle_spectrum(expr: &OperatorExpression, n_max: u64, count: usize) -> Vec<f64> {
    let mut all = Vec::new();
    for chain in chains_of(expr) {
        let m = single_mode_matrix(expr, &chain, n_max).unwrap();
        let report = eig_general(&m).unwrap();
        all.extend(report.lowest_real(count, 1e-8));
    }
    all.sort_by(f64::total_cmp);
    all.truncate(count);
    all
}

#[test]
fn aim_matches_oracle_on_anharmonic() {
    let depth = 20;
    let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
    let aim = solve_expression(&h, &AimOptions::with_depth(depth)).unwrap();
    let take = depth / 4;
    let converged: Vec<f64> = aim
        .roots
        .iter()
        .filter(|r| r.converged)
        .map(|r| r.value)
        .take(take)
        .collect();
    assert_eq!(converged.len(), take);
    let oracle = oracle_spectrum(&h, 4 * depth as u64 * 2, take);
    for (a, o) in converged.iter().zip(&oracle) {
        assert!(
            (a - o).abs() <= 1e-6 * o.abs().max(1.0),
            "aim {a} vs oracle {o}"
        );
    }
}

#[test]
fn aim_matches_oracle_on_bistable_grid() {
    for (kappa, omega_nl) in [(0.1, 0.1), (0.1, 0.5), (0.5, 0.1)] {
        let h = bistable_hamiltonian(&BistableParams {
            omega: 1.0,
            kappa,
            omega_nl,
        });
        let depth = 20;
        let aim = solve_expression(&h, &AimOptions::with_depth(depth)).unwrap();
        let take = depth / 4;
        let converged: Vec<f64> = aim
            .roots
            .iter()
            .filter(|r| r.converged)
            .map(|r| r.value)
            .take(take)
            .collect();
        assert_eq!(converged.len(), take, "kappa={kappa} Omega={omega_nl}");
        let oracle = oracle_spectrum(&h, 4 * depth as u64 * 2, take);
        for (a, o) in converged.iter().zip(&oracle) {
            assert!(
                (a - o).abs() <= 1e-6 * o.abs().max(1.0),
                "kappa={kappa} Omega={omega_nl}: aim {a} vs oracle {o}"
            );
        }
    }
}

#[test]
fn finite_su2_chains_are_exact_against_block_diagonalization() {
    for (tj, s, kappa) in [(6, 2, 0.5), (6, 2, 0.1), (5, 1, 0.7), (7, 3, 0.4)] {
        let model = Su2Model::new(HalfInt::from_twice(tj), s, 1.0, kappa).unwrap();
        let options = AimOptions {
            root_interval: (-100.0, 100.0),
            ..AimOptions::default()
        };
        let aim = solve_su2(&model, &options).unwrap();
        assert_eq!(aim.len() as u64, model.dim());
        assert!(aim.all_converged());
        let report = eig_general(&su2_matrix(&model)).unwrap();
        for (root, z) in aim.roots.iter().zip(&report.eigenvalues) {
            assert!(z.im.abs() < 1e-10);
            assert!(
                (root.value - z.re).abs() < 1e-10 * z.re.abs().max(1.0),
                "2j={tj} s={s} kappa={kappa}: {} vs {}",
                root.value,
                z.re
            );
        }
    }
}

/// Termination polynomials of bounded chains carry the full chain:
/// their degree equals the chain length.
#[test]
fn finite_chain_termination_degree_equals_chain_length() {
    use bosonaim::aim::{iterate, CoefficientTable};
    let model = Su2Model::new(HalfInt::from_int(3), 2, 1.0, 0.5).unwrap();
    let rec = model.recurrence();
    let chains = match decompose_chains(&rec).unwrap() {
        ChainDecomposition::Chains(c) => c,
        _ => panic!(),
    };
    for chain in &chains {
        let table: CoefficientTable<f64> = iterate(&rec, chain, 4).unwrap();
        let poly = table.termination(0).unwrap();
        assert_eq!(poly.degree(), Some(chain.site_count().unwrap() as usize));
    }
}

#[test]
fn balanced_two_mode_block_equals_su2_chain_spectrum() {
    for (n_total, s, kappa) in [(6u64, 2u32, 0.5), (6, 2, 0.2), (4, 1, 0.3), (5, 1, 0.8)] {
        let p = TwoModeParams {
            omega: 1.0,
            kappa,
            r: s,
            s,
        };
        let block = two_mode_block(&p, s as u64 * n_total).unwrap();
        let block_eigs = eig_general(&block).unwrap();
        let model = p.to_su2(n_total).unwrap();
        let su2_eigs = eig_general(&su2_matrix(&model)).unwrap();
        assert_eq!(block_eigs.eigenvalues.len(), su2_eigs.eigenvalues.len());
        for (a, b) in block_eigs.eigenvalues.iter().zip(&su2_eigs.eigenvalues) {
            assert!(
                (a.re - b.re).abs() < 1e-10 * b.re.abs().max(1.0) && a.im.abs() < 1e-12,
                "N={n_total} s={s} kappa={kappa}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn hermitian_ground_state_is_variationally_monotone() {
    let h = anharmonic_hamiltonian(&AnharmonicParams { alpha: 0.1 });
    let chain = chains_of(&h)[0].clone();
    let reports = convergence_study(&h, &chain, &[30, 60, 120, 200]).unwrap();
    let grounds: Vec<f64> = reports
        .iter()
        .map(|r| r.lowest_real(1, 1e-10)[0])
        .collect();
    for w in grounds.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{grounds:?}");
    }
}

#[test]
fn oracle_is_truncation_stable_on_the_bistable_grid() {
    let h = bistable_hamiltonian(&BistableParams {
        omega: 1.0,
        kappa: 0.5,
        omega_nl: 0.1,
    });
    for chain in chains_of(&h) {
        let reports = convergence_study(&h, &chain, &[100, 200]).unwrap();
        let a = reports[0].lowest_real(3, 1e-8);
        let b = reports[1].lowest_real(3, 1e-8);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9 * y.abs().max(1.0));
        }
    }
}

/// The six levels each benchmark column reports stay real under
/// truncation at n_max = 200, for every bistable parameter set.
#[test]
fn bistable_reported_levels_are_real() {
    let sqrt3_2 = 3.0_f64.sqrt() / 2.0;
    for (kappa, omega_nl) in [(sqrt3_2, 0.0), (0.1, 0.1), (0.1, 0.5), (0.5, 0.1)] {
        let h = bistable_hamiltonian(&BistableParams {
            omega: 1.0,
            kappa,
            omega_nl,
        });
        let mut low: Vec<f64> = Vec::new();
        for chain in chains_of(&h) {
            let m = single_mode_matrix(&h, &chain, 200).unwrap();
            let report = eig_general(&m).unwrap();
            // count how many leading eigenvalues are real before any
            // complex truncation artifact shows up
            let mut leading_real = 0;
            for z in &report.eigenvalues {
                if z.im.abs() < 1e-8 {
                    leading_real += 1;
                } else {
                    break;
                }
                if leading_real == 3 {
                    break;
                }
            }
            assert!(
                leading_real >= 3,
                "kappa={kappa} Omega={omega_nl}: fewer than 3 leading real eigenvalues"
            );
            low.extend(report.lowest_real(3, 1e-8));
        }
        low.sort_by(f64::total_cmp);
        assert!(low.len() >= 6);
    }
}

/// Builds dense two-mode operators on the product basis n_a, n_b < dim.
struct TwoMode {
    dim: usize,
}

impl TwoMode {
    fn idx(&self, na: usize, nb: usize) -> usize {
        na * self.dim + nb
    }

    fn zeros(&self) -> Vec<Vec<f64>> {
        vec![vec![0.0; self.dim * self.dim]; self.dim * self.dim]
    }

    /// Matrix of a⁺^p a^q ⊗ b⁺^r b^s style monomials via their action.
    fn op(&self, f: impl Fn(usize, usize) -> Option<(f64, usize, usize)>) -> Vec<Vec<f64>> {
        let mut m = self.zeros();
        for na in 0..self.dim {
            for nb in 0..self.dim {
                if let Some((amp, ta, tb)) = f(na, nb) {
                    if ta < self.dim && tb < self.dim {
                        m[self.idx(ta, tb)][self.idx(na, nb)] += amp;
                    }
                }
            }
        }
        m
    }
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

fn matsub(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, &x| m.max(x.abs()))
}

#[test]
fn schwinger_realization_closes_su2_and_casimir() {
    // all states with n_a + n_b <= 6 live inside the dim-7 product box,
    // and J± preserve the total, so no truncation leaks in
    let tm = TwoMode { dim: 7 };
    let jp = tm.op(|na, nb| {
        (nb >= 1).then(|| (((na + 1) as f64 * nb as f64).sqrt(), na + 1, nb - 1))
    });
    let jm = tm.op(|na, nb| {
        (na >= 1).then(|| ((na as f64 * (nb + 1) as f64).sqrt(), na - 1, nb + 1))
    });
    let j0 = tm.op(|na, nb| Some((0.5 * (na as f64 - nb as f64), na, nb)));
    let ntot = tm.op(|na, nb| Some(((na + nb) as f64, na, nb)));

    let in_simplex: Vec<usize> = (0..7 * 7)
        .filter(|&i| (i / 7) + (i % 7) <= 6)
        .collect();
    let check = |m: &[Vec<f64>], name: &str| {
        for &i in &in_simplex {
            for &j in &in_simplex {
                assert!(m[i][j].abs() < 1e-12, "{name} at ({i},{j}): {}", m[i][j]);
            }
        }
    };

    // [J+, J-] = 2 J0
    let comm = matsub(&matmul(&jp, &jm), &matmul(&jm, &jp));
    let two_j0: Vec<Vec<f64>> = j0.iter().map(|r| r.iter().map(|x| 2.0 * x).collect()).collect();
    check(&matsub(&comm, &two_j0), "[J+,J-] - 2J0");

    // [J0, J±] = ±J±
    let c_plus = matsub(&matmul(&j0, &jp), &matmul(&jp, &j0));
    check(&matsub(&c_plus, &jp), "[J0,J+] - J+");
    let c_minus = matsub(&matmul(&j0, &jm), &matmul(&jm, &j0));
    let neg_jm: Vec<Vec<f64>> = jm.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    check(&matsub(&c_minus, &neg_jm), "[J0,J-] + J-");

    // Casimir: J- J+ + J0 (J0 + 1) = N (N + 2) / 4
    let jmjp = matmul(&jm, &jp);
    let j0j0 = matmul(&j0, &j0);
    let lhs: Vec<Vec<f64>> = jmjp
        .iter()
        .zip(&j0j0)
        .zip(&j0)
        .map(|((ra, rb), rc)| {
            ra.iter()
                .zip(rb)
                .zip(rc)
                .map(|((x, y), z)| x + y + z)
                .collect()
        })
        .collect();
    let nn = matmul(&ntot, &ntot);
    let rhs: Vec<Vec<f64>> = nn
        .iter()
        .zip(&ntot)
        .map(|(ra, rb)| {
            ra.iter()
                .zip(rb)
                .map(|(x, y)| 0.25 * (x + 2.0 * y))
                .collect()
        })
        .collect();
    check(&matsub(&lhs, &rhs), "Casimir - N(N+2)/4");
}

/// The coupling preserves r·n_a + s·n_b: verified by a brute-force
/// commutator of H with the charge operator on a truncated basis.
#[test]
fn two_mode_charge_is_conserved() {
    for (r, s) in [(2u32, 2u32), (2, 1), (3, 2)] {
        let tm = TwoMode { dim: 8 };
        let (rf, sf) = (r as usize, s as usize);
        let coupling_up = tm.op(|na, nb| {
            if nb < rf {
                return None;
            }
            // a⁺ˢ bʳ
            let mut amp = 1.0;
            for k in 0..sf {
                amp *= ((na + 1 + k) as f64).sqrt();
            }
            for k in 0..rf {
                amp *= ((nb - k) as f64).sqrt();
            }
            Some((amp, na + sf, nb - rf))
        });
        let coupling_dn = tm.op(|na, nb| {
            if na < sf {
                return None;
            }
            let mut amp = 1.0;
            for k in 0..sf {
                amp *= ((na - k) as f64).sqrt();
            }
            for k in 0..rf {
                amp *= ((nb + 1 + k) as f64).sqrt();
            }
            Some((amp, na - sf, nb + rf))
        });
        let diag = tm.op(|na, nb| {
            Some((r as f64 * na as f64 + s as f64 * nb as f64, na, nb))
        });
        let h: Vec<Vec<f64>> = diag
            .iter()
            .zip(&coupling_up)
            .zip(&coupling_dn)
            .map(|((rd, ru), rl)| {
                rd.iter()
                    .zip(ru)
                    .zip(rl)
                    .map(|((x, y), z)| x + 0.7 * (y + z))
                    .collect()
            })
            .collect();
        let charge = tm.op(|na, nb| {
            Some((r as f64 * na as f64 + s as f64 * nb as f64, na, nb))
        });
        let comm = matsub(&matmul(&h, &charge), &matmul(&charge, &h));
        assert!(
            max_abs(&comm) < 1e-10,
            "charge not conserved for r={r} s={s}: {}",
            max_abs(&comm)
        );
    }
}
