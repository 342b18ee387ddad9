use proptest::prelude::*;
use qfibounds_core::bounds::{continuity_suite, unitary_sld_bound, Variant};
use qfibounds_core::entanglement::{eg_brute, eg_pure};
use qfibounds_core::fisher::{sld_integral_default, sld_residual, sld_spectral, DEFAULT_CUTOFF};
use qfibounds_core::linalg::{dagger, exp_identity_residual, herm_exp, kron, schatten_norm, svd, CMatrix};
use qfibounds_core::seed::rng_from_seed;
use qfibounds_core::states::{ginibre_with_rng, gue_with_rng, haar_vector, random_matrix, tangent_with_rng, DensityMatrix};
use qfibounds_core::{CVector, TangentState};

fn unitary(dim: usize, seed: u64) -> CMatrix {
    svd(&random_matrix(dim, dim, &mut rng_from_seed(seed))).polar_factor()
}

fn tangent(dim: usize, floor: f64, seed: u64) -> TangentState {
    let mut rng = rng_from_seed(seed);
    let rho = ginibre_with_rng(dim, dim, &mut rng).unwrap().with_eigenvalue_floor(floor).unwrap();
    tangent_with_rng(&rho, 1.0, &mut rng).unwrap()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_preserves_schatten_norms(seed in any::<u64>(), rows in 1usize..6, cols in 1usize..6, p in 1.0f64..6.0) {
        let a = random_matrix(rows, cols, &mut rng_from_seed(seed));
        let ad = dagger(&a);
        for q in [1.0, p, f64::INFINITY] {
            let (x, y) = (schatten_norm(&a, q).unwrap(), schatten_norm(&ad, q).unwrap());
            prop_assert!(close(x, y, 1e-12), "p={q}: {x} vs {y}");
        }
    }

    #[test]
    fn schatten_norms_decrease_in_p(seed in any::<u64>(), dim in 1usize..7, p in 1.0f64..4.0, dq in 0.0f64..4.0) {
        let a = random_matrix(dim, dim, &mut rng_from_seed(seed));
        let np = schatten_norm(&a, p).unwrap();
        prop_assert!(schatten_norm(&a, p + dq).unwrap() <= np + 1e-10);
        prop_assert!(schatten_norm(&a, f64::INFINITY).unwrap() <= np + 1e-10);
    }

    #[test]
    fn decaying_exponential_norm(seed in any::<u64>(), dim in 1usize..7, s in 0.0f64..20.0, tau in 0.0f64..1.0) {
        let rho = ginibre_with_rng(dim, dim, &mut rng_from_seed(seed)).unwrap();
        let e = herm_exp(rho.op(), -s * tau);
        let want = (-s * tau * rho.lambda_min()).exp();
        prop_assert!(close(e.operator_norm(), want, 1e-12));
    }

    #[test]
    fn exp_identity_converges(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let (a, b) = (gue_with_rng(4, &mut rng), gue_with_rng(4, &mut rng));
        prop_assert!(exp_identity_residual(&a, &b, 64).unwrap() <= 1e-8);
    }

    #[test]
    fn sld_solvers_agree(seed in any::<u64>(), dim in 2usize..7) {
        let t = tangent(dim, 0.02, seed);
        let spec = sld_spectral(&t, DEFAULT_CUTOFF).unwrap().sld;
        let int = sld_integral_default(&t).unwrap().sld;
        prop_assert!(sld_residual(&t, &spec) <= 1e-9 * dim as f64);
        prop_assert!((&spec - &int).operator_norm() <= 1e-7);
    }

    #[test]
    fn continuity_reports_are_unitarily_invariant(seed in any::<u64>(), dim in 2usize..5) {
        let (t_rho, t_sigma) = (tangent(dim, 0.05, seed), tangent(dim, 0.05, seed ^ 0x5a5a));
        let u = unitary(dim, seed.wrapping_add(1));
        let base = continuity_suite(&t_rho, &t_sigma).unwrap();
        let moved = continuity_suite(&t_rho.conjugate(&u).unwrap(), &t_sigma.conjugate(&u).unwrap()).unwrap();
        for (a, b) in base.iter().zip(&moved) {
            prop_assert_eq!(a.bound_id, b.bound_id);
            prop_assert!(a.satisfied && b.satisfied);
            prop_assert!(close(a.rhs, b.rhs, 1e-8), "{}: {} vs {}", a.bound_id, a.rhs, b.rhs);
            prop_assert!(close(a.lhs, b.lhs, 1e-7), "{}: {} vs {}", a.bound_id, a.lhs, b.lhs);
        }
    }

    #[test]
    fn unitary_family_bounds_hold(seed in any::<u64>(), dim in 2usize..5, x in 0.0f64..2.0) {
        let mut rng = rng_from_seed(seed);
        let rho = ginibre_with_rng(dim, dim, &mut rng).unwrap().with_eigenvalue_floor(0.05).unwrap();
        let sigma = ginibre_with_rng(dim, dim, &mut rng).unwrap().with_eigenvalue_floor(0.05).unwrap();
        let h = gue_with_rng(dim, &mut rng);
        for v in [Variant::Tight, Variant::Loose] {
            prop_assert!(unitary_sld_bound(&rho, &sigma, &h, x, v).unwrap().satisfied);
        }
    }

    #[test]
    fn eg_is_local_unitary_invariant(seed in any::<u64>()) {
        let psi = haar_vector(8, &mut rng_from_seed(seed));
        let u = kron(&kron(&unitary(2, seed ^ 1), &unitary(2, seed ^ 2)), &unitary(2, seed ^ 3));
        let moved: CVector = &u * &psi;
        let a = eg_pure(&psi, 3, 2, 16, 7).unwrap().eg;
        let b = eg_pure(&moved, 3, 2, 16, 7).unwrap().eg;
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }

    #[test]
    fn two_qubit_eg_matches_schmidt_and_grid(seed in any::<u64>()) {
        let psi = haar_vector(4, &mut rng_from_seed(seed));
        let m = CMatrix::from_fn(2, 2, |i, j| psi[2 * i + j]);
        let s = svd(&m).s[0];
        let eg = eg_pure(&psi, 2, 2, 8, seed).unwrap().eg;
        prop_assert!((eg - (1.0 - s * s)).abs() <= 1e-10);
        let grid = eg_brute(&psi, 40).unwrap();
        prop_assert!(eg <= grid + 1e-12);
        prop_assert!(grid - eg <= 0.01);
    }
}

#[test]
fn pure_state_density_is_rank_one() {
    let psi = haar_vector(5, &mut rng_from_seed(3));
    let rho = DensityMatrix::pure(&psi).unwrap();
    assert!((rho.purity() - 1.0).abs() < 1e-12);
    assert!(rho.lambda_min().abs() < 1e-12);
}
