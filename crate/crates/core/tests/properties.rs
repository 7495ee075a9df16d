use std::f64::consts::{PI, TAU};

use approx::assert_abs_diff_eq;
use nalgebra::Matrix3;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinsqueeze_core::entanglement::{perp_eigenvalues, witness};
use spinsqueeze_core::operators::{
    apply_local_unitaries, collective_moment, complete_frame, mean_spin, mean_spin_direction, su2_to_so3,
};
use spinsqueeze_core::random::{
    haar_pure_state, haar_qubit_unitary, haar_spinor, random_local_unitary, random_mixed_state,
    random_symmetric_matrix3, random_symmetric_state,
};
use spinsqueeze_core::squeezing::{
    brute_force_min_variance, perpendicular_minimum, xi_standard, xi_tilde_general, xi_tilde_symmetric,
};
use spinsqueeze_core::states::{coherent_spin_state, embed_symmetric, product_state, random_separable_state};
use spinsqueeze_core::{Direction, QubitMoments, C64};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_map_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (u, v) = (haar_qubit_unitary(&mut r), haar_qubit_unitary(&mut r));
        let lhs = su2_to_so3(&(u * v)).unwrap();
        let rhs = su2_to_so3(&u).unwrap() * su2_to_so3(&v).unwrap();
        prop_assert!((lhs - rhs).abs().max() < 1e-12);
        prop_assert!((lhs.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bloch_and_pair_statistics_rotate_covariantly(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let rho = random_mixed_state(n, 2, &mut r).unwrap();
        let u = random_local_unitary(n, &mut r);
        let rot = u.rotations();
        let moved = apply_local_unitaries(&rho, &u).unwrap();
        for (q, r) in rot.iter().enumerate() {
            let expected = r * rho.bloch_vector(q).unwrap();
            prop_assert!((moved.bloch_vector(q).unwrap() - expected).norm() < 1e-12);
        }
        let expected = rot[0] * rho.pair_correlation(0, n - 1).unwrap() * rot[n - 1].transpose();
        prop_assert!((moved.pair_correlation(0, n - 1).unwrap() - expected).abs().max() < 1e-12);
    }

    #[test]
    fn perpendicular_variances_obey_the_uncertainty_relation(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let psi = haar_pure_state(n, &mut r).unwrap();
        let Ok(n0) = mean_spin_direction(&psi) else { return Ok(()) };
        let m = collective_moment(&psi, &vec![complete_frame(&n0); n]).unwrap();
        let j = mean_spin(&psi).unwrap().norm();
        // ΔA² ΔB² ≥ ¼ |⟨[A, B]⟩|² with [J⊥, J'⊥] = i J0
        prop_assert!(m.var_perp[(0, 0)] * m.var_perp[(1, 1)] >= 0.25 * j * j - 1e-12);
    }

    #[test]
    fn standard_parameters_are_consistent(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let rho = random_mixed_state(n, r.random_range(1..4), &mut r).unwrap();
        let res = xi_standard(&rho).unwrap();
        if let (Some(x1), Some(x2)) = (res.xi1, res.xi2) {
            prop_assert!(res.min_variance.unwrap() >= 0.0);
            assert_abs_diff_eq!(x2, n as f64 * x1 / (2.0 * res.mean_j0), epsilon = 1e-10);
            prop_assert!(x2 >= x1 - 1e-12);
        }
    }

    #[test]
    fn tilde_parameters_are_consistent(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let rho = random_mixed_state(n, r.random_range(1..4), &mut r).unwrap();
        let res = xi_tilde_general(&rho).unwrap();
        if let (Some(x1), Some(x2)) = (res.xi1_tilde, res.xi2_tilde) {
            prop_assert!(res.min_variance.unwrap() >= 0.0);
            assert_abs_diff_eq!(x2, n as f64 * x1 / (2.0 * res.mean_j0), epsilon = 1e-10);
        }
    }

    #[test]
    fn closed_form_minimum_lower_bounds_every_direction(seed in any::<u64>(), angle in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let m = random_symmetric_matrix3(&mut r);
        let n0 = Direction::normalize(nalgebra::Vector3::from_fn(|_, _| r.random_range(-1.0..1.0))).unwrap();
        let min = perpendicular_minimum(&m, &n0);
        let v = complete_frame(&n0).perp_direction(angle);
        prop_assert!(min.value <= v.dot(&(m * v)) + 1e-12);
        let d = min.direction.as_vector();
        assert_abs_diff_eq!(d.dot(&(m * d)), min.value, epsilon = 1e-12);
    }

    #[test]
    fn general_path_reduces_to_symmetric_closed_form(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng(seed);
        let s = random_symmetric_state(n, &mut r).unwrap();
        let a = xi_tilde_symmetric(&s).unwrap();
        let b = xi_tilde_general(&embed_symmetric(&s).unwrap()).unwrap();
        assert_abs_diff_eq!(a.xi1_tilde.unwrap(), b.xi1_tilde.unwrap(), epsilon = 1e-9);
        assert_abs_diff_eq!(a.xi2_tilde.unwrap(), b.xi2_tilde.unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn independent_angles_do_no_worse_than_a_common_direction(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let s = random_symmetric_state(n, &mut r).unwrap();
        let closed = xi_tilde_symmetric(&s).unwrap().min_variance.unwrap();
        let n0 = Direction::normalize(s.bloch_vector(0).unwrap()).unwrap();
        let brute = brute_force_min_variance(&s, &vec![n0; n], 64).unwrap();
        prop_assert!(brute >= 0.0);
        prop_assert!(brute <= closed + 1e-9, "brute {} closed {}", brute, closed);
    }

    #[test]
    fn embedded_coherent_state_is_a_tensor_power(n in 1usize..7, theta in 0.0f64..PI, phi in 0.0f64..TAU) {
        let css = embed_symmetric(&coherent_spin_state(n, theta, phi).unwrap()).unwrap();
        let spinor = [
            C64::from_polar((theta / 2.0).sin(), phi),
            C64::new((theta / 2.0).cos(), 0.0),
        ];
        let product = product_state(&vec![spinor; n]).unwrap();
        prop_assert!(css.approx_eq_up_to_phase(&product, 1e-12));
    }

    #[test]
    fn symmetric_pair_matrix_has_unit_trace(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let s = random_symmetric_state(n, &mut r).unwrap();
        let t: Matrix3<f64> = s.pair_correlation(0, 1).unwrap();
        assert_abs_diff_eq!(t.trace(), 1.0, epsilon = 1e-10);
        prop_assert!(perp_eigenvalues(&s).unwrap().0 >= -1e-10);
    }

    #[test]
    fn separable_states_are_never_flagged(seed in any::<u64>(), n in 2usize..5, terms in 1usize..9) {
        let rho = random_separable_state(n, terms, seed).unwrap();
        let report = witness(&rho).unwrap();
        prop_assert!(!report.is_entangled(), "{:?}", report);
    }

    #[test]
    fn pure_product_states_sit_on_the_bound(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let spinors: Vec<_> = (0..n).map(|_| haar_spinor(&mut r)).collect();
        let psi = product_state(&spinors).unwrap();
        let res = xi_tilde_general(&psi).unwrap();
        assert_abs_diff_eq!(res.xi1_tilde.unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(res.xi2_tilde.unwrap(), 1.0, epsilon = 1e-10);
    }
}
