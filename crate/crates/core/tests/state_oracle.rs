use fockbell_core::oracle::{self, SingleModeOperator, TruncatedTwoModeOperator};
use fockbell_core::spin::{chsh_spin, chsh_spin_matrix, spin_observable, GisinPeresAngles};
use fockbell_core::state::{family_up_to, partial_transpose_spectrum};
use fockbell_core::TwoModeFockSuperposition;
use proptest::prelude::*;

#[test]
fn partial_transpose_matches_dense_oracle() {
    for (n, m) in family_up_to(8) {
        for &phi in &[0.0, 0.9, 2.4] {
            let s = TwoModeFockSuperposition::new(n, m, phi).unwrap();
            let dense = oracle::partial_transpose_spectrum(&s);
            let closed = partial_transpose_spectrum();
            assert_eq!(dense.len(), 4, "N={n} m={m}");
            for (a, b) in dense.iter().zip(closed) {
                assert!((a - b).abs() < 1e-12);
            }
            assert!((oracle::log_negativity(&s) - s.log_negativity()).abs() < 1e-12);
        }
    }
}

#[test]
fn state_vector_is_normalized_and_rejects_small_truncation() {
    let s = TwoModeFockSuperposition::new(5, 2, 0.4).unwrap();
    let v = oracle::state_vector(&s, 6).unwrap();
    assert!((v.norm() - 1.0).abs() < 1e-15);
    assert!(oracle::state_vector(&s, 5).is_err());
}

#[test]
fn photon_number_difference_variance_gives_qfi() {
    // For a pure state the QFI of φ_s generated by (n_a - n_b)/2 is Var(n_a - n_b).
    for (n, m) in family_up_to(8) {
        let s = TwoModeFockSuperposition::new(n, m, 0.6).unwrap();
        let dim = n as usize + 1;
        let number = SingleModeOperator::embed(
            dim,
            &nalgebra::DMatrix::from_fn(dim, dim, |i, j| if i == j { i as f64 } else { 0.0 }),
        );
        let id = SingleModeOperator::identity(dim);
        let na = oracle::expectation(&TruncatedTwoModeOperator::kron(&number, &id, true), &s, dim)
            .unwrap()
            .re;
        let nb = oracle::expectation(&TruncatedTwoModeOperator::kron(&id, &number, true), &s, dim)
            .unwrap()
            .re;
        let sq = number.compose(&number);
        let na2 = oracle::expectation(&TruncatedTwoModeOperator::kron(&sq, &id, true), &s, dim)
            .unwrap()
            .re;
        let nb2 = oracle::expectation(&TruncatedTwoModeOperator::kron(&id, &sq, true), &s, dim)
            .unwrap()
            .re;
        let nanb = oracle::expectation(&TruncatedTwoModeOperator::kron(&number, &number, true), &s, dim)
            .unwrap()
            .re;
        let var = (na2 + nb2 - 2.0 * nanb) - (na - nb).powi(2);
        assert!((var - s.qfi()).abs() < 1e-10, "N={n} m={m}: {var}");
    }
}

#[test]
fn spin_correlator_matches_truncated_oracle() {
    let angles = GisinPeresAngles::new(0.4, 2.0, -0.7, 1.1);
    for (n, m) in family_up_to(6) {
        let s = TwoModeFockSuperposition::new(n, m, 0.25).unwrap();
        // pad the (N+1)-level observables into a larger truncation
        let dim = n as usize + 4;
        let corr = |x: f64, y: f64| {
            let a = SingleModeOperator::embed(dim, spin_observable(n, x).matrix());
            let b = SingleModeOperator::embed(dim, spin_observable(n, y).matrix());
            oracle::expectation(&TruncatedTwoModeOperator::kron(&a, &b, true), &s, dim)
                .unwrap()
                .re
        };
        let brute = corr(angles.a, angles.b) + corr(angles.a_alt, angles.b) + corr(angles.a, angles.b_alt)
            - corr(angles.a_alt, angles.b_alt);
        assert!((brute - chsh_spin(&s, &angles)).abs() < 1e-12);
        assert!((brute - chsh_spin_matrix(&s, &angles)).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spin_chsh_bounded_and_matrix_consistent(
        n in 1u32..9,
        frac in 0.0f64..1.0,
        phi in -3.0f64..3.0,
        a in -7.0f64..7.0, a2 in -7.0f64..7.0, b in -7.0f64..7.0, b2 in -7.0f64..7.0,
    ) {
        let m = (((n - 1) / 2) as f64 * frac).round() as u32;
        let s = TwoModeFockSuperposition::new(n, m, phi).unwrap();
        let g = GisinPeresAngles::new(a, a2, b, b2);
        let v = chsh_spin(&s, &g);
        prop_assert!(v.abs() <= 2.0 * std::f64::consts::SQRT_2 + 1e-12);
        prop_assert!((v - chsh_spin_matrix(&s, &g)).abs() < 1e-12);
    }
}
