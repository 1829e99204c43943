use fockbell_core::balanced::{joint_quadrature_pdf, position_wavefunction, BalancedModel, QuadratureSettings};
use fockbell_core::oracle::{numeric_quadrature, Interval, Region};
use fockbell_core::TwoModeFockSuperposition;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn quad(s: &TwoModeFockSuperposition, ta: f64, tb: f64, region: Region) -> f64 {
    let f = |x1: f64, x2: f64| joint_quadrature_pdf(s, ta, tb, x1, x2);
    let est = numeric_quadrature(&f, region, 1e-11).unwrap();
    est.value
}

const PP: Region = Region {
    x1: Interval::POSITIVE,
    x2: Interval::POSITIVE,
};

#[test]
fn pdf_normalizes_numerically() {
    for (n, m) in [(1, 0), (3, 1), (4, 0), (6, 2)] {
        let s = TwoModeFockSuperposition::new(n, m, 0.3).unwrap();
        let total = quad(
            &s,
            0.4,
            -1.1,
            Region {
                x1: Interval::REAL_LINE,
                x2: Interval::REAL_LINE,
            },
        );
        assert!((total - 1.0).abs() < 1e-8, "N={n} m={m}: {total}");
    }
}

#[test]
fn pdf_matches_wavefunction_superposition() {
    let s = TwoModeFockSuperposition::new(5, 1, 0.7).unwrap();
    let (ta, tb) = (0.2, 1.3);
    for &(x1, x2) in &[(0.1, -0.4), (1.2, 0.9), (-2.0, 0.3)] {
        let (up, lo) = (4, 1);
        let a = position_wavefunction(up, x1, ta).unwrap() * position_wavefunction(lo, x2, tb).unwrap();
        let b = position_wavefunction(lo, x1, ta).unwrap()
            * position_wavefunction(up, x2, tb).unwrap()
            * Complex64::from_polar(1.0, s.branch_phase());
        let psi = (a + b) / 2f64.sqrt();
        let pdf = joint_quadrature_pdf(&s, ta, tb, x1, x2);
        assert!((psi.norm_sqr() - pdf).abs() < 1e-13);
    }
}

#[test]
fn analytic_bins_match_numeric_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let family = fockbell_core::state::family_up_to(6);
    for i in 0..20 {
        let (n, m) = family[i % family.len()];
        let s = TwoModeFockSuperposition::new(n, m, rng.random_range(0.0..TAU)).unwrap();
        let ta = rng.random_range(0.0..TAU);
        let tb = rng.random_range(0.0..TAU);
        let model = BalancedModel::new(&s).unwrap();
        let bins = model.binned_probabilities(ta, tb);
        let p11 = quad(&s, ta, tb, PP);
        let p10 = quad(
            &s,
            ta,
            tb,
            Region {
                x1: Interval::POSITIVE,
                x2: Interval::NEGATIVE,
            },
        );
        assert!((bins.p11 - p11).abs() < 1e-8, "N={n} m={m}: {} vs {p11}", bins.p11);
        assert!((bins.p10 - p10).abs() < 1e-8, "N={n} m={m}: {} vs {p10}", bins.p10);
    }
}

#[test]
fn single_photon_sign_correlation_by_quadrature() {
    let s = TwoModeFockSuperposition::new(1, 0, 0.0).unwrap();
    let theta = 0.9;
    let model = BalancedModel::new(&s).unwrap();
    let analytic = model.sign_correlation(theta, 0.0);
    let p11 = quad(&s, theta, 0.0, PP);
    let p00 = quad(
        &s,
        theta,
        0.0,
        Region {
            x1: Interval::NEGATIVE,
            x2: Interval::NEGATIVE,
        },
    );
    // Marginals are 1/2, so E = 4 P11 - 1 and P11 = P00.
    assert!((p11 - p00).abs() < 1e-9);
    assert!((analytic - (4.0 * p11 - 1.0)).abs() < 1e-8);
    // E = (2/π) cos θ for one photon
    assert!((analytic - 2.0 / std::f64::consts::PI * theta.cos()).abs() < 1e-12);
}

#[test]
fn functionals_are_covariant_under_common_local_oscillator_shift() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (n, m) in fockbell_core::state::family_up_to(9) {
        let s = TwoModeFockSuperposition::new(n, m, 0.0).unwrap();
        let model = BalancedModel::new(&s).unwrap();
        let p: Vec<f64> = (0..4).map(|_| rng.random_range(0.0..TAU)).collect();
        let c = rng.random_range(0.0..TAU);
        let base = QuadratureSettings::from_slice(&p);
        let shifted = QuadratureSettings::new(p[0] + c, p[1] + c, p[2] + c, p[3] + c);
        assert!((model.ch(&base) - model.ch(&shifted)).abs() < 1e-12);
        assert!((model.chsh(&base) - model.chsh(&shifted)).abs() < 1e-12);
    }
}
