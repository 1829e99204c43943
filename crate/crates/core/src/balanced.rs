//! Balanced-homodyne Bell tests with sign-binned quadrature outcomes.
//!
//! For the `(N-m)::m` state the joint quadrature density is
//!
//! ```text
//! P(x1, x2) = e^{-(x1²+x2²)} / (2π 2^N (N-m)! m!)
//!           · |e^{-iΦ1} H_{N-m}(x1) H_m(x2) + e^{-iΦ2} H_m(x1) H_{N-m}(x2)|²
//! ```
//!
//! with `Φ1 = (N-m)θ_a + mθ_b` and `Φ2 = mθ_a + (N-m)θ_b - (N-2m)φ_s`. Expanding the
//! modulus gives three separable terms, each a product of a polynomial in `x1`
//! and a polynomial in `x2` against `e^{-x²}`. Integrating those over half or
//! full lines is an exact finite sum over Gaussian moments, which is what
//! [`BalancedModel`] precomputes.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::special::{hermite_coefficients, hermite_unchecked, ln_factorial, SpecialFunctionError};
use crate::state::TwoModeFockSuperposition;

/// Local-oscillator phases for the two settings on each mode, reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub theta_a: f64,
    pub theta_a_alt: f64,
    pub theta_b: f64,
    pub theta_b_alt: f64,
}

impl QuadratureSettings {
    pub fn new(theta_a: f64, theta_a_alt: f64, theta_b: f64, theta_b_alt: f64) -> Self {
        Self {
            theta_a: theta_a.rem_euclid(TAU),
            theta_a_alt: theta_a_alt.rem_euclid(TAU),
            theta_b: theta_b.rem_euclid(TAU),
            theta_b_alt: theta_b_alt.rem_euclid(TAU),
        }
    }

    /// `[θ_a, θ_a', θ_b, θ_b']`, the optimizer's parameter layout.
    pub fn from_slice(p: &[f64]) -> Self {
        Self::new(p[0], p[1], p[2], p[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.theta_a, self.theta_a_alt, self.theta_b, self.theta_b_alt]
    }
}

/// Sign-binned joint and marginal probabilities; bin "1" is `x >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinnedProbabilities {
    pub p11: f64,
    pub p10: f64,
    pub p01: f64,
    pub p00: f64,
    pub p1a: f64,
    pub p1b: f64,
}

impl BinnedProbabilities {
    /// `p11 + p00 - p10 - p01`.
    pub fn sign_correlation(&self) -> f64 {
        self.p11 + self.p00 - self.p10 - self.p01
    }
}

/// `⟨x|n⟩` for the quadrature at local-oscillator phase `lo_phase`.
pub fn position_wavefunction(n: usize, x: f64, lo_phase: f64) -> Result<Complex64, SpecialFunctionError> {
    let h = crate::special::hermite(n, x)?;
    let log_norm = -0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n as u32) + 0.5 * PI.ln());
    let magnitude = log_norm.exp() * (-0.5 * x * x).exp() * h;
    Ok(Complex64::from_polar(1.0, -(n as f64) * lo_phase) * magnitude)
}

/// Joint density of quadrature outcomes `(x1, x2)` at phases `(θ_a, θ_b)`.
pub fn joint_quadrature_pdf(state: &TwoModeFockSuperposition, theta_a: f64, theta_b: f64, x1: f64, x2: f64) -> f64 {
    let n = state.total_photons() as usize;
    let up = state.upper_occupancy() as usize;
    let lo = state.lower_occupancy() as usize;
    let k = state.difference() as f64;
    let phase1 = -(up as f64 * theta_a + lo as f64 * theta_b);
    let phase2 = -(lo as f64 * theta_a + up as f64 * theta_b - k * state.relative_phase());
    let t1 = Complex64::from_polar(1.0, phase1) * (hermite_unchecked(up, x1) * hermite_unchecked(lo, x2));
    let t2 = Complex64::from_polar(1.0, phase2) * (hermite_unchecked(lo, x1) * hermite_unchecked(up, x2));
    let log_pref =
        -(2.0 * PI).ln() - n as f64 * std::f64::consts::LN_2 - ln_factorial(up as u32) - ln_factorial(lo as u32);
    (log_pref - x1 * x1 - x2 * x2).exp() * (t1 + t2).norm_sqr()
}

/// Integration range for one quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Range {
    Positive,
    Negative,
    Full,
}

/// `∫_R H_a H_b e^{-x²}` for the three ranges.
#[derive(Debug, Clone, Copy)]
struct RangeIntegrals {
    positive: f64,
    negative: f64,
    full: f64,
}

impl RangeIntegrals {
    fn compute(a: usize, b: usize) -> Result<Self, SpecialFunctionError> {
        let p = hermite_coefficients(a)?.mul(&hermite_coefficients(b)?);
        Ok(Self {
            positive: p.half_range_gaussian_integral()?,
            negative: p.negative_half_range_gaussian_integral()?,
            full: p.full_range_gaussian_integral()?,
        })
    }

    fn get(&self, r: Range) -> f64 {
        match r {
            Range::Positive => self.positive,
            Range::Negative => self.negative,
            Range::Full => self.full,
        }
    }
}

/// Precomputed analytic integrals for one state; cheap to evaluate repeatedly.
#[derive(Debug, Clone)]
pub struct BalancedModel {
    state: TwoModeFockSuperposition,
    prefactor: f64,
    // ∫ H_{N-m}², ∫ H_m², ∫ H_{N-m} H_m over each range
    upper_sq: RangeIntegrals,
    lower_sq: RangeIntegrals,
    cross: RangeIntegrals,
}

impl BalancedModel {
    pub fn new(state: &TwoModeFockSuperposition) -> Result<Self, SpecialFunctionError> {
        let up = state.upper_occupancy() as usize;
        let lo = state.lower_occupancy() as usize;
        let prefactor = (-(2.0 * PI).ln()
            - state.total_photons() as f64 * std::f64::consts::LN_2
            - ln_factorial(up as u32)
            - ln_factorial(lo as u32))
        .exp();
        Ok(Self {
            state: *state,
            prefactor,
            upper_sq: RangeIntegrals::compute(up, up)?,
            lower_sq: RangeIntegrals::compute(lo, lo)?,
            cross: RangeIntegrals::compute(up, lo)?,
        })
    }

    pub fn state(&self) -> &TwoModeFockSuperposition {
        &self.state
    }

    /// Phase difference between the two interfering branches, `(N-2m)(θ_a - θ_b + φ_s)`.
    fn interference_phase(&self, theta_a: f64, theta_b: f64) -> f64 {
        self.state.difference() as f64 * (theta_a - theta_b + self.state.relative_phase())
    }

    fn region(&self, r1: Range, r2: Range, cos_phase: f64) -> f64 {
        let direct = self.upper_sq.get(r1) * self.lower_sq.get(r2) + self.lower_sq.get(r1) * self.upper_sq.get(r2);
        let interference = 2.0 * cos_phase * self.cross.get(r1) * self.cross.get(r2);
        self.prefactor * (direct + interference)
    }

    /// Total probability over the plane; one up to rounding.
    pub fn normalization(&self) -> f64 {
        self.region(Range::Full, Range::Full, 1.0)
    }

    pub fn binned_probabilities(&self, theta_a: f64, theta_b: f64) -> BinnedProbabilities {
        let c = self.interference_phase(theta_a, theta_b).cos();
        BinnedProbabilities {
            p11: self.region(Range::Positive, Range::Positive, c),
            p10: self.region(Range::Positive, Range::Negative, c),
            p01: self.region(Range::Negative, Range::Positive, c),
            p00: self.region(Range::Negative, Range::Negative, c),
            p1a: self.region(Range::Positive, Range::Full, c),
            p1b: self.region(Range::Full, Range::Positive, c),
        }
    }

    pub fn p11(&self, theta_a: f64, theta_b: f64) -> f64 {
        let c = self.interference_phase(theta_a, theta_b).cos();
        self.region(Range::Positive, Range::Positive, c)
    }

    pub fn sign_correlation(&self, theta_a: f64, theta_b: f64) -> f64 {
        self.binned_probabilities(theta_a, theta_b).sign_correlation()
    }

    /// `P11(θ,φ) - P11(θ,φ') + P11(θ',φ) + P11(θ',φ') - P1a(θ') - P1b(φ)`.
    pub fn ch(&self, s: &QuadratureSettings) -> f64 {
        // The marginals do not depend on the opposite mode's phase.
        let p1a = self.binned_probabilities(s.theta_a_alt, s.theta_b).p1a;
        let p1b = self.binned_probabilities(s.theta_a, s.theta_b).p1b;
        self.p11(s.theta_a, s.theta_b) - self.p11(s.theta_a, s.theta_b_alt)
            + self.p11(s.theta_a_alt, s.theta_b)
            + self.p11(s.theta_a_alt, s.theta_b_alt)
            - p1a
            - p1b
    }

    /// `E(θ,φ) + E(θ',φ) + E(θ,φ') - E(θ',φ')`.
    pub fn chsh(&self, s: &QuadratureSettings) -> f64 {
        self.sign_correlation(s.theta_a, s.theta_b)
            + self.sign_correlation(s.theta_a_alt, s.theta_b)
            + self.sign_correlation(s.theta_a, s.theta_b_alt)
            - self.sign_correlation(s.theta_a_alt, s.theta_b_alt)
    }
}

pub fn binned_probabilities(
    state: &TwoModeFockSuperposition,
    theta_a: f64,
    theta_b: f64,
) -> Result<BinnedProbabilities, SpecialFunctionError> {
    Ok(BalancedModel::new(state)?.binned_probabilities(theta_a, theta_b))
}

pub fn sign_correlation(
    state: &TwoModeFockSuperposition,
    theta_a: f64,
    theta_b: f64,
) -> Result<f64, SpecialFunctionError> {
    Ok(BalancedModel::new(state)?.sign_correlation(theta_a, theta_b))
}

pub fn ch_functional_balanced(
    state: &TwoModeFockSuperposition,
    settings: &QuadratureSettings,
) -> Result<f64, SpecialFunctionError> {
    Ok(BalancedModel::new(state)?.ch(settings))
}

pub fn chsh_functional_balanced(
    state: &TwoModeFockSuperposition,
    settings: &QuadratureSettings,
) -> Result<f64, SpecialFunctionError> {
    Ok(BalancedModel::new(state)?.chsh(settings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::full_gaussian_moment;

    fn st(n: u32, m: u32, phi: f64) -> TwoModeFockSuperposition {
        TwoModeFockSuperposition::new(n, m, phi).unwrap()
    }

    #[test]
    fn wavefunction_values() {
        let v = position_wavefunction(0, 0.0, 1.234).unwrap();
        assert!((v.re - PI.powf(-0.25)).abs() < 1e-15 && v.im.abs() < 1e-15);
        assert_eq!(position_wavefunction(1, 0.0, 0.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn wavefunction_normalized_by_moments() {
        // |⟨x|n⟩|² = H_n² e^{-x²} / (2^n n! √π); integrate H_n² by full moments.
        for n in 0..=10 {
            let p = hermite_coefficients(n).unwrap();
            let sq = p.mul(&p);
            let integral: f64 = sq
                .coefficients()
                .iter()
                .enumerate()
                .map(|(k, c)| c * full_gaussian_moment(k).unwrap())
                .sum();
            let norm = integral / (2f64.powi(n as i32) * crate::special::factorial(n as u32) * PI.sqrt());
            assert!((norm - 1.0).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn pdf_zero_at_origin_for_single_photon() {
        assert_eq!(joint_quadrature_pdf(&st(1, 0, 0.0), 0.0, 0.0, 0.0, 0.0), 0.0);
    }

    #[test]
    fn pdf_matches_wavefunction_product() {
        let s = st(5, 2, 0.4);
        let (ta, tb, x1, x2) = (0.3, 1.9, -0.6, 0.8);
        let amp = (position_wavefunction(3, x1, ta).unwrap() * position_wavefunction(2, x2, tb).unwrap()
            + Complex64::from_polar(1.0, s.branch_phase())
                * position_wavefunction(2, x1, ta).unwrap()
                * position_wavefunction(3, x2, tb).unwrap())
            / 2f64.sqrt();
        let pdf = joint_quadrature_pdf(&s, ta, tb, x1, x2);
        assert!((pdf - amp.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn pdf_common_phase_shift_invariance() {
        let s = st(4, 1, 0.3);
        for &c in &[0.5, 2.0, -1.3] {
            let a = joint_quadrature_pdf(&s, 0.2, 1.1, 0.4, -0.9);
            let b = joint_quadrature_pdf(&s, 0.2 + c, 1.1 + c, 0.4, -0.9);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn analytic_normalization() {
        for (n, m) in crate::state::family_up_to(9) {
            let model = BalancedModel::new(&st(n, m, 0.0)).unwrap();
            assert!((model.normalization() - 1.0).abs() < 1e-10, "{n} {m}");
            for i in 0..5 {
                let b = model.binned_probabilities(0.7 * i as f64, 1.3 * i as f64);
                let total = b.p11 + b.p10 + b.p01 + b.p00;
                assert!((total - 1.0).abs() < 1e-10);
                assert!((b.p1a - b.p11 - b.p10).abs() < 1e-10);
                assert!((b.p1b - b.p11 - b.p01).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_photon_marginal_is_half() {
        let b = binned_probabilities(&st(1, 0, 0.0), 0.0, 0.0).unwrap();
        assert!((b.p1a - 0.5).abs() < 1e-14);
    }

    #[test]
    fn two_photon_marginals_ignore_phases() {
        let s = st(2, 0, 0.0);
        let base = binned_probabilities(&s, 0.0, 0.0).unwrap();
        for &(a, b) in &[(0.4, 2.2), (3.0, 0.1), (5.5, 4.4)] {
            let p = binned_probabilities(&s, a, b).unwrap();
            assert!((p.p1a - base.p1a).abs() < 1e-14);
            assert!((p.p1b - base.p1b).abs() < 1e-14);
        }
    }

    #[test]
    fn correlation_bounded() {
        for (n, m) in crate::state::family_up_to(9) {
            let model = BalancedModel::new(&st(n, m, 0.0)).unwrap();
            for i in 0..10 {
                for j in 0..10 {
                    let e = model.sign_correlation(i as f64 * 0.63, j as f64 * 0.63);
                    assert!(e.abs() <= 1.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn symmetric_correlation_identity() {
        // θ_a = θ_b and φ_s = 0 make the density symmetric under x1 <-> x2.
        let model = BalancedModel::new(&st(3, 1, 0.0)).unwrap();
        let b = model.binned_probabilities(0.8, 0.8);
        assert!((b.sign_correlation() - (2.0 * (b.p11 + b.p00) - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn collapsed_ch_settings() {
        let model = BalancedModel::new(&st(3, 1, 0.0)).unwrap();
        let s = QuadratureSettings::new(0.4, 0.4, 1.7, 1.7);
        let b = model.binned_probabilities(0.4, 1.7);
        assert!((model.ch(&s) - (2.0 * b.p11 - b.p1a - b.p1b)).abs() < 1e-13);
    }

    #[test]
    fn settings_reduced() {
        let s = QuadratureSettings::new(-0.1, 7.0, TAU, 3.0);
        for a in s.to_array() {
            assert!((0.0..TAU).contains(&a));
        }
    }
}
