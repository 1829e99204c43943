//! Unbalanced-homodyne Bell tests: displaced on/off detection (Q function)
//! and displaced photon-number parity (Wigner function).
//!
//! Everything here is closed form in the displacement amplitudes. The parity
//! correlation is written without the `(α/β)^{N-2m}` factor: folding the
//! negative-order Laguerre polynomial of `β` through the reflection identity
//! turns the interference term into
//! `(m!/(N-m)!) (-4αβ*)^{N-2m} L_m^{N-2m}(4|α|²) L_m^{N-2m}(4|β|²)`, which is
//! regular at `β = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{laguerre_recurrence, ln_factorial};
use crate::state::TwoModeFockSuperposition;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("displacement components must be finite, got {0}")]
pub struct NonFiniteDisplacement(pub Complex64);

/// Two displacement settings per mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisplacementSettings {
    pub alpha: Complex64,
    pub alpha_alt: Complex64,
    pub beta: Complex64,
    pub beta_alt: Complex64,
}

impl DisplacementSettings {
    pub fn new(
        alpha: Complex64,
        alpha_alt: Complex64,
        beta: Complex64,
        beta_alt: Complex64,
    ) -> Result<Self, NonFiniteDisplacement> {
        for z in [alpha, alpha_alt, beta, beta_alt] {
            if !z.is_finite() {
                return Err(NonFiniteDisplacement(z));
            }
        }
        Ok(Self {
            alpha,
            alpha_alt,
            beta,
            beta_alt,
        })
    }

    /// From `[Re α, Im α, Re α', Im α', Re β, Im β, Re β', Im β']`.
    pub fn from_slice(p: &[f64]) -> Result<Self, NonFiniteDisplacement> {
        Self::new(
            Complex64::new(p[0], p[1]),
            Complex64::new(p[2], p[3]),
            Complex64::new(p[4], p[5]),
            Complex64::new(p[6], p[7]),
        )
    }

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.alpha.re,
            self.alpha.im,
            self.alpha_alt.re,
            self.alpha_alt.im,
            self.beta.re,
            self.beta.im,
            self.beta_alt.re,
            self.beta_alt.im,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
}

/// Single and coincident click probabilities of the on/off detectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClickProbabilities {
    pub a: f64,
    pub b: f64,
    pub ab: f64,
}

/// Single-mode no-click probability `Q_mode(δ)`. The reduced state of either
/// mode is the same mixture of `|N-m⟩` and `|m⟩`, so both modes share one formula.
pub fn q_single(state: &TwoModeFockSuperposition, delta: Complex64, mode: Mode) -> f64 {
    let _ = mode;
    let r2 = delta.norm_sqr();
    let up = state.upper_occupancy();
    let lo = state.lower_occupancy();
    0.5 * (coherent_weight(r2, up) + coherent_weight(r2, lo))
}

/// `e^{-r²} r^{2n} / n!`, the Poisson weight of `|n⟩` in a coherent state.
fn coherent_weight(r2: f64, n: u32) -> f64 {
    if n == 0 {
        return (-r2).exp();
    }
    if r2 == 0.0 {
        return 0.0;
    }
    (n as f64 * r2.ln() - r2 - ln_factorial(n)).exp()
}

/// Joint no-click probability `Q_ab(α, β) = |⟨α, β|ψ⟩|²`.
pub fn q_joint(state: &TwoModeFockSuperposition, alpha: Complex64, beta: Complex64) -> f64 {
    let up = state.upper_occupancy();
    let lo = state.lower_occupancy();
    let ab_conj = alpha * beta.conj();
    let direct = (alpha.powu(up) * beta.powu(lo)).norm_sqr() + (alpha.powu(lo) * beta.powu(up)).norm_sqr();
    let phase = Complex64::from_polar(1.0, state.branch_phase());
    let interference =
        phase * ab_conj.powu(up) * ab_conj.conj().powu(lo) + phase.conj() * ab_conj.powu(lo) * ab_conj.conj().powu(up);
    let pref = (-(alpha.norm_sqr() + beta.norm_sqr()) - ln_factorial(up) - ln_factorial(lo)).exp() / 2.0;
    pref * (direct + interference.re)
}

pub fn click_probabilities(state: &TwoModeFockSuperposition, alpha: Complex64, beta: Complex64) -> ClickProbabilities {
    let qa = q_single(state, alpha, Mode::A);
    let qb = q_single(state, beta, Mode::B);
    ClickProbabilities {
        a: 1.0 - qa,
        b: 1.0 - qb,
        ab: 1.0 - qa - qb + q_joint(state, alpha, beta),
    }
}

/// Displaced-parity correlation `Π_ab(α, β) = ⟨Π(α) ⊗ Π(β)⟩`.
pub fn parity_correlation(state: &TwoModeFockSuperposition, alpha: Complex64, beta: Complex64) -> f64 {
    let up = state.upper_occupancy() as usize;
    let lo = state.lower_occupancy() as usize;
    let k = state.difference();
    let xa = 4.0 * alpha.norm_sqr();
    let xb = 4.0 * beta.norm_sqr();
    let direct = laguerre_recurrence(up, 0.0, xa) * laguerre_recurrence(lo, 0.0, xb)
        + laguerre_recurrence(lo, 0.0, xa) * laguerre_recurrence(up, 0.0, xb);
    let ratio = (ln_factorial(lo as u32) - ln_factorial(up as u32)).exp();
    let cross = Complex64::from_polar(1.0, state.branch_phase())
        * (-4.0 * alpha * beta.conj()).powu(k)
        * (ratio * laguerre_recurrence(lo, k as f64, xa) * laguerre_recurrence(lo, k as f64, xb));
    let sign = if state.total_photons().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    sign * 0.5 * (-2.0 * (alpha.norm_sqr() + beta.norm_sqr())).exp() * (direct + 2.0 * cross.re)
}

/// Two-mode Wigner function `W(α, β) = (4/π²) Π_ab(α, β)`.
pub fn wigner(state: &TwoModeFockSuperposition, alpha: Complex64, beta: Complex64) -> f64 {
    4.0 / (PI * PI) * parity_correlation(state, alpha, beta)
}

/// `P_ab(α,β) - P_ab(α,β') + P_ab(α',β) + P_ab(α',β') - P_a(α') - P_b(β)`.
pub fn ch_functional_unbalanced(state: &TwoModeFockSuperposition, s: &DisplacementSettings) -> f64 {
    let p = |a, b| click_probabilities(state, a, b).ab;
    p(s.alpha, s.beta) - p(s.alpha, s.beta_alt) + p(s.alpha_alt, s.beta) + p(s.alpha_alt, s.beta_alt)
        - (1.0 - q_single(state, s.alpha_alt, Mode::A))
        - (1.0 - q_single(state, s.beta, Mode::B))
}

/// `Π(α,β) + Π(α',β) + Π(α,β') - Π(α',β')`.
pub fn chsh_functional_unbalanced(state: &TwoModeFockSuperposition, s: &DisplacementSettings) -> f64 {
    let p = |a, b| parity_correlation(state, a, b);
    p(s.alpha, s.beta) + p(s.alpha_alt, s.beta) + p(s.alpha, s.beta_alt) - p(s.alpha_alt, s.beta_alt)
}
