//! Gisin–Peres pseudo-spin observables on the Fock levels `0..=N` of each mode.
//!
//! `Γ_z` is the parity diagonal and `Γ_x` flips `|k⟩ ↔ |N-k⟩`. For even `N` the
//! two do not anticommute on the middle level `N/2`, so `A(t)² ≠ I` there. The
//! `(N-m)::m` state has no weight on that level (its support is `m` and `N-m`,
//! which `Γ_x` pairs with each other), so the correlator
//! `E(s, t) = (-1)^N cos s cos t + cos((N-2m)φ_s) sin s sin t` holds for every
//! `N`. [`chsh_spin_matrix`] checks this by dense algebra.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::state::TwoModeFockSuperposition;

/// Measurement angles `a, a'` (mode a) and `b, b'` (mode b), reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GisinPeresAngles {
    pub a: f64,
    pub a_alt: f64,
    pub b: f64,
    pub b_alt: f64,
}

impl GisinPeresAngles {
    pub fn new(a: f64, a_alt: f64, b: f64, b_alt: f64) -> Self {
        Self {
            a: a.rem_euclid(TAU),
            a_alt: a_alt.rem_euclid(TAU),
            b: b.rem_euclid(TAU),
            b_alt: b_alt.rem_euclid(TAU),
        }
    }

    pub fn from_slice(p: &[f64]) -> Self {
        Self::new(p[0], p[1], p[2], p[3])
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.a, self.a_alt, self.b, self.b_alt]
    }
}

/// Real symmetric `(N+1)×(N+1)` observable over `|0⟩..|N⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoSpinObservable {
    matrix: DMatrix<f64>,
}

impl PseudoSpinObservable {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn levels(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    /// Largest entry of `|A² - I|`.
    pub fn involution_defect(&self) -> f64 {
        let sq = &self.matrix * &self.matrix;
        let id = DMatrix::<f64>::identity(self.levels(), self.levels());
        (sq - id).abs().max()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }
}

pub fn gamma_z(n: u32) -> PseudoSpinObservable {
    let d = n as usize + 1;
    let diag = DVector::from_fn(d, |k, _| if k % 2 == 0 { 1.0 } else { -1.0 });
    PseudoSpinObservable {
        matrix: DMatrix::from_diagonal(&diag),
    }
}

pub fn gamma_x(n: u32) -> PseudoSpinObservable {
    let d = n as usize + 1;
    PseudoSpinObservable {
        matrix: DMatrix::from_fn(d, d, |i, j| if i + j == d - 1 { 1.0 } else { 0.0 }),
    }
}

/// `Γ_z cos t + Γ_x sin t`.
pub fn spin_observable(n: u32, angle: f64) -> PseudoSpinObservable {
    PseudoSpinObservable {
        matrix: gamma_z(n).matrix * angle.cos() + gamma_x(n).matrix * angle.sin(),
    }
}

/// Closed-form `⟨A(s) ⊗ B(t)⟩`.
pub fn correlator(state: &TwoModeFockSuperposition, s: f64, t: f64) -> f64 {
    let parity = if state.total_photons().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    parity * s.cos() * t.cos() + state.branch_phase().cos() * s.sin() * t.sin()
}

/// State vector on the `(N+1)²` product space, index `n_a (N+1) + n_b`.
fn product_state(state: &TwoModeFockSuperposition) -> DVector<Complex64> {
    let d = state.total_photons() as usize + 1;
    let up = state.upper_occupancy() as usize;
    let lo = state.lower_occupancy() as usize;
    let mut v = DVector::from_element(d * d, Complex64::new(0.0, 0.0));
    v[up * d + lo] = Complex64::new(state.branch_amplitude(), 0.0);
    v[lo * d + up] = Complex64::from_polar(state.branch_amplitude(), state.branch_phase());
    v
}

/// `⟨A(s) ⊗ B(t)⟩` by explicit Kronecker product on the `(N+1)²` space.
pub fn correlator_matrix(state: &TwoModeFockSuperposition, s: f64, t: f64) -> f64 {
    let n = state.total_photons();
    let op = spin_observable(n, s).matrix.kronecker(&spin_observable(n, t).matrix);
    let psi = product_state(state);
    let op_c = op.map(|x| Complex64::new(x, 0.0));
    (psi.adjoint() * op_c * &psi)[(0, 0)].re
}

fn chsh_from(corr: impl Fn(f64, f64) -> f64, g: &GisinPeresAngles) -> f64 {
    corr(g.a, g.b) + corr(g.a_alt, g.b) + corr(g.a, g.b_alt) - corr(g.a_alt, g.b_alt)
}

/// CHSH combination of pseudo-spin correlators.
pub fn chsh_spin(state: &TwoModeFockSuperposition, angles: &GisinPeresAngles) -> f64 {
    chsh_from(|s, t| correlator(state, s, t), angles)
}

/// Same combination evaluated by dense matrix algebra.
pub fn chsh_spin_matrix(state: &TwoModeFockSuperposition, angles: &GisinPeresAngles) -> f64 {
    chsh_from(|s, t| correlator_matrix(state, s, t), angles)
}
