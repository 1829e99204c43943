//! The `(N-m)::m` family of two-mode Fock superpositions and its closed-form
//! metrological and entanglement figures.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("total photon number must be at least 1")]
    NoPhotons,

    #[error("lower occupancy m = {lower} must satisfy 2m < N = {total}")]
    LowerOccupancyTooLarge { total: u32, lower: u32 },

    #[error("relative phase must be finite, got {0}")]
    NonFinitePhase(f64),
}

/// `(|N-m⟩_a|m⟩_b + e^{i(N-2m)φ_s}|m⟩_a|N-m⟩_b)/√2` with `0 <= m < N/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeFockSuperposition {
    total_photons: u32,
    lower_occupancy: u32,
    relative_phase: f64,
}

impl TwoModeFockSuperposition {
    pub fn new(total_photons: u32, lower_occupancy: u32, relative_phase: f64) -> Result<Self, StateError> {
        if total_photons == 0 {
            return Err(StateError::NoPhotons);
        }
        if 2 * lower_occupancy >= total_photons {
            return Err(StateError::LowerOccupancyTooLarge {
                total: total_photons,
                lower: lower_occupancy,
            });
        }
        if !relative_phase.is_finite() {
            return Err(StateError::NonFinitePhase(relative_phase));
        }
        Ok(Self {
            total_photons,
            lower_occupancy,
            relative_phase,
        })
    }

    /// The N00N member `(|N,0⟩ + e^{iNφ_s}|0,N⟩)/√2`.
    pub fn noon(total_photons: u32, relative_phase: f64) -> Result<Self, StateError> {
        Self::new(total_photons, 0, relative_phase)
    }

    pub fn total_photons(&self) -> u32 {
        self.total_photons
    }

    pub fn lower_occupancy(&self) -> u32 {
        self.lower_occupancy
    }

    /// `N - m`.
    pub fn upper_occupancy(&self) -> u32 {
        self.total_photons - self.lower_occupancy
    }

    /// Photon-number difference `N - 2m`, always at least 1.
    pub fn difference(&self) -> u32 {
        self.total_photons - 2 * self.lower_occupancy
    }

    pub fn relative_phase(&self) -> f64 {
        self.relative_phase
    }

    /// The phase `(N-2m)φ_s` carried by the second branch.
    pub fn branch_phase(&self) -> f64 {
        self.difference() as f64 * self.relative_phase
    }

    pub fn with_relative_phase(&self, relative_phase: f64) -> Result<Self, StateError> {
        Self::new(self.total_photons, self.lower_occupancy, relative_phase)
    }

    /// Amplitude carried by each of the two branches.
    pub fn branch_amplitude(&self) -> f64 {
        std::f64::consts::FRAC_1_SQRT_2
    }

    /// Quantum Fisher information `(N - 2m)²`.
    pub fn qfi(&self) -> f64 {
        let d = self.difference() as f64;
        d * d
    }

    /// Quantum Cramér–Rao bound `1/(N - 2m)`.
    pub fn qcrb(&self) -> f64 {
        1.0 / self.difference() as f64
    }

    /// True when the QCRB beats the shot-noise limit, i.e. `m < (N - √N)/2`.
    pub fn is_supersensitive(&self) -> bool {
        let n = self.total_photons as f64;
        (self.lower_occupancy as f64) < (n - n.sqrt()) / 2.0
    }

    /// Logarithmic negativity in nats, `ln(1 + 2·N_neg)`.
    pub fn log_negativity(&self) -> f64 {
        let negative_sum: f64 = partial_transpose_spectrum()
            .iter()
            .filter(|&&l| l < 0.0)
            .map(|l| -l)
            .sum();
        (1.0 + 2.0 * negative_sum).ln()
    }
}

/// Spectrum of the partial transpose on its four-dimensional support,
/// `{1/2, 1/2, 1/2, -1/2}`, sorted descending. It does not depend on `N`, `m`
/// or the relative phase.
pub fn partial_transpose_spectrum() -> [f64; 4] {
    [0.5, 0.5, 0.5, -0.5]
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("shot-noise limit needs at least one photon")]
pub struct ZeroPhotons;

/// `1/√N`.
pub fn shot_noise_limit(total_photons: u32) -> Result<f64, ZeroPhotons> {
    if total_photons == 0 {
        return Err(ZeroPhotons);
    }
    Ok(1.0 / (total_photons as f64).sqrt())
}

/// `1/N`.
pub fn heisenberg_limit(total_photons: u32) -> Result<f64, ZeroPhotons> {
    if total_photons == 0 {
        return Err(ZeroPhotons);
    }
    Ok(1.0 / total_photons as f64)
}

/// Every valid `(N, m)` pair with `N <= max_total`, ordered by `N` then `m`.
pub fn family_up_to(max_total: u32) -> Vec<(u32, u32)> {
    (1..=max_total)
        .flat_map(|n| (0..).take_while(move |m| 2 * m < n).map(move |m| (n, m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(n: u32, m: u32) -> TwoModeFockSuperposition {
        TwoModeFockSuperposition::new(n, m, 0.0).unwrap()
    }

    #[test]
    fn construction_rejects_invalid() {
        assert_eq!(TwoModeFockSuperposition::new(0, 0, 0.0), Err(StateError::NoPhotons));
        assert!(TwoModeFockSuperposition::new(4, 2, 0.0).is_err());
        assert!(TwoModeFockSuperposition::new(3, 2, 0.0).is_err());
        assert!(TwoModeFockSuperposition::new(3, 1, f64::NAN).is_err());
        assert!(TwoModeFockSuperposition::new(3, 1, 0.2).is_ok());
    }

    #[test]
    fn qfi_examples() {
        assert_eq!(st(10, 0).qfi(), 100.0);
        assert_eq!(st(2, 0).qfi(), 4.0);
        assert_eq!(st(9, 4).qfi(), 1.0);
    }

    #[test]
    fn qcrb_examples() {
        assert_eq!(st(10, 0).qcrb(), 0.1);
        assert_eq!(st(10, 3).qcrb(), 0.25);
        assert_eq!(st(1, 0).qcrb(), 1.0);
    }

    #[test]
    fn shot_noise_examples() {
        assert!((shot_noise_limit(10).unwrap() - 0.316_227_766_016_837_94).abs() < 1e-15);
        assert_eq!(shot_noise_limit(1).unwrap(), 1.0);
        assert_eq!(shot_noise_limit(4).unwrap(), 0.5);
        assert_eq!(shot_noise_limit(0), Err(ZeroPhotons));
    }

    #[test]
    fn supersensitivity_examples() {
        assert!(st(10, 3).is_supersensitive());
        assert!(!st(10, 4).is_supersensitive());
        assert!(!st(1, 0).is_supersensitive());
        let set: Vec<u32> = (0..5).filter(|&m| st(10, m).is_supersensitive()).collect();
        assert_eq!(set, vec![0, 1, 2, 3]);
    }

    #[test]
    fn log_negativity_is_ln2() {
        assert_eq!(st(1, 0).log_negativity(), std::f64::consts::LN_2);
        let s = TwoModeFockSuperposition::new(9, 4, 1.3).unwrap();
        assert_eq!(s.log_negativity(), std::f64::consts::LN_2);
    }

    #[test]
    fn family_listing() {
        assert_eq!(family_up_to(4), vec![(1, 0), (2, 0), (3, 0), (3, 1), (4, 0), (4, 1)]);
    }

    proptest! {
        #[test]
        fn qcrb_squared_times_qfi_is_one(n in 1u32..200, frac in 0.0f64..1.0) {
            let max_m = (n - 1) / 2;
            let m = ((max_m as f64) * frac).round() as u32;
            let s = st(n, m);
            prop_assert!((s.qcrb() * s.qcrb() * s.qfi() - 1.0).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn supersensitivity_is_monotone(n in 1u32..400, frac in 0.0f64..1.0) {
            let max_m = (n - 1) / 2;
            let m = ((max_m as f64) * frac).round() as u32;
            if m >= 1 && st(n, m).is_supersensitive() {
                prop_assert!(st(n, m - 1).is_supersensitive());
            }
        }

        #[test]
        fn supersensitivity_matches_bound_comparison(n in 1u32..400, frac in 0.0f64..1.0) {
            let max_m = (n - 1) / 2;
            let m = ((max_m as f64) * frac).round() as u32;
            let s = st(n, m);
            prop_assert_eq!(s.is_supersensitive(), s.qcrb() < shot_noise_limit(n).unwrap());
        }

        #[test]
        fn log_negativity_ignores_phase(phase in -10.0f64..10.0) {
            let s = TwoModeFockSuperposition::new(7, 2, phase).unwrap();
            prop_assert_eq!(s.log_negativity(), std::f64::consts::LN_2);
        }
    }
}
