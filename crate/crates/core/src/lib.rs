//! Phase sensitivity, entanglement and homodyne Bell functionals for the
//! two-mode entangled Fock superpositions `(N-m)::m`.
//!
//! - [`state`]: the state family, quantum Fisher information, Cramér–Rao and
//!   shot-noise bounds, logarithmic negativity.
//! - [`special`]: Hermite/Laguerre polynomials, Gaussian moments, displaced
//!   Fock overlaps.
//! - [`balanced`]: sign-binned quadrature measurements (CH and CHSH).
//! - [`unbalanced`]: displaced on/off and parity measurements (CH and CHSH),
//!   Q and Wigner functions.
//! - [`spin`]: Gisin–Peres pseudo-spin CHSH.
//! - [`optimizer`]: seeded random search with simplex refinement.
//! - [`oracle`]: truncated-space and quadrature reference computations.

#![forbid(unsafe_code)]

pub mod balanced;
pub mod optimizer;
pub mod oracle;
pub mod special;
pub mod spin;
pub mod state;
pub mod unbalanced;

pub use balanced::{BalancedModel, BinnedProbabilities, QuadratureSettings};
pub use optimizer::{extremize, ExtremizationResult, OptimizerConfig, OptimizerError, SearchSpace};
pub use spin::GisinPeresAngles;
pub use state::TwoModeFockSuperposition;
pub use unbalanced::{DisplacementSettings, Mode};
