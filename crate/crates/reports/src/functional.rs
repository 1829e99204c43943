use clap::ValueEnum;
use fockbell_core::balanced::{BalancedModel, QuadratureSettings};
use fockbell_core::spin::{chsh_spin, GisinPeresAngles};
use fockbell_core::unbalanced::{ch_functional_unbalanced, chsh_functional_unbalanced, DisplacementSettings};
use fockbell_core::{SearchSpace, TwoModeFockSuperposition};
use serde::Serialize;

use crate::ReportError;

/// Real half-width of the displacement search box.
pub const DISPLACEMENT_BOUND: f64 = 3.0;

/// Displacement components at or beyond this magnitude trigger a warning.
pub const BOUNDARY_WARNING: f64 = 2.5;

pub type Objective = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Functional {
    ChBalanced,
    ChshBalanced,
    ChUnbalanced,
    ChshUnbalanced,
    ChshSpin,
}

impl Functional {
    pub fn name(self) -> &'static str {
        match self {
            Functional::ChBalanced => "ch-balanced",
            Functional::ChshBalanced => "chsh-balanced",
            Functional::ChUnbalanced => "ch-unbalanced",
            Functional::ChshUnbalanced => "chsh-unbalanced",
            Functional::ChshSpin => "chsh-spin",
        }
    }

    /// Local-realistic bounds `(lower, upper)`.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Functional::ChBalanced | Functional::ChUnbalanced => (-1.0, 0.0),
            _ => (-2.0, 2.0),
        }
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, Functional::ChBalanced | Functional::ChshBalanced)
    }

    pub fn uses_displacements(self) -> bool {
        matches!(self, Functional::ChUnbalanced | Functional::ChshUnbalanced)
    }

    pub fn search_space(self) -> SearchSpace {
        if self.uses_displacements() {
            SearchSpace::displacements(4, DISPLACEMENT_BOUND)
        } else {
            SearchSpace::angles(4)
        }
    }

    /// Parameter vector to functional value for one state.
    pub fn objective(self, state: TwoModeFockSuperposition) -> Result<Objective, ReportError> {
        Ok(match self {
            Functional::ChBalanced => {
                let model = BalancedModel::new(&state)?;
                Box::new(move |p| model.ch(&QuadratureSettings::from_slice(p)))
            }
            Functional::ChshBalanced => {
                let model = BalancedModel::new(&state)?;
                Box::new(move |p| model.chsh(&QuadratureSettings::from_slice(p)))
            }
            Functional::ChUnbalanced => Box::new(move |p| {
                DisplacementSettings::from_slice(p).map_or(f64::NAN, |s| ch_functional_unbalanced(&state, &s))
            }),
            Functional::ChshUnbalanced => Box::new(move |p| {
                DisplacementSettings::from_slice(p).map_or(f64::NAN, |s| chsh_functional_unbalanced(&state, &s))
            }),
            Functional::ChshSpin => Box::new(move |p| chsh_spin(&state, &GisinPeresAngles::from_slice(p))),
        })
    }
}

impl std::fmt::Display for Functional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_matches_core_functions() {
        let s = TwoModeFockSuperposition::new(3, 1, 0.0).unwrap();
        let p = [0.1, -0.2, 0.3, 0.4, -0.5, 0.6, 0.7, -0.8];
        let f = Functional::ChshUnbalanced.objective(s).unwrap();
        let direct = chsh_functional_unbalanced(&s, &DisplacementSettings::from_slice(&p).unwrap());
        assert_eq!(f(&p), direct);
        assert_eq!(Functional::ChshUnbalanced.search_space().dimension(), 8);
        assert_eq!(Functional::ChBalanced.search_space().dimension(), 4);
    }

    #[test]
    fn names_match_value_enum() {
        for f in Functional::value_variants() {
            let pv = f.to_possible_value().unwrap();
            assert_eq!(pv.get_name(), f.name());
        }
    }
}
