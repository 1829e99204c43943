use serde::Serialize;

use crate::functional::Functional;
use crate::output::{fmt_float, fmt_floats, Tabular};

/// A bound counts as violated only when exceeded by more than this.
pub const VIOLATION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Violation {
    None,
    Lower,
    Upper,
    Both,
}

impl Violation {
    pub fn as_str(self) -> &'static str {
        match self {
            Violation::None => "none",
            Violation::Lower => "lower",
            Violation::Upper => "upper",
            Violation::Both => "both",
        }
    }
}

pub fn classify(functional: Functional, min_value: f64, max_value: f64) -> Violation {
    let (lo, hi) = functional.bounds();
    match (
        min_value < lo - VIOLATION_TOLERANCE,
        max_value > hi + VIOLATION_TOLERANCE,
    ) {
        (false, false) => Violation::None,
        (true, false) => Violation::Lower,
        (false, true) => Violation::Upper,
        (true, true) => Violation::Both,
    }
}

/// Extremized functional for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub n: u32,
    pub m: u32,
    pub state: String,
    pub phi_s: f64,
    pub functional: Functional,
    pub violation: Violation,
    pub min_value: f64,
    pub max_value: f64,
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
    pub seed: u64,
    pub evaluations: u64,
    pub min_converged: bool,
    pub max_converged: bool,
    pub near_boundary: bool,
}

pub fn state_label(n: u32, m: u32) -> String {
    format!("{}::{}", n - m, m)
}

impl Tabular for ReportRow {
    fn header() -> Vec<String> {
        [
            "N",
            "m",
            "state",
            "phi_s",
            "functional",
            "violation",
            "min_value",
            "max_value",
            "argmin",
            "argmax",
            "seed",
            "evaluations",
            "min_converged",
            "max_converged",
            "near_boundary",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.m.to_string(),
            self.state.clone(),
            fmt_float(self.phi_s),
            self.functional.name().to_string(),
            self.violation.as_str().to_string(),
            fmt_float(self.min_value),
            fmt_float(self.max_value),
            fmt_floats(&self.argmin),
            fmt_floats(&self.argmax),
            self.seed.to_string(),
            self.evaluations.to_string(),
            self.min_converged.to_string(),
            self.max_converged.to_string(),
            self.near_boundary.to_string(),
        ]
    }
}

/// Phase-sensitivity figures for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QcrbRow {
    pub n: u32,
    pub m: u32,
    pub state: String,
    pub qcrb: f64,
    pub snl: f64,
    pub hl: f64,
    pub supersensitive: bool,
}

impl Tabular for QcrbRow {
    fn header() -> Vec<String> {
        ["N", "m", "state", "qcrb", "snl", "hl", "supersensitive"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn record(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            self.m.to_string(),
            self.state.clone(),
            fmt_float(self.qcrb),
            fmt_float(self.snl),
            fmt_float(self.hl),
            self.supersensitive.to_string(),
        ]
    }
}
