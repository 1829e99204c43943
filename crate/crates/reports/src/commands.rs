use clap::ValueEnum;
use fockbell_core::optimizer::RNG_ALGORITHM;
use fockbell_core::state::{family_up_to, heisenberg_limit, shot_noise_limit};
use fockbell_core::unbalanced::wigner;
use fockbell_core::{extremize, OptimizerConfig, TwoModeFockSuperposition};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::family::Family;
use crate::functional::{Functional, BOUNDARY_WARNING, DISPLACEMENT_BOUND};
use crate::output::{fmt_float, Document, Tabular};
use crate::report::{classify, state_label, QcrbRow, ReportRow, VIOLATION_TOLERANCE};
use crate::ReportError;

pub const MAX_QCRB_N: u32 = 64;
pub const MAX_TABLE_N: u32 = 10;
pub const MAX_WIGNER_MODULUS: f64 = 5.0;

fn invalid(msg: impl Into<String>) -> ReportError {
    ReportError::InvalidArgument(msg.into())
}

pub fn qcrb_rows(max_n: u32) -> Result<Vec<QcrbRow>, ReportError> {
    if max_n == 0 || max_n > MAX_QCRB_N {
        return Err(invalid(format!("max N must be in 1..={MAX_QCRB_N}, got {max_n}")));
    }
    family_up_to(max_n)
        .into_iter()
        .map(|(n, m)| {
            let s = TwoModeFockSuperposition::new(n, m, 0.0)?;
            Ok(QcrbRow {
                n,
                m,
                state: state_label(n, m),
                qcrb: s.qcrb(),
                snl: shot_noise_limit(n).map_err(|e| invalid(e.to_string()))?,
                hl: heisenberg_limit(n).map_err(|e| invalid(e.to_string()))?,
                supersensitive: s.is_supersensitive(),
            })
        })
        .collect()
}

/// A state whose extremization raised an error.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    pub n: u32,
    pub m: u32,
    pub message: String,
}

/// Rows in `(N, m)` order plus any per-state failures.
#[derive(Debug, Clone, PartialEq)]
pub struct Extremized {
    pub rows: Vec<ReportRow>,
    pub failures: Vec<RowFailure>,
}

fn extremize_state(
    functional: Functional,
    n: u32,
    m: u32,
    phi: f64,
    config: &OptimizerConfig,
) -> Result<ReportRow, ReportError> {
    let state = TwoModeFockSuperposition::new(n, m, phi)?;
    let objective = functional.objective(state)?;
    let space = functional.search_space();
    let r = extremize(&*objective, &space, config)?;
    let near_boundary = !space.near_boundary(&r.argmin, BOUNDARY_WARNING).is_empty()
        || !space.near_boundary(&r.argmax, BOUNDARY_WARNING).is_empty();
    Ok(ReportRow {
        n,
        m,
        state: state_label(n, m),
        phi_s: phi,
        functional,
        violation: classify(functional, r.min_value, r.max_value),
        min_value: r.min_value,
        max_value: r.max_value,
        argmin: r.argmin,
        argmax: r.argmax,
        seed: config.seed,
        evaluations: r.evaluations,
        min_converged: r.min_converged,
        max_converged: r.max_converged,
        near_boundary,
    })
}

fn extremize_states(
    functional: Functional,
    states: &[(u32, u32)],
    phi: f64,
    config: &OptimizerConfig,
) -> Result<Extremized, ReportError> {
    if !phi.is_finite() {
        return Err(invalid(format!("phase must be finite, got {phi}")));
    }
    // collect() on an indexed parallel iterator keeps input order
    let results: Vec<Result<ReportRow, ReportError>> = states
        .par_iter()
        .map(|&(n, m)| extremize_state(functional, n, m, phi, config))
        .collect();
    let mut out = Extremized {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for (&(n, m), r) in states.iter().zip(results) {
        match r {
            Ok(row) => out.rows.push(row),
            Err(e @ (ReportError::Optimizer(_) | ReportError::SpecialFunction(_))) => out.failures.push(RowFailure {
                n,
                m,
                message: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Every `(N, m)` state with `N <= max_n`.
pub fn table(
    functional: Functional,
    max_n: u32,
    phi: f64,
    config: &OptimizerConfig,
) -> Result<Extremized, ReportError> {
    if max_n == 0 || max_n > MAX_TABLE_N {
        return Err(invalid(format!("max N must be in 1..={MAX_TABLE_N}, got {max_n}")));
    }
    extremize_states(functional, &family_up_to(max_n), phi, config)
}

/// Members of one family with `N <= n_max`.
pub fn sweep(
    functional: Functional,
    family: Family,
    n_max: u32,
    phi: f64,
    config: &OptimizerConfig,
) -> Result<Extremized, ReportError> {
    if n_max == 0 || n_max > MAX_TABLE_N {
        return Err(invalid(format!("N max must be in 1..={MAX_TABLE_N}, got {n_max}")));
    }
    extremize_states(functional, &family.members(n_max), phi, config)
}

/// Square layout indexed by `(N-m, m)`: minima of `(N-m)::m` below the
/// diagonal, maxima of the mirrored state `m::(N-m)` above it. Cell `[p][q]`
/// is empty on the diagonal and for states missing from `rows`.
pub fn balanced_grid(rows: &[ReportRow]) -> Vec<Vec<Option<f64>>> {
    let size = rows.iter().map(|r| r.n as usize + 1).max().unwrap_or(0);
    let mut grid = vec![vec![None; size]; size];
    for r in rows {
        let (up, lo) = ((r.n - r.m) as usize, r.m as usize);
        grid[up][lo] = Some(r.min_value);
        grid[lo][up] = Some(r.max_value);
    }
    grid
}

pub fn grid_document(meta: Vec<(String, String)>, rows: &[ReportRow]) -> Document {
    let grid = balanced_grid(rows);
    let mut header = vec!["N-m\\m".to_string()];
    header.extend((0..grid.len()).map(|q| q.to_string()));
    let records = grid
        .iter()
        .enumerate()
        .map(|(p, cells)| {
            std::iter::once(p.to_string())
                .chain(cells.iter().map(|c| c.map(fmt_float).unwrap_or_default()))
                .collect()
        })
        .collect();
    let json_rows = grid
        .iter()
        .enumerate()
        .map(|(p, cells)| {
            serde_json::json!({
                "upper_occupancy": p,
                "cells": cells.iter().map(|c| c.map_or(Value::Null, Value::from)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Document {
        meta,
        header,
        records,
        json_rows,
    }
}

/// Provenance block shared by `table` and `sweep` outputs.
pub fn run_meta(
    command: &str,
    functional: Functional,
    phi: f64,
    config: &OptimizerConfig,
    extra: &[(&str, String)],
) -> Vec<(String, String)> {
    let (lo, hi) = functional.bounds();
    let search_box = if functional.uses_displacements() {
        format!("[-{DISPLACEMENT_BOUND}, {DISPLACEMENT_BOUND}]^8 (re, im of alpha, alpha', beta, beta')")
    } else {
        "[0, 2pi)^4 periodic".to_string()
    };
    let mut meta = base_meta(command);
    meta.extend(
        [
            ("functional", functional.name().to_string()),
            ("classical_bounds", format!("[{lo}, {hi}]")),
            ("violation_tolerance", fmt_float(VIOLATION_TOLERANCE)),
            ("phi_s", fmt_float(phi)),
            ("seed", config.seed.to_string()),
            ("random_samples", config.random_samples.to_string()),
            ("restarts", config.restarts.to_string()),
            ("refine_iterations", config.refine_iterations.to_string()),
            ("tolerance", fmt_float(config.tolerance)),
            ("rng", RNG_ALGORITHM.to_string()),
            ("search_box", search_box),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v)),
    );
    meta.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    meta
}

pub fn base_meta(command: &str) -> Vec<(String, String)> {
    vec![
        ("tool".into(), "fockbell".into()),
        ("version".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WignerAxis {
    ReAlpha,
    ImAlpha,
    ReBeta,
    ImBeta,
}

impl WignerAxis {
    fn index(self) -> usize {
        match self {
            WignerAxis::ReAlpha => 0,
            WignerAxis::ImAlpha => 1,
            WignerAxis::ReBeta => 2,
            WignerAxis::ImBeta => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WignerAxis::ReAlpha => "re-alpha",
            WignerAxis::ImAlpha => "im-alpha",
            WignerAxis::ReBeta => "re-beta",
            WignerAxis::ImBeta => "im-beta",
        }
    }
}

/// A square 2-D slice through the four real phase-space coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerSpec {
    pub n: u32,
    pub m: u32,
    pub phi: f64,
    pub x_axis: WignerAxis,
    pub y_axis: WignerAxis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    /// `(re α, im α, re β, im β)` for the coordinates off the slice.
    pub at: [f64; 4],
}

impl WignerSpec {
    pub fn coordinates(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + h * i as f64).collect()
    }

    pub fn describe(&self) -> String {
        format!(
            "x = {} and y = {} over [{}, {}] in {} steps; re-alpha, im-alpha, re-beta, im-beta elsewhere = {}",
            self.x_axis.name(),
            self.y_axis.name(),
            fmt_float(self.lo),
            fmt_float(self.hi),
            self.steps,
            self.at.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(", ")
        )
    }

    pub fn meta(&self) -> Vec<(String, String)> {
        let mut meta = base_meta("wigner");
        meta.extend([
            ("state".to_string(), state_label(self.n, self.m)),
            ("phi_s".to_string(), fmt_float(self.phi)),
            ("slice".to_string(), self.describe()),
        ]);
        meta
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerPoint {
    pub x: f64,
    pub y: f64,
    pub re_alpha: f64,
    pub im_alpha: f64,
    pub re_beta: f64,
    pub im_beta: f64,
    pub wigner: f64,
}

impl Tabular for WignerPoint {
    fn header() -> Vec<String> {
        ["x", "y", "re_alpha", "im_alpha", "re_beta", "im_beta", "wigner"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn record(&self) -> Vec<String> {
        [
            self.x,
            self.y,
            self.re_alpha,
            self.im_alpha,
            self.re_beta,
            self.im_beta,
            self.wigner,
        ]
        .iter()
        .map(|&v| fmt_float(v))
        .collect()
    }
}

/// Two-mode Wigner function on the slice, `x` outer and `y` inner.
pub fn wigner_grid(spec: &WignerSpec) -> Result<Vec<WignerPoint>, ReportError> {
    let state = TwoModeFockSuperposition::new(spec.n, spec.m, spec.phi)?;
    if spec.x_axis == spec.y_axis {
        return Err(invalid("x and y axes must differ"));
    }
    if spec.steps == 0 {
        return Err(invalid("steps must be positive"));
    }
    if !(spec.lo.is_finite() && spec.hi.is_finite() && spec.lo <= spec.hi) || spec.at.iter().any(|v| !v.is_finite()) {
        return Err(invalid("grid range must be finite with lo <= hi"));
    }
    let coords = spec.coordinates();
    let mut points = Vec::with_capacity(coords.len() * coords.len());
    for &x in &coords {
        for &y in &coords {
            let mut p = spec.at;
            p[spec.x_axis.index()] = x;
            p[spec.y_axis.index()] = y;
            let alpha = Complex64::new(p[0], p[1]);
            let beta = Complex64::new(p[2], p[3]);
            if alpha.norm() > MAX_WIGNER_MODULUS || beta.norm() > MAX_WIGNER_MODULUS {
                return Err(invalid(format!(
                    "grid point alpha = {alpha}, beta = {beta} lies outside |alpha|, |beta| <= {MAX_WIGNER_MODULUS}"
                )));
            }
            points.push(WignerPoint {
                x,
                y,
                re_alpha: p[0],
                im_alpha: p[1],
                re_beta: p[2],
                im_beta: p[3],
                wigner: wigner(&state, alpha, beta),
            });
        }
    }
    Ok(points)
}
