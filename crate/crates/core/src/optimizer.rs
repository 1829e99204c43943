//! Seeded random-search global extremization over a box.
//!
//! Each extremum is found in two phases: a uniform sample of the box from a
//! seeded ChaCha8 stream, then downhill-simplex refinement started from the
//! best `restarts` samples. Refinements are independent and run in parallel;
//! the merge walks them in restart order, so the result does not depend on
//! thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of the random stream, recorded in every result.
pub const RNG_ALGORITHM: &str = "rand_chacha::ChaCha8Rng/seed_from_u64";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("search space needs at least one coordinate")]
    EmptySpace,

    #[error("bound vectors disagree in length ({lower} lower, {upper} upper, {periodic} periodic flags)")]
    ShapeMismatch {
        lower: usize,
        upper: usize,
        periodic: usize,
    },

    #[error("coordinate {index}: lower bound {lower} is not below upper bound {upper}")]
    EmptyInterval { index: usize, lower: f64, upper: f64 },

    #[error("invalid optimizer config: {0}")]
    InvalidConfig(&'static str),

    #[error("objective returned {value} at {params:?}")]
    NonFinite { params: Vec<f64>, value: f64 },
}

/// Box-bounded search space; periodic coordinates wrap instead of clamping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    periodic: Vec<bool>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, periodic: Vec<bool>) -> Result<Self, OptimizerError> {
        if lower.is_empty() {
            return Err(OptimizerError::EmptySpace);
        }
        if lower.len() != upper.len() || lower.len() != periodic.len() {
            return Err(OptimizerError::ShapeMismatch {
                lower: lower.len(),
                upper: upper.len(),
                periodic: periodic.len(),
            });
        }
        for (index, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if lo >= hi || !lo.is_finite() || !hi.is_finite() {
                return Err(OptimizerError::EmptyInterval {
                    index,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        Ok(Self { lower, upper, periodic })
    }

    /// `dimension` periodic angles on `[0, 2π)`.
    pub fn angles(dimension: usize) -> Self {
        Self {
            lower: vec![0.0; dimension],
            upper: vec![std::f64::consts::TAU; dimension],
            periodic: vec![true; dimension],
        }
    }

    /// `count` complex displacements as (re, im) pairs on `[-bound, bound]`.
    pub fn displacements(count: usize, bound: f64) -> Self {
        Self {
            lower: vec![-bound; 2 * count],
            upper: vec![bound; 2 * count],
            periodic: vec![false; 2 * count],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    /// Midpoint of every coordinate interval.
    pub fn centre(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| 0.5 * (l + u)).collect()
    }

    /// Maps an arbitrary point into the box: wraps periodic coordinates, clamps the rest.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| {
                let (lo, hi) = (self.lower[i], self.upper[i]);
                if self.periodic[i] {
                    let w = lo + (v - lo).rem_euclid(hi - lo);
                    // rem_euclid can round up to the period itself
                    if w >= hi {
                        lo
                    } else {
                        w
                    }
                } else {
                    v.clamp(lo, hi)
                }
            })
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter().enumerate().all(|(i, &v)| {
                if self.periodic[i] {
                    v >= self.lower[i] && v < self.upper[i]
                } else {
                    v >= self.lower[i] && v <= self.upper[i]
                }
            })
    }

    /// Indices of non-periodic coordinates of `x` with magnitude at or above `limit`.
    pub fn near_boundary(&self, x: &[f64], limit: f64) -> Vec<usize> {
        x.iter()
            .enumerate()
            .filter(|&(i, v)| !self.periodic[i] && v.abs() >= limit)
            .map(|(i, _)| i)
            .collect()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.dimension())
            .map(|i| rng.random_range(self.lower[i]..self.upper[i]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub random_samples: usize,
    pub restarts: usize,
    pub refine_iterations: usize,
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            random_samples: 20_000,
            restarts: 32,
            refine_iterations: 400,
            tolerance: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), OptimizerError> {
        if self.random_samples == 0 {
            return Err(OptimizerError::InvalidConfig("random_samples must be positive"));
        }
        if self.restarts == 0 {
            return Err(OptimizerError::InvalidConfig("restarts must be positive"));
        }
        if self.refine_iterations == 0 {
            return Err(OptimizerError::InvalidConfig("refine_iterations must be positive"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(OptimizerError::InvalidConfig("tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremizationResult {
    pub min_value: f64,
    pub max_value: f64,
    pub argmin: Vec<f64>,
    pub argmax: Vec<f64>,
    pub evaluations: u64,
    pub min_converged: bool,
    pub max_converged: bool,
    pub rng_algorithm: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sense {
    Min,
    Max,
}

impl Sense {
    fn sign(self) -> f64 {
        match self {
            Sense::Min => 1.0,
            Sense::Max => -1.0,
        }
    }
}

struct Refined {
    value: f64,
    point: Vec<f64>,
    converged: bool,
    evaluations: u64,
}

fn evaluate<F>(objective: &F, space: &SearchSpace, raw: &[f64]) -> Result<(f64, Vec<f64>), OptimizerError>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let p = space.project(raw);
    let v = objective(&p);
    if !v.is_finite() {
        return Err(OptimizerError::NonFinite { params: p, value: v });
    }
    Ok((v, p))
}

/// Finds the minimum and maximum of `objective` over `space`.
pub fn extremize<F>(
    objective: &F,
    space: &SearchSpace,
    config: &OptimizerConfig,
) -> Result<ExtremizationResult, OptimizerError>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let points: Vec<Vec<f64>> = (0..config.random_samples).map(|_| space.sample(&mut rng)).collect();
    let values: Vec<f64> = points.par_iter().map(|p| objective(p)).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(OptimizerError::NonFinite {
            params: points[i].clone(),
            value: values[i],
        });
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    // stable sort: equal values keep stream order
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let k = config.restarts.min(points.len());
    let min_seeds: Vec<usize> = order[..k].to_vec();
    let max_seeds: Vec<usize> = {
        let mut desc = order.clone();
        desc.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        desc[..k].to_vec()
    };

    // Starting points for one sense: the box centre, then the k best samples
    // for that sense, then the k best for the opposite sense. Plateaus at the
    // bound value can crowd a narrow basin out of the top k; the far end of the
    // ranking and the centre reach it more often.
    let centre = space.centre();
    let starts = |own: &[usize], other: &[usize]| -> Vec<Vec<f64>> {
        std::iter::once(centre.clone())
            .chain(own.iter().chain(other).map(|&i| points[i].clone()))
            .collect()
    };

    let mut evaluations = config.random_samples as u64;
    let mut run = |sense: Sense, seeds: Vec<Vec<f64>>| -> Result<Refined, OptimizerError> {
        let refined: Vec<Result<Refined, OptimizerError>> = seeds
            .par_iter()
            .map(|p| nelder_mead(objective, space, p, sense, config))
            .collect();
        // ordered reduction: ties keep the earlier restart
        let mut best: Option<Refined> = None;
        for r in refined {
            let r = r?;
            evaluations += r.evaluations;
            let better = match &best {
                None => true,
                Some(b) => sense.sign() * r.value < sense.sign() * b.value,
            };
            if better {
                best = Some(r);
            }
        }
        Ok(best.expect("at least one restart"))
    };
    let lo = run(Sense::Min, starts(&min_seeds, &max_seeds))?;
    let hi = run(Sense::Max, starts(&max_seeds, &min_seeds))?;

    Ok(ExtremizationResult {
        min_value: lo.value,
        max_value: hi.value,
        argmin: lo.point,
        argmax: hi.point,
        evaluations,
        min_converged: lo.converged,
        max_converged: hi.converged,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}

/// Downhill simplex on `sign · objective`. The simplex lives in unwrapped
/// coordinates; every vertex is projected into the box before evaluation and
/// the projected point is what gets reported. A collapsed simplex is rebuilt
/// around its best vertex while budget remains, and convergence is declared
/// when a rebuild fails to improve by more than the tolerance.
fn nelder_mead<F>(
    objective: &F,
    space: &SearchSpace,
    start: &[f64],
    sense: Sense,
    config: &OptimizerConfig,
) -> Result<Refined, OptimizerError>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = space.dimension();
    // dimension-adapted coefficients; the classic (1, 2, 1/2, 1/2) for n = 2
    let nf = n as f64;
    let reflect = 1.0;
    let expand = 1.0 + 2.0 / nf;
    let contract = 0.75 - 0.5 / nf;
    let shrink = 1.0 - 1.0 / nf;
    let sign = sense.sign();
    let mut evaluations = 0u64;
    let mut eval = |x: &[f64]| -> Result<(f64, Vec<f64>), OptimizerError> {
        evaluations += 1;
        let (v, p) = evaluate(objective, space, x)?;
        Ok((sign * v, p))
    };

    let widths: Vec<f64> = (0..n).map(|i| space.upper()[i] - space.lower()[i]).collect();
    let mut step_scale = 0.05;
    let mut best_x = start.to_vec();
    let (mut best_f, mut best_p) = eval(start)?;
    let mut converged = false;
    let mut iterations = 0usize;

    while iterations < config.refine_iterations {
        // (raw vertex, signed value)
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(best_x.clone(), best_f)];
        for i in 0..n {
            let mut v = best_x.clone();
            v[i] += step_scale * widths[i];
            let (f, _) = eval(&v)?;
            simplex.push((v, f));
        }
        let round_start = best_f;

        while iterations < config.refine_iterations {
            iterations += 1;
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            let size = simplex[1..]
                .iter()
                .map(|(v, _)| {
                    v.iter()
                        .zip(&simplex[0].0)
                        .zip(&widths)
                        .map(|((a, b), w)| ((a - b) / w).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= config.tolerance * 1e-3 && size <= config.tolerance.sqrt() * 1e-2 {
                break;
            }

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64)
                .collect();
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };

            let xr = along(reflect);
            let (fr, _) = eval(&xr)?;
            if fr < simplex[0].1 {
                let xe = along(reflect * expand);
                let (fe, _) = eval(&xe)?;
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            } else if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
            } else {
                let (xc, fc) = if fr < worst.1 {
                    let xc = along(reflect * contract);
                    let (fc, _) = eval(&xc)?;
                    (xc, fc)
                } else {
                    let xc = along(-contract);
                    let (fc, _) = eval(&xc)?;
                    (xc, fc)
                };
                if fc < worst.1.min(fr) {
                    simplex[n] = (xc, fc);
                } else {
                    let best = simplex[0].0.clone();
                    for vertex in simplex.iter_mut().skip(1) {
                        let v: Vec<f64> = best.iter().zip(&vertex.0).map(|(b, x)| b + shrink * (x - b)).collect();
                        let (f, _) = eval(&v)?;
                        *vertex = (v, f);
                    }
                }
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 < best_f {
            let (f, p) = eval(&simplex[0].0)?;
            best_f = f;
            best_p = p;
            best_x = simplex[0].0.clone();
        }
        if round_start - best_f <= config.tolerance {
            converged = true;
            break;
        }
        step_scale = (step_scale * 0.5).max(1e-4);
    }

    Ok(Refined {
        value: sign * best_f,
        point: best_p,
        converged,
        evaluations,
    })
}
