//! Brute-force reference computations on truncated Fock spaces.
//!
//! Slow dense linear algebra and adaptive quadrature that every closed form in
//! this crate is tested against. Nothing here is used on the optimizer path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::state::TwoModeFockSuperposition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("truncation dimension {dim} too small, need at least {required}")]
    TruncationTooSmall { dim: usize, required: usize },

    #[error("dimension mismatch: operator acts on {operator}, vector has {vector}")]
    DimensionMismatch { operator: usize, vector: usize },

    #[error("quadrature did not converge: estimated error {achieved:e} above tolerance {tolerance:e}")]
    NoConvergence { achieved: f64, tolerance: f64 },
}

type CMatrix = DMatrix<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense operator on one truncated mode (`dim × dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeOperator {
    pub dim: usize,
    pub matrix: CMatrix,
}

impl SingleModeOperator {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// `(-1)^n`.
    pub fn parity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::from_diagonal(&DVector::from_fn(dim, |k, _| c(if k % 2 == 0 { 1.0 } else { -1.0 }))),
        }
    }

    /// `|n⟩⟨n|`.
    pub fn projector(dim: usize, n: usize) -> Self {
        let mut matrix = CMatrix::zeros(dim, dim);
        matrix[(n, n)] = c(1.0);
        Self { dim, matrix }
    }

    /// Embeds a real `(N+1)×(N+1)` matrix in the top-left corner.
    pub fn embed(dim: usize, block: &DMatrix<f64>) -> Self {
        let mut matrix = CMatrix::zeros(dim, dim);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                matrix[(i, j)] = c(block[(i, j)]);
            }
        }
        Self { dim, matrix }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn column(&self, n: usize) -> DVector<Complex64> {
        self.matrix.column(n).into_owned()
    }
}

/// Dense operator on the two-mode space, index `n_a · dim + n_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTwoModeOperator {
    pub dim: usize,
    pub matrix: CMatrix,
    pub hermitian: bool,
}

impl TruncatedTwoModeOperator {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            matrix: CMatrix::identity(dim * dim, dim * dim),
            hermitian: true,
        }
    }

    /// `a ⊗ b`; `hermitian` records the caller's claim and is checked in debug builds.
    pub fn kron(a: &SingleModeOperator, b: &SingleModeOperator, hermitian: bool) -> Self {
        assert_eq!(a.dim, b.dim, "mode truncations differ");
        let op = Self {
            dim: a.dim,
            matrix: a.matrix.kronecker(&b.matrix),
            hermitian,
        };
        debug_assert!(!hermitian || op.hermiticity_defect() < 1e-9);
        op
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// State vector of length `dim²`.
pub fn state_vector(state: &TwoModeFockSuperposition, dim: usize) -> Result<DVector<Complex64>, OracleError> {
    let n = state.total_photons() as usize;
    if dim <= n {
        return Err(OracleError::TruncationTooSmall { dim, required: n + 1 });
    }
    let up = state.upper_occupancy() as usize;
    let lo = state.lower_occupancy() as usize;
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::from_element(dim * dim, c(0.0));
    v[up * dim + lo] = c(amp);
    v[lo * dim + up] = Complex64::from_polar(amp, state.branch_phase());
    Ok(v)
}

/// Minimum truncation accepted for a displacement of magnitude `|δ|`.
pub fn required_displacement_dim(delta: Complex64) -> usize {
    (4.0 * delta.norm_sqr() + 20.0).ceil() as usize
}

/// `D(δ) = exp(δ a† - δ* a)` by matrix exponential of the truncated generator.
pub fn truncated_displacement_matrix(delta: Complex64, dim: usize) -> Result<SingleModeOperator, OracleError> {
    let required = required_displacement_dim(delta);
    if dim < required {
        return Err(OracleError::TruncationTooSmall { dim, required });
    }
    let mut generator = CMatrix::zeros(dim, dim);
    for n in 0..dim - 1 {
        let s = ((n + 1) as f64).sqrt();
        // a†|n⟩ = √(n+1)|n+1⟩ and a|n+1⟩ = √(n+1)|n⟩
        generator[(n + 1, n)] += delta * s;
        generator[(n, n + 1)] -= delta.conj() * s;
    }
    Ok(SingleModeOperator {
        dim,
        matrix: generator.exp(),
    })
}

/// `D(δ) (-1)^n D(-δ)`.
pub fn displaced_parity(delta: Complex64, dim: usize) -> Result<SingleModeOperator, OracleError> {
    let d = truncated_displacement_matrix(delta, dim)?;
    let d_inv = truncated_displacement_matrix(-delta, dim)?;
    Ok(d.compose(&SingleModeOperator::parity(dim)).compose(&d_inv))
}

/// `D(δ) |0⟩⟨0| D(δ)†`.
pub fn displaced_vacuum_projector(delta: Complex64, dim: usize) -> Result<SingleModeOperator, OracleError> {
    let d = truncated_displacement_matrix(delta, dim)?;
    Ok(d.compose(&SingleModeOperator::projector(dim, 0)).compose(&d.adjoint()))
}

/// `⟨ψ|Op|ψ⟩`.
pub fn expectation(
    op: &TruncatedTwoModeOperator,
    state: &TwoModeFockSuperposition,
    dim: usize,
) -> Result<Complex64, OracleError> {
    if op.dim != dim {
        return Err(OracleError::DimensionMismatch {
            operator: op.dim * op.dim,
            vector: dim * dim,
        });
    }
    let psi = state_vector(state, dim)?;
    Ok(psi.dotc(&(&op.matrix * &psi)))
}

/// `⟨ψ|a ⊗ b|ψ⟩` without forming the `dim² × dim²` product: with the state
/// reshaped to a `dim × dim` amplitude matrix `Ψ`, this is `tr(Ψ† a Ψ bᵀ)`.
pub fn product_expectation(
    a: &SingleModeOperator,
    b: &SingleModeOperator,
    state: &TwoModeFockSuperposition,
    dim: usize,
) -> Result<Complex64, OracleError> {
    for op in [a, b] {
        if op.dim != dim {
            return Err(OracleError::DimensionMismatch {
                operator: op.dim * op.dim,
                vector: dim * dim,
            });
        }
    }
    let psi = state_vector(state, dim)?;
    let amplitudes = CMatrix::from_row_slice(dim, dim, psi.as_slice());
    let image = &a.matrix * &amplitudes * b.matrix.transpose();
    Ok(amplitudes.iter().zip(image.iter()).map(|(p, q)| p.conj() * q).sum())
}

/// `⟨-δ, n1 | δ, n2⟩` from the columns of truncated `D(-δ)` and `D(δ)`.
pub fn displaced_fock_overlap(n1: usize, n2: usize, delta: Complex64, dim: usize) -> Result<Complex64, OracleError> {
    let left = truncated_displacement_matrix(-delta, dim)?.column(n1);
    let right = truncated_displacement_matrix(delta, dim)?.column(n2);
    Ok(left.dotc(&right))
}

/// Largest deviation, over the lowest `dim/2` levels, of `(-1)^n D(δ)|k⟩` from
/// `(-1)^k D(-δ)|k⟩`.
pub fn parity_displacement_defect(delta: Complex64, k: usize, dim: usize) -> Result<f64, OracleError> {
    let lhs = SingleModeOperator::parity(dim).matrix * truncated_displacement_matrix(delta, dim)?.column(k);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rhs = truncated_displacement_matrix(-delta, dim)?.column(k) * c(sign);
    Ok((0..dim / 2).map(|i| (lhs[i] - rhs[i]).norm()).fold(0.0, f64::max))
}

/// Eigenvalues of the partial transpose (over mode b) on its nonzero support,
/// sorted descending.
pub fn partial_transpose_spectrum(state: &TwoModeFockSuperposition) -> Vec<f64> {
    let dim = state.total_photons() as usize + 1;
    let psi = state_vector(state, dim).expect("dim = N + 1 is always large enough");
    let rho = &psi * psi.adjoint();
    let mut pt = CMatrix::zeros(dim * dim, dim * dim);
    for a1 in 0..dim {
        for b1 in 0..dim {
            for a2 in 0..dim {
                for b2 in 0..dim {
                    pt[(a1 * dim + b2, a2 * dim + b1)] = rho[(a1 * dim + b1, a2 * dim + b2)];
                }
            }
        }
    }
    let mut eig: Vec<f64> = pt
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .filter(|l| l.abs() > 1e-12)
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    eig
}

/// `ln(1 + 2 Σ|negative eigenvalues|)` from [`partial_transpose_spectrum`].
pub fn log_negativity(state: &TwoModeFockSuperposition) -> f64 {
    let neg: f64 = partial_transpose_spectrum(state)
        .iter()
        .filter(|&&l| l < 0.0)
        .map(|l| -l)
        .sum();
    (1.0 + 2.0 * neg).ln()
}

/// A possibly unbounded interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
    pub const POSITIVE: Interval = Interval {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const NEGATIVE: Interval = Interval {
        lower: f64::NEG_INFINITY,
        upper: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x1: Interval,
    pub x2: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureEstimate {
    pub value: f64,
    pub error: f64,
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// `t ↦ (x, dx/dt)`.
type Substitution = Box<dyn Fn(f64) -> (f64, f64)>;

/// Maps an interval onto a finite parameter range plus a Jacobian-weighted integrand.
fn finite_map(iv: Interval) -> (f64, f64, Substitution) {
    match (iv.lower.is_finite(), iv.upper.is_finite()) {
        (true, true) => (iv.lower, iv.upper, Box::new(|t| (t, 1.0))),
        (true, false) => {
            let a = iv.lower;
            // x = a + t/(1-t), t in [0,1)
            (
                0.0,
                1.0,
                Box::new(move |t| (a + t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t)))),
            )
        }
        (false, true) => {
            let b = iv.upper;
            (
                0.0,
                1.0,
                Box::new(move |t| (b - t / (1.0 - t), 1.0 / ((1.0 - t) * (1.0 - t)))),
            )
        }
        (false, false) => (
            -1.0,
            1.0,
            // x = t/(1-t²)
            Box::new(|t| {
                let d = 1.0 - t * t;
                (t / d, (1.0 + t * t) / (d * d))
            }),
        ),
    }
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * KRONROD_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for (i, &node) in GK_NODES[..7].iter().enumerate() {
        let dx = half * node;
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

const MAX_SUBDIVISIONS: usize = 2000;

/// Adaptive 1-D Gauss–Kronrod on a possibly unbounded interval.
pub fn integrate_1d(f: &dyn Fn(f64) -> f64, iv: Interval, tolerance: f64) -> Result<QuadratureEstimate, OracleError> {
    let (a, b, map) = finite_map(iv);
    let g = |t: f64| {
        let (x, jac) = map(t);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    let mut pieces: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gk15(&g, a, b);
    pieces.push((a, b, v, e));
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        if total_err <= tolerance {
            break;
        }
        if pieces.len() >= MAX_SUBDIVISIONS {
            return Err(OracleError::NoConvergence {
                achieved: total_err,
                tolerance,
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&g, lo, mid);
        let (v2, e2) = gk15(&g, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
    Ok(QuadratureEstimate {
        value: pieces.iter().map(|p| p.2).sum(),
        error: pieces.iter().map(|p| p.3).sum(),
    })
}

/// Nested adaptive quadrature of `f(x1, x2)` over a rectangular region.
pub fn numeric_quadrature(
    f: &dyn Fn(f64, f64) -> f64,
    region: Region,
    tolerance: f64,
) -> Result<QuadratureEstimate, OracleError> {
    let inner_tol = tolerance * 1e-2;
    let failure = std::cell::Cell::new(None::<OracleError>);
    let inner_err = std::cell::Cell::new(0.0f64);
    let outer = |x1: f64| -> f64 {
        match integrate_1d(&|x2| f(x1, x2), region.x2, inner_tol) {
            Ok(q) => {
                inner_err.set(inner_err.get().max(q.error));
                q.value
            }
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let est = integrate_1d(&outer, region.x1, tolerance * 0.5)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(QuadratureEstimate {
        value: est.value,
        error: est.error + inner_err.get(),
    })
}
