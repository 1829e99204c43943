//! Hermite and associated Laguerre polynomials, Gaussian moments, factorials
//! and displaced Fock-state overlaps.
//!
//! Point evaluation goes through three-term recurrences. Where a polynomial has
//! to be integrated against a Gaussian weight it is expanded into monomial
//! coefficients instead, so that half-range and full-range integrals become
//! finite sums over [`half_gaussian_moment`].

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

/// Largest Hermite degree accepted by [`hermite`] and [`hermite_coefficients`].
pub const MAX_HERMITE_DEGREE: usize = 64;

/// Largest moment order held in the [`half_gaussian_moment`] table.
pub const MAX_MOMENT_ORDER: usize = 128;

/// Factorials up to this argument are exact in `f64`.
const EXACT_FACTORIAL_LIMIT: u32 = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialFunctionError {
    #[error("polynomial degree {degree} exceeds the configured maximum {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("associated Laguerre L_{n}^({order}) needs n >= |order| for negative orders")]
    InvalidLaguerreOrder { n: usize, order: i64 },

    #[error("Gaussian moment of order {order} is beyond the tabulated range {max}")]
    MomentOutOfRange { order: usize, max: usize },

    #[error("displaced Fock overlap expects n1 >= n2, got n1 = {n1}, n2 = {n2}")]
    OverlapOrdering { n1: usize, n2: usize },
}

/// Monomial coefficients of a real polynomial; index `k` holds the coefficient of `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialCoefficients {
    coefficients: Vec<f64>,
}

impl PolynomialCoefficients {
    /// Builds a polynomial, trimming trailing zero coefficients so that the
    /// leading coefficient is nonzero (the zero polynomial keeps a single `0.0`).
    pub fn new(mut coefficients: Vec<f64>) -> Self {
        while coefficients.len() > 1 && *coefficients.last().unwrap() == 0.0 {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0.0);
        }
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.len() == 1 && self.coefficients[0] == 0.0
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `∫_0^∞ p(x) e^{-x²} dx`.
    pub fn half_range_gaussian_integral(&self) -> Result<f64, SpecialFunctionError> {
        let mut sum = 0.0;
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c != 0.0 {
                sum += c * half_gaussian_moment(k)?;
            }
        }
        Ok(sum)
    }

    /// `∫_{-∞}^0 p(x) e^{-x²} dx`.
    pub fn negative_half_range_gaussian_integral(&self) -> Result<f64, SpecialFunctionError> {
        let mut sum = 0.0;
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c != 0.0 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * c * half_gaussian_moment(k)?;
            }
        }
        Ok(sum)
    }

    /// `∫_{-∞}^∞ p(x) e^{-x²} dx`.
    pub fn full_range_gaussian_integral(&self) -> Result<f64, SpecialFunctionError> {
        let mut sum = 0.0;
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c != 0.0 {
                sum += c * full_gaussian_moment(k)?;
            }
        }
        Ok(sum)
    }
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> Result<f64, SpecialFunctionError> {
    if n > MAX_HERMITE_DEGREE {
        return Err(SpecialFunctionError::DegreeOverflow {
            degree: n,
            max: MAX_HERMITE_DEGREE,
        });
    }
    Ok(hermite_unchecked(n, x))
}

pub(crate) fn hermite_unchecked(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial expansion of `H_n`, built from the same recurrence as [`hermite`].
pub fn hermite_coefficients(n: usize) -> Result<PolynomialCoefficients, SpecialFunctionError> {
    if n > MAX_HERMITE_DEGREE {
        return Err(SpecialFunctionError::DegreeOverflow {
            degree: n,
            max: MAX_HERMITE_DEGREE,
        });
    }
    let mut prev = vec![1.0];
    if n == 0 {
        return Ok(PolynomialCoefficients::new(prev));
    }
    let mut cur = vec![0.0, 2.0];
    for k in 1..n {
        let mut next = vec![0.0; k + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2.0 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    Ok(PolynomialCoefficients::new(cur))
}

/// Associated Laguerre polynomial `L_n^{(order)}(x)`.
///
/// Non-negative orders use the three-term recurrence. Negative orders are only
/// defined here for `n >= |order|` and are summed from the explicit series
/// `Σ_i (-1)^i C(n+order, n-i) x^i / i!`, where binomials with an upper index
/// below the lower one vanish.
pub fn assoc_laguerre(n: usize, order: i64, x: f64) -> Result<f64, SpecialFunctionError> {
    if order < 0 {
        if (n as i64) < -order {
            return Err(SpecialFunctionError::InvalidLaguerreOrder { n, order });
        }
        return Ok(assoc_laguerre_series(n, order, x));
    }
    Ok(laguerre_recurrence(n, order as f64, x))
}

pub(crate) fn laguerre_recurrence(n: usize, order: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + order - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + order - x) * cur - (kf + order) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit power series for `L_n^{(order)}(x)`. Requires `n + order >= 0`.
pub(crate) fn assoc_laguerre_series(n: usize, order: i64, x: f64) -> f64 {
    let top = n as i64 + order;
    debug_assert!(top >= 0);
    let top = top as u32;
    let mut sum = 0.0;
    for i in 0..=n {
        let lower = (n - i) as u32;
        let b = binomial(top, lower);
        if b == 0.0 {
            continue;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * b * x.powi(i as i32) / factorial(i as u32);
    }
    sum
}

/// `n!` as a float: exact products up to 20, `exp(ln Γ(n+1))` beyond.
pub fn factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_LIMIT {
        (1..=n as u64).product::<u64>() as f64
    } else {
        ln_factorial(n).exp()
    }
}

pub fn ln_factorial(n: u32) -> f64 {
    if n <= EXACT_FACTORIAL_LIMIT {
        factorial(n).ln()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_FACTORIAL_LIMIT {
        let k = k.min(n - k) as u64;
        let n = n as u64;
        let mut acc: u64 = 1;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc as f64
    } else {
        (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
    }
}

fn moment_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut m = vec![0.0; MAX_MOMENT_ORDER + 1];
        m[0] = PI.sqrt() / 2.0;
        m[1] = 0.5;
        for k in 2..=MAX_MOMENT_ORDER {
            m[k] = 0.5 * (k as f64 - 1.0) * m[k - 2];
        }
        m
    })
}

/// `∫_0^∞ x^k e^{-x²} dx = Γ((k+1)/2) / 2`.
pub fn half_gaussian_moment(k: usize) -> Result<f64, SpecialFunctionError> {
    moment_table()
        .get(k)
        .copied()
        .ok_or(SpecialFunctionError::MomentOutOfRange {
            order: k,
            max: MAX_MOMENT_ORDER,
        })
}

/// `∫_{-∞}^∞ x^k e^{-x²} dx`; zero for odd `k`.
pub fn full_gaussian_moment(k: usize) -> Result<f64, SpecialFunctionError> {
    let half = half_gaussian_moment(k)?;
    Ok(if k.is_multiple_of(2) { 2.0 * half } else { 0.0 })
}

/// `⟨-α, n1 | α, n2⟩` with `|α, n⟩ = D(α)|n⟩`, for `n1 >= n2`.
///
/// Equal to `⟨n1| D(2α) |n2⟩ = e^{-2|α|²} √(n2!/n1!) (2α)^{n1-n2} L_{n2}^{(n1-n2)}(4|α|²)`.
/// The Laguerre degree is the *smaller* occupation; the truncated-matrix oracle
/// pins this convention.
pub fn displaced_fock_overlap(n1: usize, n2: usize, alpha: Complex64) -> Result<Complex64, SpecialFunctionError> {
    if n1 < n2 {
        return Err(SpecialFunctionError::OverlapOrdering { n1, n2 });
    }
    let r2 = alpha.norm_sqr();
    let k = n1 - n2;
    let ratio = (0.5 * (ln_factorial(n2 as u32) - ln_factorial(n1 as u32))).exp();
    let lag = laguerre_recurrence(n2, k as f64, 4.0 * r2);
    Ok((2.0 * alpha).powu(k as u32) * ((-2.0 * r2).exp() * ratio * lag))
}
