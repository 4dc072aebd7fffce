//! Root-of-unity arithmetic, q-numbers and the dense complex kernel.

mod eig;
mod matrix;

use std::f64::consts::PI;

pub use eig::{eig_unitary, Eigenpair};
pub use matrix::{
    commutator, hermiticity_residual, hs_inner, inner, matmul, matrix_power, max_abs_diff, norm,
    phase_aligned_diff, trace, unitarity_residual, Complex, ComplexMatrix,
};

use crate::error::{domain, Result};

/// Tolerance for verification predicates.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Tolerance for algebraic identity residuals.
pub const IDENTITY_TOL: f64 = 1e-12;

/// `exp(2πi/k)`.
pub fn root_of_unity(k: usize) -> Result<Complex> {
    if k < 2 {
        return Err(domain(format!("root of unity needs k >= 2, got {k}")));
    }
    Ok(Complex::from_polar(1.0, 2.0 * PI / k as f64))
}

/// The deformation parameter `q = exp(2πi/k)` together with a tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QContext {
    k: usize,
    q: Complex,
    tol: f64,
}

impl QContext {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_tol(k, DEFAULT_TOL)
    }

    pub fn with_tol(k: usize, tol: f64) -> Result<Self> {
        let q = root_of_unity(k)?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { k, q, tol })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> Complex {
        self.q
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `q^x` on the principal branch, `exp(2πi x / k)`.
    pub fn q_pow(&self, x: f64) -> Complex {
        q_pow(self.k, x)
    }
}

/// `exp(2πi x / d)`; the principal-branch power of the `d`-th root of unity.
pub fn q_pow(d: usize, x: f64) -> Complex {
    Complex::from_polar(1.0, 2.0 * PI * x / d as f64)
}

/// `[x]_q = (1 − q^x)/(1 − q)`.
pub fn q_number(x: f64, ctx: &QContext) -> Complex {
    let one = Complex::new(1.0, 0.0);
    (one - ctx.q_pow(x)) / (one - ctx.q)
}

/// `[n]_q! = [1]_q [2]_q ⋯ [n]_q`, with `[0]_q! = 1`.
///
/// Only `n < k` is accepted: `[k]_q = 0` would make the factorial vanish.
pub fn q_factorial(n: usize, ctx: &QContext) -> Result<Complex> {
    if n >= ctx.k {
        return Err(domain(format!(
            "q-factorial [{n}]_q! vanishes at k = {}; need n < k",
            ctx.k
        )));
    }
    Ok((1..=n).map(|i| q_number(i as f64, ctx)).product())
}
