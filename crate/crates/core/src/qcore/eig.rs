//! Eigendecomposition of small unitary matrices.
//!
//! For unitary `U` and a rotation angle `γ`, the Hermitian matrix
//! `H = (e^{-iγ} U + e^{iγ} U†) / 2` has eigenvalues `cos(θ − γ)` over the
//! spectrum `e^{iθ}` of `U`, and shares its eigenvectors. Whenever `H` has a
//! simple spectrum its eigenvectors are eigenvectors of `U`. The angle is
//! picked from a fixed candidate list to maximize the smallest gap of `H`,
//! and the eigenvalues of `U` are recovered as Rayleigh quotients.
//!
//! The Hermitian eigensolver is nalgebra's. Its unshifted Schur iteration is
//! avoided: it stalls on cyclic shifts, whose eigenvalues all share modulus 1.

use std::f64::consts::{PI, TAU};

use nalgebra::{linalg::SymmetricEigen, DMatrix};

use super::matrix::{inner, norm, unitarity_residual, Complex, ComplexMatrix};
use crate::error::{Error, Result};

const CANDIDATE_ROTATIONS: usize = 24;
const MAX_EIGEN_ITERATIONS: usize = 10_000;
const ARG_WRAP_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: Complex,
    pub vector: Vec<Complex>,
}

impl Eigenpair {
    /// Principal argument in `[0, 2π)`.
    pub fn arg(&self) -> f64 {
        principal_arg(self.value)
    }
}

fn principal_arg(z: Complex) -> f64 {
    let a = z.arg();
    let a = if a < 0.0 { a + TAU } else { a };
    // arguments a rounding error below 2π sort with 0
    if a >= TAU - ARG_WRAP_EPS {
        0.0
    } else {
        a
    }
}

/// Diagonalizes a unitary matrix with non-degenerate spectrum.
///
/// Eigenpairs come back sorted by principal argument in `[0, 2π)`. Each
/// eigenvector has unit norm and its first component of modulus above
/// `tol` is real and positive.
pub fn eig_unitary(u: &ComplexMatrix, tol: f64) -> Result<Vec<Eigenpair>> {
    let d = u.dim();
    let unit_res = unitarity_residual(u);
    if unit_res > tol {
        return Err(Error::NotUnitary(unit_res));
    }

    let q = hermitian_eigenvectors(u)?;

    let mut pairs = Vec::with_capacity(d);
    for col in 0..d {
        let mut v: Vec<Complex> = q.column(col).iter().copied().collect();
        let n = norm(&v);
        v.iter_mut().for_each(|z| *z /= n);
        let uv = u.apply(&v);
        let value = inner(&v, &uv);
        fix_phase(&mut v, tol);
        pairs.push(Eigenpair { value, vector: v });
    }

    pairs.sort_by(|a, b| a.arg().total_cmp(&b.arg()));

    for i in 0..d {
        for j in i + 1..d {
            let sep = (pairs[i].value - pairs[j].value).norm();
            if sep < 10.0 * tol {
                return Err(Error::Degenerate(i, j, sep));
            }
        }
    }

    for p in &pairs {
        if (p.value.norm() - 1.0).abs() > tol {
            return Err(Error::Eigensolver(format!(
                "eigenvalue {} is off the unit circle",
                p.value
            )));
        }
        let uv = u.apply(&p.vector);
        let residual = uv
            .iter()
            .zip(&p.vector)
            .map(|(a, b)| (a - p.value * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > tol {
            return Err(Error::Eigensolver(format!(
                "eigenpair residual {residual:e} exceeds {tol:e}"
            )));
        }
    }
    Ok(pairs)
}

/// Eigenvectors (as columns) of the best-separated Hermitian rotation of `u`.
fn hermitian_eigenvectors(u: &ComplexMatrix) -> Result<DMatrix<Complex>> {
    let d = u.dim();
    let mut best: Option<(f64, DMatrix<Complex>)> = None;
    for step in 0..CANDIDATE_ROTATIONS {
        // irrational stride so no candidate sits on a rational multiple of π
        let gamma = (step as f64 * 0.618_033_988_749_895 * PI).rem_euclid(TAU);
        let rot = Complex::from_polar(1.0, -gamma);
        let h = DMatrix::<Complex>::from_fn(d, d, |r, c| {
            (rot * u[(r, c)] + rot.conj() * u[(c, r)].conj()) * 0.5
        });
        let Some(eig) = SymmetricEigen::try_new(h, f64::EPSILON, MAX_EIGEN_ITERATIONS) else {
            continue;
        };
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        let gap = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, eig.eigenvectors));
        }
    }
    best.map(|(_, v)| v)
        .ok_or_else(|| Error::Eigensolver("Hermitian iteration did not converge".into()))
}

fn fix_phase(v: &mut [Complex], tol: f64) {
    if let Some(&lead) = v.iter().find(|z| z.norm() > tol) {
        let phase = lead.conj() / lead.norm();
        v.iter_mut().for_each(|z| *z *= phase);
        // exact zero imaginary part on the pivot
        if let Some(z) = v.iter_mut().find(|z| z.norm() > tol) {
            *z = Complex::new(z.norm(), 0.0);
        }
    }
}
