//! Dense square complex matrices.
//!
//! Entries follow the ket convention `M[(m, n)] = (m| A |n)`: kets are
//! column vectors and `apply` computes `A|v)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(dim: usize, entries: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("matrix dimension must be at least 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::NonFinite(pos / dim, pos % dim));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be at least 1");
        Self {
            dim,
            entries: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        assert!(dim > 0, "matrix dimension must be at least 1");
        let mut entries = Vec::with_capacity(dim * dim);
        for row in 0..dim {
            for col in 0..dim {
                let z = f(row, col);
                debug_assert!(z.is_finite(), "non-finite entry at ({row}, {col})");
                entries.push(z);
            }
        }
        Self { dim, entries }
    }

    pub fn from_diag(diag: &[Complex]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex>]) -> Result<Self> {
        let dim = columns.len();
        if columns.iter().any(|c| c.len() != dim) {
            return Err(Error::Domain("columns must form a square matrix".into()));
        }
        let mut entries = vec![Complex::new(0.0, 0.0); dim * dim];
        for (col, v) in columns.iter().enumerate() {
            for (row, &z) in v.iter().enumerate() {
                entries[row * dim + col] = z;
            }
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Complex> {
        (0..self.dim).map(|row| self[(row, col)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, z: Complex) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| e * z).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus; the residual norm used throughout.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(
            v.len(),
            self.dim,
            "vector length must match matrix dimension"
        );
        (0..self.dim)
            .map(|row| {
                self.entries[row * self.dim..(row + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product `self ⊗ rhs`, row index `i * rhs.dim + k`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let n = rhs.dim;
        Self::from_fn(self.dim * n, |r, c| {
            self[(r / n, c / n)] * rhs[(r % n, c % n)]
        })
    }

    /// Number of entries with modulus above `tol`.
    pub fn count_nonzero(&self, tol: f64) -> usize {
        self.entries.iter().filter(|z| z.norm() > tol).count()
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for l in 0..n {
                let a = self.entries[i * n + l];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = &rhs.entries[l * n..(l + 1) * n];
                let out_row = &mut out.entries[i * n..(i + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn check_dims(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(a.dim, b.dim));
    }
    Ok(())
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(a.mul_unchecked(b))
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_dims(a, b)?;
    Ok(&a.mul_unchecked(b) - &b.mul_unchecked(a))
}

pub fn trace(a: &ComplexMatrix) -> Complex {
    a.trace()
}

/// Repeated squaring; `matrix_power(A, 0)` is the identity.
pub fn matrix_power(a: &ComplexMatrix, exp: u32) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(a.dim);
    let mut base = a.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_unchecked(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_unchecked(&base);
        }
    }
    result
}

/// Hilbert-Schmidt inner product `tr(B† A)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex> {
    check_dims(a, b)?;
    Ok(a.entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| y.conj() * x)
        .sum())
}

/// `‖A†A − I‖_max`.
pub fn unitarity_residual(a: &ComplexMatrix) -> f64 {
    (&a.adjoint().mul_unchecked(a) - &ComplexMatrix::identity(a.dim)).max_abs()
}

/// `‖A − A†‖_max`.
pub fn hermiticity_residual(a: &ComplexMatrix) -> f64 {
    (a - &a.adjoint()).max_abs()
}

/// `⟨u|v⟩`, antilinear in the first argument.
pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    assert_eq!(u.len(), v.len(), "vector length mismatch");
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest componentwise modulus of `u - v`.
pub fn max_abs_diff(u: &[Complex], v: &[Complex]) -> f64 {
    assert_eq!(u.len(), v.len(), "vector length mismatch");
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Distance between `u` and `v` after removing the best global phase.
pub fn phase_aligned_diff(u: &[Complex], v: &[Complex]) -> f64 {
    let ov = inner(v, u);
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        Complex::new(1.0, 0.0)
    };
    let aligned: Vec<Complex> = v.iter().map(|z| z * phase).collect();
    max_abs_diff(u, &aligned)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        assert!(row < self.dim && col < self.dim, "index out of range");
        &self.entries[row * self.dim + col]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (row, col): (usize, usize)) -> &mut Complex {
        assert!(row < self.dim && col < self.dim, "index out of range");
        &mut self.entries[row * self.dim + col]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(Complex::new(-1.0, 0.0))
    }
}

/// Panics on dimension mismatch; use [`matmul`] for a checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in 0..self.dim {
            let cells: Vec<String> = (0..self.dim)
                .map(|col| {
                    let z = self[(row, col)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
