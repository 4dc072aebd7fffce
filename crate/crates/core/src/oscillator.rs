//! Truncated q-deformed oscillators at a root of unity.
//!
//! Oscillator `i` acts on a `k`-dimensional Fock space with basis
//! `|0), ..., |k−1)`:
//!
//! ```text
//! a_{i±} |n) = ([n + 1/2 ± 1/2]_q)^{α_{i±}} |n ± 1),   α_{i±} = (1 ± (−1)^i) / 2
//! a_{i+} |k−1) = 0,   a_{i−} |0) = 0,   N_i |n) = n |n)
//! ```
//!
//! so `a_{1+}` and `a_{2−}` are bare shifts while `a_{1−}` and `a_{2+}` carry
//! the q-number weights. Both triplets satisfy
//! `a_− a_+ − q a_+ a_− = 1`, `(a_±)^k = 0` and `[N, a_±] = ±a_±`.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::qcore::{matrix_power, q_factorial, q_number, Complex, ComplexMatrix, QContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OscIndex {
    One,
    Two,
}

impl TryFrom<u8> for OscIndex {
    type Error = crate::error::Error;

    fn try_from(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(domain(format!("oscillator index must be 1 or 2, got {i}"))),
        }
    }
}

impl OscIndex {
    /// The exponents `(α_{i+}, α_{i−})`.
    pub fn exponents(self) -> (u32, u32) {
        match self {
            Self::One => (0, 1),
            Self::Two => (1, 0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscTriplet {
    pub index: OscIndex,
    pub k: usize,
    pub a_minus: ComplexMatrix,
    pub a_plus: ComplexMatrix,
    pub number: ComplexMatrix,
}

impl OscTriplet {
    pub fn ladder(&self, sign: Sign) -> &ComplexMatrix {
        match sign {
            Sign::Plus => &self.a_plus,
            Sign::Minus => &self.a_minus,
        }
    }
}

/// The phase `φ_r = π (k − 1) r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseParams {
    pub r: f64,
    pub k: usize,
    pub phi: f64,
}

impl PhaseParams {
    pub fn new(r: f64, k: usize) -> Self {
        Self {
            r,
            k,
            phi: PI * (k as f64 - 1.0) * r,
        }
    }

    /// `exp(i φ_r / 2)`.
    pub fn half_phase(&self) -> Complex {
        Complex::from_polar(1.0, 0.5 * self.phi)
    }

    /// `exp(i φ_r)`.
    pub fn full_phase(&self) -> Complex {
        Complex::from_polar(1.0, self.phi)
    }
}

pub fn build_oscillator(index: OscIndex, ctx: &QContext) -> OscTriplet {
    let k = ctx.k();
    let (alpha_plus, alpha_minus) = index.exponents();
    let zero = Complex::new(0.0, 0.0);
    // [n + s ± 1/2]_q with s = 1/2
    let weight = |n: usize, shift: f64, alpha: u32| -> Complex {
        if alpha == 0 {
            Complex::new(1.0, 0.0)
        } else {
            q_number(n as f64 + 0.5 + shift, ctx)
        }
    };
    let a_plus = ComplexMatrix::from_fn(k, |row, col| {
        if row == col + 1 {
            weight(col, 0.5, alpha_plus)
        } else {
            zero
        }
    });
    let a_minus = ComplexMatrix::from_fn(k, |row, col| {
        if col == row + 1 {
            weight(col, -0.5, alpha_minus)
        } else {
            zero
        }
    });
    let number = ComplexMatrix::from_diag(
        &(0..k)
            .map(|n| Complex::new(n as f64, 0.0))
            .collect::<Vec<_>>(),
    );
    OscTriplet {
        index,
        k,
        a_minus,
        a_plus,
        number,
    }
}

/// `s_{i±} = a_{i±} + e^{iφ_r/2} ([k−1]_q!)^{-1} (a_{i∓})^{k−1}`.
pub fn build_shifted(
    osc: &OscTriplet,
    sign: Sign,
    params: &PhaseParams,
    ctx: &QContext,
) -> Result<ComplexMatrix> {
    if osc.k != ctx.k() || params.k != ctx.k() {
        return Err(domain(format!(
            "oscillator (k = {}), phase (k = {}) and context (k = {}) disagree",
            osc.k,
            params.k,
            ctx.k()
        )));
    }
    let opposite = match sign {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    };
    let corner = matrix_power(osc.ladder(opposite), (ctx.k() - 1) as u32);
    let coeff = params.half_phase() / q_factorial(ctx.k() - 1, ctx)?;
    Ok(osc.ladder(sign) + &corner.scale(coeff))
}
