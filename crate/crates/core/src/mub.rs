//! Eigenbases of the `{J², U_r}` scheme and mutually unbiased bases.
//!
//! On `ε(j)` with `d = 2j + 1` and `q = exp(2πi/d)`, the common eigenvectors
//! of `J²` and `U_r` are discrete Fourier vectors
//!
//! ```text
//! |j n_α; r⟩ = d^{-1/2} Σ_m q^{α m} |j m⟩,   α = −j r + n_α,   U_r |j n_α; r⟩ = q^{−α} |j n_α; r⟩
//! ```
//!
//! For prime `d`, the spherical basis together with the eigenbases of the
//! Weyl-Pauli operators `V_ra = U_r Z^a` (`a = 0..d−1`) is a complete set of
//! `d + 1` MUBs. For odd prime `d` the quadratic-phase vectors
//! `q^{a (j+m)² + n_α m}` give another complete set.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::oscillator::PhaseParams;
use crate::qcore::{eig_unitary, matrix_power, q_pow, Complex, ComplexMatrix};
use crate::su2::{ur_on_subspace, Spin};

/// Largest dimension accepted by the prime-dimension constructions.
pub const MAX_PRIME_DIM: usize = 100;

/// Distance to the lattice `(2j+1)Z` below which the overlap formula uses
/// its `0/0` limit.
const OVERLAP_LIMIT_WINDOW: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum BasisLabel {
    Spherical,
    Fourier { r: f64 },
    WeylEig { r: f64, a: usize },
    Gauss { a: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Spherical => write!(f, "spherical"),
            Self::Fourier { r } => write!(f, "fourier(r={r})"),
            Self::WeylEig { r, a } => write!(f, "weyl_eig(r={r},a={a})"),
            Self::Gauss { a } => write!(f, "gauss(a={a})"),
        }
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || domain(format!("unrecognized basis label {s:?}"));
        if s == "spherical" {
            return Ok(Self::Spherical);
        }
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut r = None;
        let mut a = None;
        for field in body.split(',') {
            match field.split_once('=').ok_or_else(bad)? {
                ("r", v) => r = Some(v.parse::<f64>().map_err(|_| bad())?),
                ("a", v) => a = Some(v.parse::<usize>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        match (head, r, a) {
            ("fourier", Some(r), None) => Ok(Self::Fourier { r }),
            ("weyl_eig", Some(r), Some(a)) => Ok(Self::WeylEig { r, a }),
            ("gauss", None, Some(a)) => Ok(Self::Gauss { a }),
            _ => Err(bad()),
        }
    }
}

/// An ordered set of `d` vectors of length `d` with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledBasis {
    pub label: BasisLabel,
    pub vectors: Vec<Vec<Complex>>,
}

impl LabeledBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `α = −j r + n_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaIndex {
    pub n_alpha: usize,
    pub r: f64,
    pub alpha: f64,
}

impl AlphaIndex {
    pub fn new(spin: Spin, r: f64, n_alpha: usize) -> Result<Self> {
        check_index(spin, n_alpha, "n_alpha")?;
        Ok(Self {
            n_alpha,
            r,
            alpha: -spin.j() * r + n_alpha as f64,
        })
    }
}

fn check_index(spin: Spin, n: usize, name: &str) -> Result<()> {
    if n > spin.two_j() {
        return Err(domain(format!(
            "{name} = {n} out of range 0..={}",
            spin.two_j()
        )));
    }
    Ok(())
}

/// `|j n_α; r⟩` in the ascending-`m` spherical basis.
pub fn fourier_vector(spin: Spin, n_alpha: usize, r: f64) -> Result<Vec<Complex>> {
    let alpha = AlphaIndex::new(spin, r, n_alpha)?.alpha;
    let d = spin.dim();
    let norm = (d as f64).sqrt().recip();
    Ok(spin
        .m_values()
        .map(|m| q_pow(d, alpha * m) * norm)
        .collect())
}

/// The standard basis `s(j)`.
pub fn spherical_basis(spin: Spin) -> LabeledBasis {
    let d = spin.dim();
    let vectors = (0..d)
        .map(|i| {
            let mut v = vec![Complex::new(0.0, 0.0); d];
            v[i] = Complex::new(1.0, 0.0);
            v
        })
        .collect();
    LabeledBasis {
        label: BasisLabel::Spherical,
        vectors,
    }
}

/// `b_r(j) = { |j n_α; r⟩ : n_α = 0..2j }`.
pub fn basis_br(spin: Spin, r: f64) -> LabeledBasis {
    let vectors = (0..spin.dim())
        .map(|n| fourier_vector(spin, n, r).expect("index in range"))
        .collect();
    LabeledBasis {
        label: BasisLabel::Fourier { r },
        vectors,
    }
}

/// `⟨j n_α; r | j n_β; s⟩` from the closed sine-ratio form
/// `sin((α−β)π) / ((2j+1) sin((α−β)π/(2j+1)))`.
///
/// The ratio is evaluated after reducing `α − β = t(2j+1) + δ`, which turns it
/// into `(−1)^{t(2j+2)} sin(πδ) / sin(πδ/(2j+1))`; at the lattice points
/// (`|δ|` below 1e−9) the `0/0` limit `(−1)^{2jt}` is returned.
pub fn overlap_closed(
    spin: Spin,
    r: f64,
    n_alpha: usize,
    s: f64,
    n_beta: usize,
) -> Result<Complex> {
    let alpha = AlphaIndex::new(spin, r, n_alpha)?.alpha;
    let beta = AlphaIndex::new(spin, s, n_beta)?.alpha;
    let d = spin.dim() as f64;
    let x = alpha - beta;
    let t = (x / d).round();
    let delta = x - t * d;
    let sign = if (t as i64 * (spin.dim() as i64 + 1)).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let value = if delta.abs() < OVERLAP_LIMIT_WINDOW {
        sign
    } else {
        sign * (PI * delta).sin() / (d * (PI * delta / d).sin())
    };
    Ok(Complex::new(value, 0.0))
}

/// Output of [`result3_alias`]: `|j n_β; s⟩ = sign · |j n_α; r⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alias {
    pub s: f64,
    pub sign: f64,
}

/// The parameter `s = r + (n_β − n_α)/j + ((2j+1)/j) k` at which the vector
/// `|j n_β; s⟩` coincides with `(−1)^{2jk} |j n_α; r⟩`.
pub fn result3_alias(
    spin: Spin,
    r: f64,
    n_alpha: usize,
    n_beta: usize,
    k_ab: i64,
) -> Result<Alias> {
    check_index(spin, n_alpha, "n_alpha")?;
    check_index(spin, n_beta, "n_beta")?;
    let j = spin.j();
    let s = r + (n_beta as f64 - n_alpha as f64) / j + (spin.dim() as f64 / j) * k_ab as f64;
    let sign = if (spin.two_j() as i64 * k_ab).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(Alias { s, sign })
}

/// `[U_s, U_r] = (e^{iφ_s} − e^{iφ_r}) (|j,−j⟩⟨j,j−1| − |j,−j+1⟩⟨j,j|)`.
pub fn commutator_us_ur(spin: Spin, s: f64, r: f64) -> ComplexMatrix {
    let d = spin.dim();
    let coeff = PhaseParams::new(s, d).full_phase() - PhaseParams::new(r, d).full_phase();
    let mut out = ComplexMatrix::zeros(d);
    out[(0, d - 2)] += coeff;
    out[(1, d - 1)] -= coeff;
    out
}

/// Whether `U_s` and `U_r` commute, i.e. `s − r ∈ Z/j`, judged with `tol` on
/// the distance of `j(s − r)` to the nearest integer.
pub fn commute_condition(spin: Spin, s: f64, r: f64, tol: f64) -> bool {
    let x = spin.j() * (s - r);
    (x - x.round()).abs() <= tol
}

/// `Z |j m⟩ = q^{−m} |j m⟩`.
pub fn phase_operator_z(spin: Spin) -> ComplexMatrix {
    let d = spin.dim();
    let diag: Vec<Complex> = spin.m_values().map(|m| q_pow(d, -m)).collect();
    ComplexMatrix::from_diag(&diag)
}

/// `V_ra = U_r Z^a` on `ε(j)`.
pub fn weyl_operator_v(spin: Spin, r: f64, a: usize) -> Result<ComplexMatrix> {
    check_index(spin, a, "a")?;
    let u = ur_on_subspace(spin, r)?;
    Ok(&u * &matrix_power(&phase_operator_z(spin), a as u32))
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    (2..)
        .take_while(|p| p * p <= n)
        .all(|p| !n.is_multiple_of(p))
}

fn require_prime(d: usize) -> Result<()> {
    if d > MAX_PRIME_DIM {
        return Err(domain(format!(
            "dimension {d} exceeds the supported maximum {MAX_PRIME_DIM}"
        )));
    }
    if !is_prime(d) {
        return Err(domain(format!(
            "dimension {d} is not prime; the Weyl-Pauli MUB construction needs 2j+1 prime"
        )));
    }
    Ok(())
}

/// Eigenbasis of `V_ra`, ordered by eigenvalue argument in `[0, 2π)`.
pub fn weyl_eigenbasis(spin: Spin, r: f64, a: usize, tol: f64) -> Result<LabeledBasis> {
    let v = weyl_operator_v(spin, r, a)?;
    let vectors = eig_unitary(&v, tol)?
        .into_iter()
        .map(|p| p.vector)
        .collect();
    Ok(LabeledBasis {
        label: BasisLabel::WeylEig { r, a },
        vectors,
    })
}

/// `s(j)` followed by the eigenbases of `V_ra`, `a = 0..2j`, for prime `2j+1`.
pub fn mub_set_prime(spin: Spin, r: f64, tol: f64) -> Result<Vec<LabeledBasis>> {
    require_prime(spin.dim())?;
    weyl_bases_unchecked(spin, r, tol)
}

/// [`mub_set_prime`] without the primality gate. The result is only a MUB
/// set when `2j+1` is prime; exposed for negative controls.
#[doc(hidden)]
pub fn weyl_bases_unchecked(spin: Spin, r: f64, tol: f64) -> Result<Vec<LabeledBasis>> {
    let mut bases = vec![spherical_basis(spin)];
    for a in 0..spin.dim() {
        bases.push(weyl_eigenbasis(spin, r, a, tol)?);
    }
    Ok(bases)
}

fn require_odd_prime(d: usize) -> Result<()> {
    require_prime(d)?;
    if d.is_multiple_of(2) {
        return Err(domain(
            "the quadratic-phase construction needs an odd prime dimension",
        ));
    }
    Ok(())
}

/// `d^{-1/2} q^{a (j+m)² + n_α m}`: a Fourier-type vector with the
/// `m`-dependent parameter `r(m) = −a (j+m)² / (j m)`.
///
/// At `m = 0`, where `r(m)` itself is undefined, the exponent `−j r(m) m =
/// a (j+m)²` is continued to `a j²`.
pub fn gauss_vector(spin: Spin, a: usize, n_alpha: usize) -> Result<Vec<Complex>> {
    let d = spin.dim();
    require_odd_prime(d)?;
    check_index(spin, a, "a")?;
    check_index(spin, n_alpha, "n_alpha")?;
    let two_j = spin.two_j() as i64;
    let j = two_j / 2;
    let norm = (d as f64).sqrt().recip();
    Ok((0..=two_j)
        .map(|i| {
            let m = i - j;
            let ell = j + m;
            // integer exponent, reduced mod d before the float conversion
            let e = (a as i64 * ell * ell + n_alpha as i64 * m).rem_euclid(d as i64);
            q_pow(d, e as f64) * norm
        })
        .collect())
}

pub fn gauss_basis(spin: Spin, a: usize) -> Result<LabeledBasis> {
    let vectors = (0..spin.dim())
        .map(|n| gauss_vector(spin, a, n))
        .collect::<Result<_>>()?;
    Ok(LabeledBasis {
        label: BasisLabel::Gauss { a },
        vectors,
    })
}

/// `s(j)` followed by the quadratic-phase bases, `a = 0..2j`.
pub fn gauss_mub_set(spin: Spin) -> Result<Vec<LabeledBasis>> {
    require_odd_prime(spin.dim())?;
    let mut bases = vec![spherical_basis(spin)];
    for a in 0..spin.dim() {
        bases.push(gauss_basis(spin, a)?);
    }
    Ok(bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{commutator, hs_inner, inner, max_abs_diff, norm, phase_aligned_diff};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn spin(d: usize) -> Spin {
        Spin::from_dim(d).unwrap()
    }

    #[test]
    fn labels_round_trip() {
        for label in [
            BasisLabel::Spherical,
            BasisLabel::Fourier { r: 0.3 },
            BasisLabel::WeylEig { r: -1.25, a: 4 },
            BasisLabel::Gauss { a: 2 },
        ] {
            assert_eq!(label.to_string().parse::<BasisLabel>().unwrap(), label);
        }
        assert!("fourier(a=1)".parse::<BasisLabel>().is_err());
        assert!("bogus".parse::<BasisLabel>().is_err());
    }

    #[test]
    fn spin_half_fourier_vectors() {
        let half = spin(2);
        let v = fourier_vector(half, 0, 0.0).unwrap();
        assert!(max_abs_diff(&v, &[c(FRAC_1_SQRT_2, 0.0); 2]) < 1e-15);
        let rho = Complex::from_polar(1.0, PI / 4.0);
        let v = fourier_vector(half, 0, 1.0).unwrap();
        let expected = [rho * FRAC_1_SQRT_2, rho.inv() * FRAC_1_SQRT_2];
        assert!(max_abs_diff(&v, &expected) < 1e-15);
        assert!(fourier_vector(half, 2, 0.0).is_err());
    }

    #[test]
    fn fourier_components_are_flat_and_eigen() {
        for d in 2..=7 {
            let s = spin(d);
            for r in [0.0, 0.3, 1.0, -2.5] {
                let u = ur_on_subspace(s, r).unwrap();
                for n in 0..d {
                    let v = fourier_vector(s, n, r).unwrap();
                    assert!(v
                        .iter()
                        .all(|z| (z.norm() - (d as f64).sqrt().recip()).abs() < 1e-15));
                    assert!((norm(&v) - 1.0).abs() < 1e-14);
                    let alpha = AlphaIndex::new(s, r, n).unwrap().alpha;
                    let lam = q_pow(d, -alpha);
                    let uv = u.apply(&v);
                    let lv: Vec<Complex> = v.iter().map(|z| z * lam).collect();
                    assert!(max_abs_diff(&uv, &lv) < 1e-12, "d={d} r={r} n={n}");
                }
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let half = spin(2);
        assert!((overlap_closed(half, 0.3, 1, 0.3, 1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let z = overlap_closed(half, 0.0, 0, 1.0, 0).unwrap();
        assert!((z.norm() - FRAC_1_SQRT_2).abs() < 1e-15);
        // α − β = 1, not a multiple of 3
        let one = spin(3);
        assert!(overlap_closed(one, 0.0, 1, 0.0, 0).unwrap().norm() < 1e-15);
    }

    #[test]
    fn overlap_matches_direct_inner_product_near_lattice() {
        for d in 2..=6 {
            let s = spin(d);
            let j = s.j();
            for t in -2i32..=2 {
                for eps in [0.0, 1e-13, -1e-11, 1e-10, 3e-9, -1e-7, 1e-4] {
                    // choose s_par so that α − β = t d + eps with n_α = n_β = 0, r = 0
                    let s_par = (t as f64 * d as f64 + eps) / j;
                    let closed = overlap_closed(s, 0.0, 0, s_par, 0).unwrap();
                    let direct = inner(
                        &fourier_vector(s, 0, 0.0).unwrap(),
                        &fourier_vector(s, 0, s_par).unwrap(),
                    );
                    assert!((closed - direct).norm() < 1e-12, "d={d} t={t} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn alias_examples() {
        let half = spin(2);
        let a = result3_alias(half, 0.0, 0, 0, 0).unwrap();
        assert_eq!((a.s, a.sign), (0.0, 1.0));
        let a = result3_alias(half, 0.0, 0, 0, 1).unwrap();
        assert_eq!((a.s, a.sign), (4.0, -1.0));
        let v = fourier_vector(half, 0, a.s).unwrap();
        let w: Vec<Complex> = fourier_vector(half, 0, 0.0)
            .unwrap()
            .iter()
            .map(|z| -z)
            .collect();
        assert!(max_abs_diff(&v, &w) < 1e-12);
        for k_ab in -3..=3 {
            assert_eq!(result3_alias(spin(5), 0.2, 1, 3, k_ab).unwrap().sign, 1.0);
        }
    }

    #[test]
    fn closed_commutator_matches_matrices() {
        let one = spin(3);
        assert_eq!(commutator_us_ur(one, 0.4, 0.4).max_abs(), 0.0);
        let u0 = ur_on_subspace(one, 0.0).unwrap();
        let u1 = ur_on_subspace(one, 1.0).unwrap();
        assert!(commutator(&u1, &u0).unwrap().max_abs() < 1e-12);
        assert!(commute_condition(one, 1.0, 0.0, 1e-12));
        let uh = ur_on_subspace(one, 0.5).unwrap();
        let direct = commutator(&uh, &u0).unwrap();
        let closed = commutator_us_ur(one, 0.5, 0.0);
        assert!((&direct - &closed).max_abs() < 1e-12);
        assert_eq!(closed.count_nonzero(1e-12), 2);
        assert!(!commute_condition(one, 0.5, 0.0, 1e-12));
    }

    #[test]
    fn phase_operator_examples() {
        let z = phase_operator_z(spin(2));
        assert!((&z - &ComplexMatrix::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)])).max_abs() < 1e-15);
        let w = q_pow(3, 1.0);
        let z = phase_operator_z(spin(3));
        assert!((&z - &ComplexMatrix::from_diag(&[w, c(1.0, 0.0), w.inv()])).max_abs() < 1e-15);
    }

    #[test]
    fn weyl_rule_and_trace_special_case() {
        for d in 2..=6 {
            let s = spin(d);
            let z = phase_operator_z(s);
            for r in [0.0, 0.5, 1.0] {
                let u = ur_on_subspace(s, r).unwrap();
                assert_eq!(weyl_operator_v(s, r, 0).unwrap(), u);
                for a in 0..d {
                    let za = matrix_power(&z, a as u32);
                    let lhs = &u * &za;
                    let rhs = (&za * &u).scale(q_pow(d, a as f64));
                    assert!((&lhs - &rhs).max_abs() < 1e-12);
                }
            }
        }
        let half = spin(2);
        let v0 = weyl_operator_v(half, 0.0, 1).unwrap();
        let v1 = weyl_operator_v(half, 1.0, 1).unwrap();
        assert!(hs_inner(&v0, &v1).unwrap().norm() < 1e-12);
        assert!(weyl_operator_v(half, 0.0, 2).is_err());
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(mub_set_prime(spin(4), 0.0, 1e-10).is_err());
        assert!(mub_set_prime(spin(101), 0.0, 1e-10).is_err());
        assert!(gauss_mub_set(spin(2)).is_err());
        assert!(gauss_vector(spin(9), 0, 0).is_err());
    }

    #[test]
    fn spin_one_weyl_eigenvalues() {
        let one = spin(3);
        let w = q_pow(3, 1.0);
        for a in 0..3 {
            let v = weyl_operator_v(one, 0.0, a).unwrap();
            for n in 0..3 {
                // Ψ_a(n) = (ω^{−n+a}, 1, ω^{n+a}) / √3
                let psi: Vec<Complex> = [
                    w.powi(a as i32 - n as i32),
                    c(1.0, 0.0),
                    w.powi((n + a) as i32),
                ]
                .iter()
                .map(|z| z / 3f64.sqrt())
                .collect();
                let lam = w.powi(-(n as i32) - a as i32);
                let lhs = v.apply(&psi);
                let rhs: Vec<Complex> = psi.iter().map(|z| z * lam).collect();
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn gauss_a0_is_fourier() {
        for d in [3, 5, 7] {
            let s = spin(d);
            for n in 0..d {
                let g = gauss_vector(s, 0, n).unwrap();
                let f = fourier_vector(s, n, 0.0).unwrap();
                assert!(max_abs_diff(&g, &f) < 1e-12);
            }
        }
    }

    #[test]
    fn weyl_eigenbasis_phase_convention() {
        let basis = weyl_eigenbasis(spin(5), 0.3, 2, 1e-10).unwrap();
        for v in &basis.vectors {
            assert!(v[0].im == 0.0 && v[0].re > 0.0);
        }
        let u = weyl_operator_v(spin(5), 0.3, 2).unwrap();
        for v in &basis.vectors {
            let uv = u.apply(v);
            let lam = inner(v, &uv);
            let scaled: Vec<Complex> = v.iter().map(|z| z * lam).collect();
            assert!(phase_aligned_diff(&uv, &scaled) < 1e-12);
        }
    }
}
