//! su(2) on the two-oscillator space `F_k = F(1) ⊗ F(2)`.
//!
//! `H = sqrt(N1 (N2 + 1))` and `U_r = s_{1+} s_{2−}` give the polar
//! decomposition `J+ = H U_r`, `J− = U_r† H`, `Jz = (N1 − N2)/2`. The
//! Schwinger relabeling `|J M⟩ = |J + M, J − M)` identifies the subspace
//! `ε(j)`, `j = (k − 1)/2`, which both `H` and `U_r` leave invariant. The
//! su(2) relations are stated on `ε(j)` only: outside it the wrap terms of
//! `U_r` move states between different `J` sectors.

use crate::error::{domain, Error, Result};
use crate::oscillator::{build_oscillator, build_shifted, OscIndex, PhaseParams, Sign};
use crate::qcore::{
    commutator, hermiticity_residual, matrix_power, unitarity_residual, Complex, ComplexMatrix,
    QContext,
};

/// An angular momentum `j`, stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    two_j: usize,
}

impl Spin {
    pub fn from_two_j(two_j: usize) -> Result<Self> {
        if two_j == 0 {
            return Err(domain("j must be positive (dimension 2j+1 >= 2)"));
        }
        Ok(Self { two_j })
    }

    /// The spin whose multiplet has dimension `d = 2j + 1`.
    pub fn from_dim(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(domain(format!("dimension must be at least 2, got {d}")));
        }
        Ok(Self { two_j: d - 1 })
    }

    pub fn two_j(self) -> usize {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.two_j + 1
    }

    /// `m = −j, −j+1, ..., j` in ascending order.
    pub fn m_values(self) -> impl Iterator<Item = f64> {
        let j = self.j();
        (0..=self.two_j).map(move |i| i as f64 - j)
    }
}

/// Flat indexing `(n1, n2) ↔ n1·k + n2` of `F(1) ⊗ F(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorSpace {
    pub k: usize,
}

impl TensorSpace {
    pub fn dim(self) -> usize {
        self.k * self.k
    }

    pub fn flat(self, n1: usize, n2: usize) -> usize {
        debug_assert!(n1 < self.k && n2 < self.k);
        n1 * self.k + n2
    }

    pub fn unflat(self, idx: usize) -> (usize, usize) {
        (idx / self.k, idx % self.k)
    }
}

/// `ε(j)` inside `F_k` with `j = (k − 1)/2`, ordered by ascending `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngularSpace {
    pub spin: Spin,
    pub tensor: TensorSpace,
    /// Flat `F_k` index of `|j m⟩ = |j + m, j − m)` for each `m`.
    pub embedding: Vec<usize>,
}

impl AngularSpace {
    pub fn new(k: usize) -> Result<Self> {
        let spin = Spin::from_dim(k)?;
        let tensor = TensorSpace { k };
        let two_j = spin.two_j();
        // m = i − j  ⇒  n1 = j + m = i, n2 = j − m = 2j − i
        let embedding = (0..=two_j).map(|i| tensor.flat(i, two_j - i)).collect();
        Ok(Self {
            spin,
            tensor,
            embedding,
        })
    }

    pub fn dim(&self) -> usize {
        self.embedding.len()
    }
}

fn real(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

/// `N1 = N ⊗ I` and `N2 = I ⊗ N` on `F_k`.
pub fn number_operators(k: usize) -> (ComplexMatrix, ComplexMatrix) {
    let t = TensorSpace { k };
    let n1 = ComplexMatrix::from_diag(
        &(0..t.dim())
            .map(|i| real(t.unflat(i).0 as f64))
            .collect::<Vec<_>>(),
    );
    let n2 = ComplexMatrix::from_diag(
        &(0..t.dim())
            .map(|i| real(t.unflat(i).1 as f64))
            .collect::<Vec<_>>(),
    );
    (n1, n2)
}

/// `H = sqrt(N1 (N2 + 1))`, diagonal on `F_k`.
pub fn build_h(k: usize) -> ComplexMatrix {
    let t = TensorSpace { k };
    let diag: Vec<Complex> = (0..t.dim())
        .map(|i| {
            let (n1, n2) = t.unflat(i);
            real(((n1 * (n2 + 1)) as f64).sqrt())
        })
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// `Jz = (N1 − N2)/2` on `F_k`.
pub fn build_jz(k: usize) -> ComplexMatrix {
    let (n1, n2) = number_operators(k);
    (&n1 - &n2).scale(real(0.5))
}

/// `J² = (N1 + N2)(N1 + N2 + 2)/4` on `F_k`.
pub fn build_j2(k: usize) -> ComplexMatrix {
    let t = TensorSpace { k };
    let diag: Vec<Complex> = (0..t.dim())
        .map(|i| {
            let (n1, n2) = t.unflat(i);
            let n = (n1 + n2) as f64;
            real(0.25 * n * (n + 2.0))
        })
        .collect();
    ComplexMatrix::from_diag(&diag)
}

/// `U_r` on `F_k` from the explicit action rules: a plain shift
/// `|n1, n2) → |n1 + 1, n2 − 1)` whose two wraps each pick up `e^{iφ_r/2}`.
pub fn ur_from_action(r: f64, k: usize) -> ComplexMatrix {
    let t = TensorSpace { k };
    let half = PhaseParams::new(r, k).half_phase();
    let mut u = ComplexMatrix::zeros(t.dim());
    for n1 in 0..k {
        for n2 in 0..k {
            let mut amp = real(1.0);
            let m1 = if n1 == k - 1 {
                amp *= half;
                0
            } else {
                n1 + 1
            };
            let m2 = if n2 == 0 {
                amp *= half;
                k - 1
            } else {
                n2 - 1
            };
            u[(t.flat(m1, m2), t.flat(n1, n2))] = amp;
        }
    }
    u
}

/// `U_r = s_{1+} s_{2−}` on `F_k`, cross-checked against [`ur_from_action`].
pub fn build_ur(r: f64, ctx: &QContext) -> Result<ComplexMatrix> {
    let k = ctx.k();
    let params = PhaseParams::new(r, k);
    let s1 = build_shifted(
        &build_oscillator(OscIndex::One, ctx),
        Sign::Plus,
        &params,
        ctx,
    )?;
    let s2 = build_shifted(
        &build_oscillator(OscIndex::Two, ctx),
        Sign::Minus,
        &params,
        ctx,
    )?;
    let id = ComplexMatrix::identity(k);
    let u = &s1.kron(&id) * &id.kron(&s2);
    let mismatch = (&u - &ur_from_action(r, k)).max_abs();
    if mismatch > ctx.tol() {
        return Err(Error::Construction(format!(
            "s_1+ s_2- disagrees with the U_r action rules by {mismatch:e}"
        )));
    }
    Ok(u)
}

/// Largest amplitude `op` sends from `ε(j)` into its orthogonal complement.
pub fn leakage(op: &ComplexMatrix, space: &AngularSpace) -> f64 {
    let mut inside = vec![false; op.dim()];
    for &i in &space.embedding {
        inside[i] = true;
    }
    space
        .embedding
        .iter()
        .flat_map(|&col| {
            (0..op.dim())
                .filter(|&row| !inside[row])
                .map(move |row| op[(row, col)].norm())
        })
        .fold(0.0, f64::max)
}

/// Compression of an `F_k` operator to `ε(j)` in the ordered `|j m⟩` basis.
pub fn restrict(op: &ComplexMatrix, space: &AngularSpace, tol: f64) -> Result<ComplexMatrix> {
    if op.dim() != space.tensor.dim() {
        return Err(Error::DimensionMismatch(op.dim(), space.tensor.dim()));
    }
    let leak = leakage(op, space);
    if leak > tol {
        return Err(Error::Stability(leak));
    }
    let e = &space.embedding;
    Ok(ComplexMatrix::from_fn(space.dim(), |r, c| op[(e[r], e[c])]))
}

/// `U_r` restricted to `ε(j)`, `j = (d − 1)/2`.
pub fn ur_on_subspace(spin: Spin, r: f64) -> Result<ComplexMatrix> {
    let ctx = QContext::new(spin.dim())?;
    let space = AngularSpace::new(spin.dim())?;
    restrict(&build_ur(r, &ctx)?, &space, ctx.tol())
}

/// The su(2) generators and polar factors on `ε(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Su2Generators {
    pub spin: Spin,
    pub r: f64,
    pub jp: ComplexMatrix,
    pub jm: ComplexMatrix,
    pub jz: ComplexMatrix,
    pub j2: ComplexMatrix,
    pub h: ComplexMatrix,
    pub ur: ComplexMatrix,
}

/// Residuals of the relations every [`Su2Generators`] must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2Residuals {
    pub jz_jp: f64,
    pub jz_jm: f64,
    pub jp_jm: f64,
    pub casimir: f64,
    pub ur_unitary: f64,
    pub h_hermitian: f64,
    pub cyclic: f64,
}

impl Su2Residuals {
    pub fn max(&self) -> f64 {
        [
            self.jz_jp,
            self.jz_jm,
            self.jp_jm,
            self.casimir,
            self.ur_unitary,
            self.h_hermitian,
            self.cyclic,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

impl Su2Generators {
    pub fn residuals(&self) -> Su2Residuals {
        let d = self.spin.dim();
        let id = ComplexMatrix::identity(d);
        let j = self.spin.j();
        let c = |a: &ComplexMatrix, b: &ComplexMatrix| commutator(a, b).expect("same dimension");
        let phase = PhaseParams::new(self.r, d).full_phase();
        Su2Residuals {
            jz_jp: (&c(&self.jz, &self.jp) - &self.jp).max_abs(),
            jz_jm: (&c(&self.jz, &self.jm) + &self.jm).max_abs(),
            jp_jm: (&c(&self.jp, &self.jm) - &self.jz.scale(real(2.0))).max_abs(),
            casimir: (&self.j2 - &id.scale(real(j * (j + 1.0)))).max_abs(),
            ur_unitary: unitarity_residual(&self.ur),
            h_hermitian: hermiticity_residual(&self.h),
            cyclic: (&matrix_power(&self.ur, d as u32) - &id.scale(phase)).max_abs(),
        }
    }
}

/// Builds `J±`, `Jz`, `J²`, `H`, `U_r` on `F_k` and compresses them to `ε(j)`.
pub fn build_generators(r: f64, ctx: &QContext) -> Result<Su2Generators> {
    let k = ctx.k();
    let space = AngularSpace::new(k)?;
    let h_full = build_h(k);
    let ur_full = build_ur(r, ctx)?;
    let jp_full = &h_full * &ur_full;
    let jm_full = &ur_full.adjoint() * &h_full;
    let tol = ctx.tol();
    let gens = Su2Generators {
        spin: space.spin,
        r,
        jp: restrict(&jp_full, &space, tol)?,
        jm: restrict(&jm_full, &space, tol)?,
        jz: restrict(&build_jz(k), &space, tol)?,
        j2: restrict(&build_j2(k), &space, tol)?,
        h: restrict(&h_full, &space, tol)?,
        ur: restrict(&ur_full, &space, tol)?,
    };
    let worst = gens.residuals().max();
    if worst > tol {
        return Err(Error::Construction(format!(
            "su(2) relations violated on ε(j) (residual {worst:e})"
        )));
    }
    let ladder = ladder_residual(&gens);
    if ladder > tol {
        return Err(Error::Construction(format!(
            "J± ladder elements off by {ladder:e}"
        )));
    }
    Ok(gens)
}

/// Largest deviation of `J±` from `sqrt((j ∓ m)(j ± m + 1)) |j m±1⟩`.
pub fn ladder_residual(gens: &Su2Generators) -> f64 {
    let spin = gens.spin;
    let d = spin.dim();
    let j = spin.j();
    let m: Vec<f64> = spin.m_values().collect();
    let jp = ComplexMatrix::from_fn(d, |row, col| {
        if row == col + 1 {
            real(((j - m[col]) * (j + m[col] + 1.0)).sqrt())
        } else {
            real(0.0)
        }
    });
    let jm = jp.adjoint();
    (&gens.jp - &jp).max_abs().max((&gens.jm - &jm).max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 5] = [0.0, 0.3, 0.5, 1.0, 2.0];

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn spin_conventions() {
        let s = Spin::from_dim(2).unwrap();
        assert_eq!(s.j(), 0.5);
        assert_eq!(s.m_values().collect::<Vec<_>>(), vec![-0.5, 0.5]);
        assert!(Spin::from_dim(1).is_err());
        assert!(Spin::from_two_j(0).is_err());
        assert_eq!(Spin::from_two_j(2).unwrap().dim(), 3);
    }

    #[test]
    fn tensor_index_is_bijective() {
        for k in 2..6 {
            let t = TensorSpace { k };
            let mut seen = vec![false; t.dim()];
            for n1 in 0..k {
                for n2 in 0..k {
                    let i = t.flat(n1, n2);
                    assert!(!seen[i]);
                    seen[i] = true;
                    assert_eq!(t.unflat(i), (n1, n2));
                }
            }
        }
    }

    #[test]
    fn embedding_follows_schwinger_labels() {
        let space = AngularSpace::new(4).unwrap();
        // j = 3/2: m = -3/2 → (0, 3), m = 3/2 → (3, 0)
        assert_eq!(space.embedding, vec![3, 6, 9, 12]);
    }

    #[test]
    fn h_diagonal_k2() {
        let h = build_h(2);
        let expected = [0.0, 0.0, 1.0, 2f64.sqrt()];
        for (i, e) in expected.iter().enumerate() {
            assert!((h[(i, i)] - c(*e, 0.0)).norm() < 1e-15);
        }
        assert_eq!(h.count_nonzero(0.0), 2);
    }

    #[test]
    fn h_on_subspace() {
        for k in 2..=8 {
            let space = AngularSpace::new(k).unwrap();
            let h = restrict(&build_h(k), &space, 1e-12).unwrap();
            let j = space.spin.j();
            for (i, m) in space.spin.m_values().enumerate() {
                let expected = ((j + m) * (j - m + 1.0)).sqrt();
                assert!((h[(i, i)] - c(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ur_k2_r0_double_wrap() {
        let ctx = QContext::new(2).unwrap();
        let u = build_ur(0.0, &ctx).unwrap();
        let t = TensorSpace { k: 2 };
        assert!((u[(t.flat(0, 1), t.flat(1, 0))] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ur_product_matches_action_and_is_cyclic() {
        for k in 2..=8 {
            let ctx = QContext::new(k).unwrap();
            for r in GRID {
                let u = build_ur(r, &ctx).unwrap();
                assert!((&u - &ur_from_action(r, k)).max_abs() < 1e-12);
                let phase = PhaseParams::new(r, k).full_phase();
                let cyc =
                    &matrix_power(&u, k as u32) - &ComplexMatrix::identity(k * k).scale(phase);
                assert!(cyc.max_abs() <= 1e-12, "k={k} r={r}");
                assert!(unitarity_residual(&u) <= 1e-12);
            }
        }
    }

    #[test]
    fn generic_shift_rule() {
        let k = 4;
        let ctx = QContext::new(k).unwrap();
        let u = build_ur(0.3, &ctx).unwrap();
        let t = TensorSpace { k };
        for n1 in 0..k - 1 {
            for n2 in 1..k {
                assert!((u[(t.flat(n1 + 1, n2 - 1), t.flat(n1, n2))] - c(1.0, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn stability_of_subspace() {
        for k in 2..=8 {
            let ctx = QContext::new(k).unwrap();
            let space = AngularSpace::new(k).unwrap();
            assert!(leakage(&build_h(k), &space) <= 1e-12);
            for r in GRID {
                assert!(leakage(&build_ur(r, &ctx).unwrap(), &space) <= 1e-12);
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let k = 3;
        let space = AngularSpace::new(k).unwrap();
        assert_eq!(
            restrict(&ComplexMatrix::identity(9), &space, 1e-12).unwrap(),
            ComplexMatrix::identity(3)
        );
        let jz = restrict(&build_jz(k), &space, 1e-12).unwrap();
        assert_eq!(
            jz,
            ComplexMatrix::from_diag(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])
        );

        let r = 0.3;
        let u = ur_on_subspace(space.spin, r).unwrap();
        let phase = PhaseParams::new(r, k).full_phase();
        let expected = ComplexMatrix::from_fn(3, |row, col| {
            if row == col + 1 {
                c(1.0, 0.0)
            } else if row == 0 && col == 2 {
                phase
            } else {
                c(0.0, 0.0)
            }
        });
        assert!((&u - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn restrict_rejects_leaky_operator() {
        let space = AngularSpace::new(3).unwrap();
        // moves |1,1) (in ε(1)) to |0,0) (outside)
        let mut op = ComplexMatrix::zeros(9);
        op[(0, 4)] = c(1.0, 0.0);
        assert!(matches!(
            restrict(&op, &space, 1e-12),
            Err(Error::Stability(_))
        ));
        assert!(restrict(&ComplexMatrix::identity(4), &space, 1e-12).is_err());
    }

    #[test]
    fn generators_satisfy_su2() {
        for k in 2..=8 {
            let ctx = QContext::new(k).unwrap();
            for r in GRID {
                let g = build_generators(r, &ctx).unwrap();
                assert!(
                    g.residuals().max() <= 1e-12,
                    "k={k} r={r}: {:?}",
                    g.residuals()
                );
                assert!(ladder_residual(&g) <= 1e-12);
                // J+ |j j⟩ = 0
                assert!(g.jp.column(k - 1).iter().all(|z| z.norm() < 1e-12));
            }
        }
    }

    #[test]
    fn spin_half_raising() {
        let ctx = QContext::new(2).unwrap();
        let g = build_generators(0.7, &ctx).unwrap();
        let expected = ComplexMatrix::from_fn(2, |r, col| {
            if r == 1 && col == 0 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        assert!((&g.jp - &expected).max_abs() < 1e-12);
    }
}
