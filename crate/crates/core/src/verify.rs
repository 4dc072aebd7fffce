//! Verification engine: named checks over parameter grids and MUB reports.
//!
//! Failures are data. Every check yields a [`CheckResult`] whose `passed`
//! flag is exactly `residual <= tol`; construction errors show up as an
//! infinite residual.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::{
    basis_br, commutator_us_ur, commute_condition, fourier_vector, gauss_mub_set, is_prime,
    overlap_closed, phase_operator_z, result3_alias, spherical_basis, AlphaIndex, BasisLabel,
    LabeledBasis,
};
use crate::oscillator::{build_oscillator, OscIndex, PhaseParams};
use crate::qcore::{
    commutator, eig_unitary, hermiticity_residual, hs_inner, inner, matrix_power, max_abs_diff,
    q_pow, unitarity_residual, Complex, ComplexMatrix, QContext, IDENTITY_TOL,
};
use crate::su2::{
    build_h, build_j2, build_jz, build_ur, leakage, restrict, ur_from_action, AngularSpace, Spin,
    Su2Generators,
};

/// `|overlap|` above `1 − EQUAL_UP_TO_PHASE_TOL` counts as the same vector.
pub const EQUAL_UP_TO_PHASE_TOL: f64 = 1e-10;

/// Threshold on `‖[U_s, U_r]‖` separating non-commuting pairs.
pub const NONCOMMUTING_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, params: &[(&str, f64)], residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            residual,
            tol,
            passed: residual <= tol,
        }
    }

    fn from_result(name: &str, params: &[(&str, f64)], residual: Result<f64>, tol: f64) -> Self {
        Self::new(name, params, residual.unwrap_or(f64::INFINITY), tol)
    }

    fn sort_key_cmp(&self, other: &Self) -> Ordering {
        self.name.cmp(&other.name).then_with(|| {
            let a = self.params.iter();
            let b = other.params.iter();
            for ((ka, va), (kb, vb)) in a.zip(b) {
                let o = ka.cmp(kb).then(va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            self.params.len().cmp(&other.params.len())
        })
    }
}

/// `‖Gram − I‖_max`.
pub fn check_orthonormal(basis: &LabeledBasis, tol: f64) -> CheckResult {
    let d = basis.dim();
    let mut residual: f64 = 0.0;
    for (i, u) in basis.vectors.iter().enumerate() {
        if u.len() != d {
            residual = f64::INFINITY;
            break;
        }
        for (j, v) in basis.vectors.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            residual = residual.max((inner(u, v) - Complex::new(expected, 0.0)).norm());
        }
    }
    CheckResult::new(
        format!("orthonormal[{}]", basis.label),
        &[("d", d as f64)],
        residual,
        tol,
    )
}

/// Moduli `|⟨A α | B β⟩|` for all vector pairs, row-major in `(α, β)`.
pub fn overlap_moduli(a: &LabeledBasis, b: &LabeledBasis) -> Result<Vec<f64>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if let Some(bad) = a
        .vectors
        .iter()
        .chain(&b.vectors)
        .find(|v| v.len() != a.dim())
    {
        return Err(Error::DimensionMismatch(a.dim(), bad.len()));
    }
    Ok(a.vectors
        .iter()
        .flat_map(|u| b.vectors.iter().map(move |v| inner(u, v).norm()))
        .collect())
}

/// `max_{α,β} | |⟨A α | B β⟩| − d^{−1/2} |`.
pub fn check_unbiased(a: &LabeledBasis, b: &LabeledBasis, tol: f64) -> Result<CheckResult> {
    let target = (a.dim() as f64).sqrt().recip();
    let residual = overlap_moduli(a, b)?
        .into_iter()
        .map(|m| (m - target).abs())
        .fold(0.0, f64::max);
    Ok(CheckResult::new(
        format!("unbiased[{} | {}]", a.label, b.label),
        &[("d", a.dim() as f64)],
        residual,
        tol,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Unbiased,
    EqualUpToPhase,
    Neither,
}

/// Unbiased if every overlap modulus is within `tol` of `d^{−1/2}`; equal up
/// to phase if every vector of `a` has a partner in `b` with modulus above
/// `1 − 1e−10`.
pub fn classify_pair(a: &LabeledBasis, b: &LabeledBasis, tol: f64) -> Result<(PairClass, f64)> {
    let residual = check_unbiased(a, b, tol)?.residual;
    if residual <= tol {
        return Ok((PairClass::Unbiased, residual));
    }
    let d = a.dim();
    let moduli = overlap_moduli(a, b)?;
    let matched = moduli
        .chunks(d)
        .all(|row| row.iter().any(|&m| m > 1.0 - EQUAL_UP_TO_PHASE_TOL));
    let class = if matched {
        PairClass::EqualUpToPhase
    } else {
        PairClass::Neither
    };
    Ok((class, residual))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub a: usize,
    pub b: usize,
    pub class: PairClass,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubReport {
    pub d: usize,
    pub tol: f64,
    pub labels: Vec<String>,
    pub orthonormal: Vec<CheckResult>,
    pub pairs: Vec<PairReport>,
    /// Largest unbiasedness residual among pairs classified unbiased.
    pub max_deviation: f64,
}

impl MubReport {
    /// Every basis orthonormal and every pair unbiased.
    pub fn all_unbiased(&self) -> bool {
        self.orthonormal.iter().all(|c| c.passed)
            && self.pairs.iter().all(|p| p.class == PairClass::Unbiased)
    }
}

/// Classifies every unordered pair `(a, b)`, `a < b`, of `bases`.
pub fn mub_report(bases: &[LabeledBasis], tol: f64) -> Result<MubReport> {
    let d = bases.first().map_or(0, LabeledBasis::dim);
    let mut pairs = Vec::new();
    let mut max_deviation: f64 = 0.0;
    for a in 0..bases.len() {
        for b in a + 1..bases.len() {
            let (class, residual) = classify_pair(&bases[a], &bases[b], tol)?;
            if class == PairClass::Unbiased {
                max_deviation = max_deviation.max(residual);
            }
            pairs.push(PairReport {
                a,
                b,
                class,
                residual,
            });
        }
    }
    Ok(MubReport {
        d,
        tol,
        labels: bases.iter().map(|b| b.label.to_string()).collect(),
        orthonormal: bases.iter().map(|b| check_orthonormal(b, tol)).collect(),
        pairs,
        max_deviation,
    })
}

fn max_unbiased_residual(bases: &[LabeledBasis], tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, a) in bases.iter().enumerate() {
        worst = worst.max(check_orthonormal(a, tol).residual);
        for b in &bases[i + 1..] {
            worst = worst.max(check_unbiased(a, b, tol)?.residual);
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub k_values: Vec<usize>,
    pub r_grid: Vec<f64>,
    /// Tolerance for eigensolver-backed predicates; algebraic identities use
    /// [`IDENTITY_TOL`].
    pub tol: f64,
    /// Perturbs one entry of every `U_r`; every run with it set must fail.
    pub inject_fault: bool,
}

impl SuiteConfig {
    pub fn new(k_values: impl IntoIterator<Item = usize>, r_grid: &[f64], tol: f64) -> Self {
        Self {
            k_values: k_values.into_iter().collect(),
            r_grid: r_grid.to_vec(),
            tol,
            inject_fault: false,
        }
    }
}

/// Grid exercising both branches of the commutation condition.
pub const DEFAULT_R_GRID: [f64; 5] = [0.0, 0.3, 0.5, 1.0, 2.0];

/// Runs every module invariant for each `k` and `r`, sorted by name then parameters.
pub fn full_suite(
    k_range: impl IntoIterator<Item = usize>,
    r_grid: &[f64],
    tol: f64,
) -> Vec<CheckResult> {
    run_suite(&SuiteConfig::new(k_range, r_grid, tol))
}

pub fn run_suite(config: &SuiteConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for &k in &config.k_values {
        match QContext::new(k) {
            Ok(ctx) => suite_for_k(&ctx, config, &mut out),
            Err(_) => out.push(CheckResult::new(
                "context",
                &[("k", k as f64)],
                f64::INFINITY,
                0.0,
            )),
        }
    }
    out.sort_by(CheckResult::sort_key_cmp);
    out
}

const FAULT: f64 = 1e-3;

fn suite_for_k(ctx: &QContext, config: &SuiteConfig, out: &mut Vec<CheckResult>) {
    let k = ctx.k();
    let kf = k as f64;
    let itol = IDENTITY_TOL;
    let id = ComplexMatrix::identity(k);

    for idx in [OscIndex::One, OscIndex::Two] {
        let o = build_oscillator(idx, ctx);
        let p = [
            ("k", kf),
            ("i", if idx == OscIndex::One { 1.0 } else { 2.0 }),
        ];
        let rel = &(&(&o.a_minus * &o.a_plus) - &(&o.a_plus * &o.a_minus).scale(ctx.q())) - &id;
        out.push(CheckResult::new(
            "osc.deformed_commutation",
            &p,
            rel.max_abs(),
            itol,
        ));
        out.push(CheckResult::new(
            "osc.nilpotent_plus",
            &p,
            matrix_power(&o.a_plus, k as u32).max_abs(),
            itol,
        ));
        out.push(CheckResult::new(
            "osc.nilpotent_minus",
            &p,
            matrix_power(&o.a_minus, k as u32).max_abs(),
            itol,
        ));
        let np = &commutator(&o.number, &o.a_plus).expect("same dim") - &o.a_plus;
        out.push(CheckResult::new("osc.number_plus", &p, np.max_abs(), itol));
        let nm = &commutator(&o.number, &o.a_minus).expect("same dim") + &o.a_minus;
        out.push(CheckResult::new("osc.number_minus", &p, nm.max_abs(), itol));
        out.push(CheckResult::new(
            "osc.number_hermitian",
            &p,
            hermiticity_residual(&o.number),
            0.0,
        ));
        // (a_-)^{k-1} lives on the (0, k-1) corner, (a_+)^{k-1} on (k-1, 0)
        let mut down = matrix_power(&o.a_minus, (k - 1) as u32);
        let mut up = matrix_power(&o.a_plus, (k - 1) as u32);
        let corners_nonzero = down[(0, k - 1)].norm() > itol && up[(k - 1, 0)].norm() > itol;
        down[(0, k - 1)] = Complex::new(0.0, 0.0);
        up[(k - 1, 0)] = Complex::new(0.0, 0.0);
        let off_corner = if corners_nonzero {
            down.max_abs().max(up.max_abs())
        } else {
            f64::INFINITY
        };
        out.push(CheckResult::new("osc.corner_rank1", &p, off_corner, itol));
    }

    let space = match AngularSpace::new(k) {
        Ok(s) => s,
        Err(_) => return,
    };
    let spin = space.spin;
    let h_full = build_h(k);
    out.push(CheckResult::new(
        "su2.h_stable",
        &[("k", kf)],
        leakage(&h_full, &space),
        itol,
    ));
    out.push(CheckResult::new(
        "su2.h_hermitian",
        &[("k", kf)],
        hermiticity_residual(&h_full),
        itol,
    ));

    // restricted U_r for every grid value, shared by the pairwise checks
    let mut restricted: Vec<(f64, Option<ComplexMatrix>)> = Vec::new();
    for &r in &config.r_grid {
        let p = [("k", kf), ("r", r)];
        let params = PhaseParams::new(r, k);
        let period = (PhaseParams::new(r + 2.0, k).half_phase()
            - params.half_phase() * if k % 2 == 1 { 1.0 } else { -1.0 })
        .norm();
        out.push(CheckResult::new("osc.phase_period", &p, period, itol));

        let ur_full = match build_ur(r, ctx) {
            Ok(mut u) => {
                if config.inject_fault {
                    u[(0, 0)] += Complex::new(FAULT, 0.0);
                }
                u
            }
            Err(_) => {
                out.push(CheckResult::new(
                    "su2.ur_action_rules",
                    &p,
                    f64::INFINITY,
                    itol,
                ));
                restricted.push((r, None));
                continue;
            }
        };
        out.push(CheckResult::new(
            "su2.ur_action_rules",
            &p,
            (&ur_full - &ur_from_action(r, k)).max_abs(),
            itol,
        ));
        let cyc = &matrix_power(&ur_full, k as u32)
            - &ComplexMatrix::identity(k * k).scale(params.full_phase());
        out.push(CheckResult::new(
            "su2.ur_cyclic_fk",
            &p,
            cyc.max_abs(),
            itol,
        ));
        out.push(CheckResult::new(
            "su2.ur_unitary_fk",
            &p,
            unitarity_residual(&ur_full),
            itol,
        ));
        out.push(CheckResult::new(
            "su2.ur_stable",
            &p,
            leakage(&ur_full, &space),
            itol,
        ));

        // [J², U_r] applied to ε(j)
        let j2u = commutator(&build_j2(k), &ur_full).expect("same dim");
        let on_eps = space
            .embedding
            .iter()
            .flat_map(|&c| j2u.column(c))
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        out.push(CheckResult::new("su2.j2_ur_commute", &p, on_eps, itol));

        let gens = generators_from(&space, &h_full, &ur_full, r);
        match gens {
            Ok(g) => {
                let res = g.residuals();
                out.push(CheckResult::new("su2.jz_jplus", &p, res.jz_jp, itol));
                out.push(CheckResult::new("su2.jz_jminus", &p, res.jz_jm, itol));
                out.push(CheckResult::new("su2.jplus_jminus", &p, res.jp_jm, itol));
                out.push(CheckResult::new("su2.casimir", &p, res.casimir, itol));
                out.push(CheckResult::new("su2.ur_unitary", &p, res.ur_unitary, itol));
                out.push(CheckResult::new(
                    "su2.h_hermitian_eps",
                    &p,
                    res.h_hermitian,
                    itol,
                ));
                out.push(CheckResult::new("su2.ur_cyclic", &p, res.cyclic, itol));
                out.push(CheckResult::new(
                    "su2.ladder",
                    &p,
                    crate::su2::ladder_residual(&g),
                    itol,
                ));
                restricted.push((r, Some(g.ur)));
            }
            Err(_) => {
                out.push(CheckResult::new("su2.generators", &p, f64::INFINITY, itol));
                restricted.push((r, None));
            }
        }
    }

    let z = phase_operator_z(spin);
    let z_pows: Vec<ComplexMatrix> = (0..k).map(|a| matrix_power(&z, a as u32)).collect();
    for (r, ur) in &restricted {
        let r = *r;
        let p = [("k", kf), ("r", r)];
        let Some(ur) = ur else { continue };

        let eigen_res = (0..k)
            .map(|n| {
                let v = fourier_vector(spin, n, r)?;
                let lam = q_pow(k, -AlphaIndex::new(spin, r, n)?.alpha);
                let lv: Vec<Complex> = v.iter().map(|x| x * lam).collect();
                Ok(max_abs_diff(&ur.apply(&v), &lv))
            })
            .try_fold(0.0f64, |acc, x: Result<f64>| x.map(|x| acc.max(x)));
        out.push(CheckResult::from_result(
            "mub.fourier_eigen",
            &p,
            eigen_res,
            itol,
        ));

        let br = basis_br(spin, r);
        let sph = spherical_basis(spin);
        let sph_res = overlap_moduli(&sph, &br).map(|m| {
            m.into_iter()
                .map(|x| (x * x - 1.0 / kf).abs())
                .fold(0.0, f64::max)
        });
        out.push(CheckResult::from_result(
            "mub.spherical_unbiased",
            &p,
            sph_res,
            itol,
        ));
        out.push(CheckResult::new(
            "mub.br_orthonormal",
            &p,
            check_orthonormal(&br, itol).residual,
            itol,
        ));

        let weyl = (0..k)
            .map(|a| (&(ur * &z_pows[a]) - &(&z_pows[a] * ur).scale(q_pow(k, a as f64))).max_abs())
            .fold(0.0, f64::max);
        out.push(CheckResult::new("mub.weyl_rule", &p, weyl, itol));

        let alias = alias_residual(spin, r);
        out.push(CheckResult::from_result("mub.alias", &p, alias, itol));

        for (s, us) in &restricted {
            let s = *s;
            let Some(us) = us else { continue };
            let ps = [("k", kf), ("r", r), ("s", s)];
            let direct = commutator(us, ur).expect("same dim");
            let closed = commutator_us_ur(spin, s, r);
            out.push(CheckResult::new(
                "mub.commutator_closed_form",
                &ps,
                (&direct - &closed).max_abs(),
                itol,
            ));
            let norm = direct.max_abs();
            let branch = if commute_condition(spin, s, r, itol) {
                norm
            } else if norm > NONCOMMUTING_FLOOR {
                0.0
            } else {
                f64::INFINITY
            };
            out.push(CheckResult::new("mub.commute_condition", &ps, branch, itol));

            let mut trace_res: f64 = 0.0;
            let dphi = PhaseParams::new(r, k).phi - PhaseParams::new(s, k).phi;
            for (a, za) in z_pows.iter().enumerate() {
                let vra = ur * za;
                for (b, zb) in z_pows.iter().enumerate() {
                    let vsb = us * zb;
                    let hs = hs_inner(&vra, &vsb).expect("same dim");
                    let delta = if a == b { kf } else { 0.0 };
                    let expected = Complex::new(delta, 0.0)
                        + q_pow(k, spin.j() * (b as f64 - a as f64))
                            * (Complex::from_polar(1.0, dphi) - 1.0);
                    trace_res = trace_res.max((hs - expected).norm());
                }
            }
            out.push(CheckResult::new("mub.weyl_trace", &ps, trace_res, itol));

            let overlap = (0..k)
                .flat_map(|na| (0..k).map(move |nb| (na, nb)))
                .map(|(na, nb)| {
                    let closed = overlap_closed(spin, r, na, s, nb)?;
                    let direct =
                        inner(&fourier_vector(spin, na, r)?, &fourier_vector(spin, nb, s)?);
                    Ok((closed - direct).norm())
                })
                .try_fold(0.0f64, |acc, x: Result<f64>| x.map(|x| acc.max(x)));
            out.push(CheckResult::from_result(
                "mub.overlap_closed",
                &ps,
                overlap,
                itol,
            ));
        }

        if is_prime(k) {
            let set = weyl_set_from(spin, ur, &z_pows, r, config.tol)
                .and_then(|bases| max_unbiased_residual(&bases, config.tol));
            out.push(CheckResult::from_result(
                "mub.weyl_mubs",
                &p,
                set,
                config.tol,
            ));
        }
    }

    if is_prime(k) && k % 2 == 1 {
        let gauss = gauss_mub_set(spin).and_then(|b| max_unbiased_residual(&b, config.tol));
        out.push(CheckResult::from_result(
            "mub.gauss_mubs",
            &[("k", kf)],
            gauss,
            config.tol,
        ));
    }
}

fn generators_from(
    space: &AngularSpace,
    h_full: &ComplexMatrix,
    ur_full: &ComplexMatrix,
    r: f64,
) -> Result<Su2Generators> {
    let k = space.tensor.k;
    let tol = IDENTITY_TOL;
    Ok(Su2Generators {
        spin: space.spin,
        r,
        jp: restrict(&(h_full * ur_full), space, tol)?,
        jm: restrict(&(&ur_full.adjoint() * h_full), space, tol)?,
        jz: restrict(&build_jz(k), space, tol)?,
        j2: restrict(&build_j2(k), space, tol)?,
        h: restrict(h_full, space, tol)?,
        ur: restrict(ur_full, space, tol)?,
    })
}

fn alias_residual(spin: Spin, r: f64) -> Result<f64> {
    let d = spin.dim();
    let mut worst: f64 = 0.0;
    for na in 0..d {
        for nb in 0..d {
            for k_ab in -1..=1 {
                let alias = result3_alias(spin, r, na, nb, k_ab)?;
                let v = fourier_vector(spin, nb, alias.s)?;
                let w: Vec<Complex> = fourier_vector(spin, na, r)?
                    .iter()
                    .map(|z| z * alias.sign)
                    .collect();
                worst = worst.max(max_abs_diff(&v, &w));
                // aliased operators commute
                let comm = commutator_us_ur(spin, alias.s, r).max_abs();
                worst = worst.max(comm);
            }
        }
    }
    Ok(worst)
}

fn weyl_set_from(
    spin: Spin,
    ur: &ComplexMatrix,
    z_pows: &[ComplexMatrix],
    r: f64,
    tol: f64,
) -> Result<Vec<LabeledBasis>> {
    let mut bases = vec![spherical_basis(spin)];
    for (a, za) in z_pows.iter().enumerate() {
        let vectors = eig_unitary(&(ur * za), tol)?
            .into_iter()
            .map(|p| p.vector)
            .collect();
        bases.push(LabeledBasis {
            label: BasisLabel::WeylEig { r, a },
            vectors,
        });
    }
    Ok(bases)
}
