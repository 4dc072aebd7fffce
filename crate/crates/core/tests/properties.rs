use std::f64::consts::TAU;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su2mub::mub::{
    basis_br, fourier_vector, overlap_closed, result3_alias, spherical_basis, weyl_eigenbasis,
    weyl_operator_v,
};
use su2mub::qcore::{
    eig_unitary, inner, max_abs_diff, norm, q_factorial, q_number, unitarity_residual, Complex,
    ComplexMatrix, QContext,
};
use su2mub::su2::{build_generators, ur_on_subspace, Spin};
use su2mub::verify::{check_orthonormal, check_unbiased};

/// Haar-ish unitary with eigenphases spread at least `TAU / (2 d)` apart.
fn random_unitary(d: usize, seed: u64) -> (ComplexMatrix, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<Complex>::from_fn(d, d, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let q = g.qr().q();
    let offset = rng.gen_range(0.0..TAU);
    let phases: Vec<f64> = (0..d)
        .map(|i| offset + TAU * (i as f64 + rng.gen_range(-0.25..0.25)) / d as f64)
        .collect();
    let diag = DMatrix::<Complex>::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        phases.iter().map(|&p| Complex::from_polar(1.0, p)),
    ));
    let u = &q * diag * q.adjoint();
    (ComplexMatrix::from_fn(d, |i, j| u[(i, j)]), phases)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_unitary_recovers_random_spectra(d in 2usize..=11, seed in any::<u64>()) {
        let (u, phases) = random_unitary(d, seed);
        prop_assert!(unitarity_residual(&u) < 1e-12);
        let pairs = eig_unitary(&u, 1e-10).unwrap();
        prop_assert_eq!(pairs.len(), d);
        let mut expected: Vec<f64> = phases.iter().map(|p| p.rem_euclid(TAU)).collect();
        expected.sort_by(f64::total_cmp);
        for (p, e) in pairs.iter().zip(&expected) {
            let lv: Vec<Complex> = p.vector.iter().map(|z| z * p.value).collect();
            prop_assert!(max_abs_diff(&u.apply(&p.vector), &lv) <= 1e-10);
            prop_assert!((norm(&p.vector) - 1.0).abs() <= 1e-12);
            let gap = (p.arg() - e).abs();
            prop_assert!(gap.min(TAU - gap) <= 1e-10);
        }
        for w in pairs.windows(2) {
            prop_assert!(w[0].arg() <= w[1].arg());
        }
    }

    #[test]
    fn q_factorial_is_a_running_product(k in 2usize..=12) {
        let ctx = QContext::new(k).unwrap();
        let mut acc = Complex::new(1.0, 0.0);
        for n in 1..k {
            acc *= q_number(n as f64, &ctx);
            prop_assert!((q_factorial(n, &ctx).unwrap() - acc).norm() <= 1e-12 * acc.norm().max(1.0));
        }
        prop_assert!(q_factorial(k, &ctx).is_err());
    }

    #[test]
    fn fourier_bases_are_orthonormal_and_unbiased_to_spherical(d in 2usize..=9, r in -4.0f64..4.0) {
        let spin = Spin::from_dim(d).unwrap();
        let b = basis_br(spin, r);
        prop_assert!(check_orthonormal(&b, 1e-12).passed);
        prop_assert!(check_unbiased(&spherical_basis(spin), &b, 1e-12).unwrap().passed);
    }

    #[test]
    fn ur_is_unitary_with_period_d(d in 2usize..=9, r in -4.0f64..4.0) {
        let spin = Spin::from_dim(d).unwrap();
        let u = ur_on_subspace(spin, r).unwrap();
        prop_assert!(unitarity_residual(&u) <= 1e-12);
        let mut p = ComplexMatrix::identity(d);
        for _ in 0..d {
            p = &p * &u;
        }
        let target = ComplexMatrix::identity(d).scale(Complex::from_polar(1.0, std::f64::consts::PI * (d as f64 - 1.0) * r));
        prop_assert!((&p - &target).max_abs() <= 1e-12);
    }

    #[test]
    fn generators_close_for_any_r(k in 2usize..=8, r in -3.0f64..3.0) {
        let ctx = QContext::new(k).unwrap();
        let g = build_generators(r, &ctx).unwrap();
        prop_assert!(g.residuals().max() <= 1e-12);
    }

    #[test]
    fn closed_overlap_matches_inner_product(
        d in 2usize..=9, r in -3.0f64..3.0, s in -3.0f64..3.0, na in 0usize..9, nb in 0usize..9,
    ) {
        let spin = Spin::from_dim(d).unwrap();
        let (na, nb) = (na % d, nb % d);
        let closed = overlap_closed(spin, r, na, s, nb).unwrap();
        let direct = inner(&fourier_vector(spin, na, r).unwrap(), &fourier_vector(spin, nb, s).unwrap());
        prop_assert!((closed - direct).norm() <= 1e-12);
    }

    #[test]
    fn alias_has_unit_overlap(d in 2usize..=9, r in -3.0f64..3.0, na in 0usize..9, nb in 0usize..9, k_ab in -3i64..=3) {
        let spin = Spin::from_dim(d).unwrap();
        let (na, nb) = (na % d, nb % d);
        let alias = result3_alias(spin, r, na, nb, k_ab).unwrap();
        let ov = overlap_closed(spin, r, na, alias.s, nb).unwrap();
        prop_assert!((ov - alias.sign).norm() <= 1e-12);
    }

    #[test]
    fn weyl_eigenbasis_diagonalizes_v(d in prop::sample::select(vec![2usize, 3, 5, 7]), r in -2.0f64..2.0, a in 0usize..7) {
        let spin = Spin::from_dim(d).unwrap();
        let a = a % d;
        let v = weyl_operator_v(spin, r, a).unwrap();
        let basis = weyl_eigenbasis(spin, r, a, 1e-10).unwrap();
        for psi in &basis.vectors {
            let vpsi = v.apply(psi);
            let lam = inner(psi, &vpsi);
            prop_assert!((lam.norm() - 1.0).abs() <= 1e-10);
            let lpsi: Vec<Complex> = psi.iter().map(|z| z * lam).collect();
            prop_assert!(max_abs_diff(&vpsi, &lpsi) <= 1e-10);
        }
    }
}

#[test]
fn gauss_sets_are_mubs_for_odd_primes_up_to_13() {
    for d in [3usize, 5, 7, 11, 13] {
        let bases = su2mub::mub::gauss_mub_set(Spin::from_dim(d).unwrap()).unwrap();
        assert_eq!(bases.len(), d + 1);
        for b in &bases {
            assert!(check_orthonormal(b, 1e-10).passed);
        }
        for (i, a) in bases.iter().enumerate() {
            for b in &bases[i + 1..] {
                assert!(
                    check_unbiased(a, b, 1e-10).unwrap().passed,
                    "d={d} {} vs {}",
                    a.label,
                    b.label
                );
            }
        }
    }
}
