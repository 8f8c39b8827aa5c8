use std::f64::consts::PI;

use dirac_shell::cli::round_sig;
use dirac_shell::confinement::{confinement_scalar, is_confining, CouplingSpec, DEFAULT_TOL};
use dirac_shell::eigen::{mode_block, mode_norm_sup, solve_lambda};
use dirac_shell::harmonics::{spinor_harmonic, ModeIndex, Sign};
use dirac_shell::kernels::{k_a, phi_a, w_a, yukawa};
use dirac_shell::modes::{mode_coefficients, p_lower_bound, verify_uncertainty};
use dirac_shell::spinor::{alpha, alpha_dot, beta, sigma_dot, sigma_dot_apply, Complex4Matrix, Vector3};
use dirac_shell::{Complex64, SpectralParams};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = Vector3> {
    (-1.0f64..1.0, 0.0..2.0 * PI).prop_map(|(z, ph)| {
        let s = (1.0 - z * z).sqrt();
        Vector3::new(s * ph.cos(), s * ph.sin(), z)
    })
}

fn point() -> impl Strategy<Value = Vector3> {
    (unit(), 0.05f64..4.0).prop_map(|(u, r)| u * r)
}

/// `(m, a)` with `|a| < m`.
fn interior() -> impl Strategy<Value = (f64, f64)> {
    (0.1f64..5.0, -0.999f64..0.999).prop_map(|(m, t)| (m, m * t))
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn odd_j2(max: u32) -> impl Strategy<Value = u32> {
    (0..=(max - 1) / 2).prop_map(|k| 2 * k + 1)
}

fn mode(max_j2: u32) -> impl Strategy<Value = ModeIndex> {
    (odd_j2(max_j2), any::<u32>(), sign()).prop_map(|(j2, r, s)| {
        let mj2 = -(j2 as i32) + 2 * (r % (j2 + 1)) as i32;
        ModeIndex::new(j2, mj2, s).unwrap()
    })
}

fn max_abs4(m: &Complex4Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dot_products_square_to_identity(v in unit()) {
        let s = sigma_dot(&v);
        prop_assert!((s * s - nalgebra::Matrix2::identity()).norm() < 1e-14);
        let a = alpha_dot(&v);
        prop_assert!(max_abs4(&(a * a - Complex4Matrix::identity())) < 1e-14);
    }

    #[test]
    fn fundamental_solution_is_adjoint_symmetric(x in point(), (m, a) in interior()) {
        let p = SpectralParams::new(m, a).unwrap();
        let f = phi_a(&p, &x).unwrap();
        let g = phi_a(&p, &(-x)).unwrap();
        prop_assert!(max_abs4(&(f - g.adjoint())) <= 1e-13 * max_abs4(&f).max(1.0));
    }

    #[test]
    fn fundamental_solution_blocks(x in point(), (m, a) in interior()) {
        let p = SpectralParams::new(m, a).unwrap();
        let f = phi_a(&p, &x).unwrap();
        let k = k_a(&p, &x).unwrap();
        let w = w_a(&p, &x).unwrap();
        let id = nalgebra::Matrix2::<Complex64>::identity();
        let want = dirac_shell::spinor::from_blocks(
            &(id * Complex64::from((a + m) * k)), &w, &w, &(id * Complex64::from((a - m) * k)));
        prop_assert!(max_abs4(&(f - want)) <= 1e-14 * max_abs4(&f).max(1.0));
    }

    #[test]
    fn vieta_product(( m, a) in interior(), j2 in odd_j2(41), s in sign()) {
        let (pos, neg) = solve_lambda(m, a, j2, s).unwrap();
        prop_assert!(pos > 0.0 && neg < 0.0);
        prop_assert!((pos * neg + 4.0).abs() < 1e-12);
    }

    #[test]
    fn mirror_roots((m, a) in interior(), j2 in odd_j2(41)) {
        let (pos, _) = solve_lambda(m, a, j2, Sign::Plus).unwrap();
        let (_, neg) = solve_lambda(m, -a, j2, Sign::Minus).unwrap();
        prop_assert!((pos + neg).abs() < 1e-10 * pos.max(1.0));
    }

    #[test]
    fn mode_block_is_hermitian_with_fixed_determinant((m, a) in interior(), j2 in odd_j2(61), s in sign()) {
        let p = SpectralParams::new(m, a).unwrap();
        let b = mode_block(j2, s, &p).unwrap();
        prop_assert!((b - b.adjoint()).norm() < 1e-15);
        prop_assert!((b.determinant() + Complex64::from(0.25)).norm() < 1e-12);
    }

    #[test]
    fn roots_lie_in_norm_window((m, a) in interior(), j2 in odd_j2(21), s in sign()) {
        let p = SpectralParams::new(m, a).unwrap();
        let norm = mode_norm_sup(&p, 199).unwrap();
        let (pos, neg) = solve_lambda(m, a, j2, s).unwrap();
        for l in [pos, neg] {
            prop_assert!(l.abs() >= 1.0 / norm - 1e-12 && l.abs() <= 4.0 * norm + 1e-12, "{l} {norm}");
        }
    }

    #[test]
    fn p_identity_and_bound(kappa in 0.0f64..8.0, j2 in odd_j2(401)) {
        let c = mode_coefficients(j2, kappa).unwrap();
        prop_assert!((c.p_abs * c.p_abs + kappa * kappa * c.d_minus * c.d_plus - 0.25).abs() < 1e-12);
        prop_assert!(c.p_abs >= p_lower_bound(kappa) - 1e-15);
        prop_assert!(c.d_plus > 0.0 && c.d_plus < c.d_minus);
    }

    #[test]
    fn sigma_n_maps_partner(idx in mode(21), w in unit()) {
        let lower = ModeIndex { sign: Sign::Minus, ..idx };
        let a = spinor_harmonic(&lower, &w).unwrap();
        let b = spinor_harmonic(&lower.partner(), &w).unwrap();
        prop_assert!((sigma_dot_apply(&w, &a) - b).norm() < 1e-12);
    }

    #[test]
    fn uncertainty_is_strict_for_mixtures(
        (m, a) in interior(),
        lambda in 0.1f64..20.0,
        delta in 0.05f64..5.0,
        modes in prop::collection::vec((mode(31), -1.0f64..1.0, -1.0f64..1.0), 2..6),
    ) {
        let p = SpectralParams::new(m, a).unwrap();
        let f: Vec<_> = modes.iter().map(|(i, re, im)| (*i, Complex64::new(*re, *im))).collect();
        let (lhs, rhs) = verify_uncertainty(&f, lambda, &p, delta).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12));
    }

    #[test]
    fn confinement_depends_on_discriminant_only(le in -5.0f64..5.0, ls in -5.0f64..5.0) {
        prop_assume!((le.abs() - ls.abs()).abs() > 1e-6);
        let base = is_confining(&CouplingSpec::new(le, ls).unwrap(), DEFAULT_TOL).unwrap();
        for (e, s) in [(-le, -ls), (le, -ls), (-le, ls)] {
            prop_assert_eq!(is_confining(&CouplingSpec::new(e, s).unwrap(), DEFAULT_TOL).unwrap(), base);
        }
    }

    #[test]
    fn confining_iff_scalar_vanishes(ls in 2.05f64..6.0, on in any::<bool>()) {
        // on the hyperbola lambda_e^2 = lambda_s^2 - 4, or visibly off it
        let le = if on { (ls * ls - 4.0).sqrt() } else { (ls * ls - 3.0).sqrt() };
        let c = CouplingSpec::new(le, ls).unwrap();
        let confining = is_confining(&c, DEFAULT_TOL).unwrap();
        let scalar = confinement_scalar(&c).unwrap();
        prop_assert_eq!(confining, on);
        prop_assert_eq!(scalar.abs() < DEFAULT_TOL, on);
    }

    #[test]
    fn float_rounding_is_idempotent(x in prop::num::f64::NORMAL) {
        let r = round_sig(x);
        prop_assert_eq!(round_sig(r), r);
        prop_assert!((r - x).abs() <= 1e-14 * x.abs());
    }
}

/// `(-Delta + kappa^2) u` by the 7-point stencil.
fn helmholtz_residual(kappa: f64, x: &Vector3, h: f64) -> f64 {
    let u = |y: &Vector3| yukawa(kappa, y.norm());
    let mut lap = -6.0 * u(x);
    for e in [Vector3::x(), Vector3::y(), Vector3::z()] {
        lap += u(&(x + e * h)) + u(&(x - e * h));
    }
    (-lap / (h * h) + kappa * kappa * u(x)).abs()
}

#[test]
fn yukawa_solves_helmholtz_at_second_order() {
    let x = Vector3::new(0.4, -0.3, 0.5);
    for kappa in [0.3, 1.0, 2.5] {
        let r1 = helmholtz_residual(kappa, &x, 2e-3);
        let r2 = helmholtz_residual(kappa, &x, 1e-3);
        let rate = (r1 / r2).log2();
        assert!((rate - 2.0).abs() < 0.1, "kappa {kappa}: rate {rate}");
    }
}

#[test]
fn fundamental_solution_is_annihilated_by_dirac() {
    // (-i alpha . grad + m beta - a) phi^a = 0 away from the origin
    let p = SpectralParams::new(1.3, 0.4).unwrap();
    let x = Vector3::new(0.3, 0.2, -0.6);
    let residual = |h: f64| {
        let mut d = beta() * Complex64::from(p.m) - Complex4Matrix::identity() * Complex64::from(p.a);
        d *= phi_a(&p, &x).unwrap();
        for (j, e) in [Vector3::x(), Vector3::y(), Vector3::z()].iter().enumerate() {
            let g = (phi_a(&p, &(x + e * h)).unwrap() - phi_a(&p, &(x - e * h)).unwrap()) / Complex64::from(2.0 * h);
            d += alpha(j + 1).unwrap() * g * Complex64::new(0.0, -1.0);
        }
        max_abs4(&d)
    };
    let (r1, r2) = (residual(2e-3), residual(1e-3));
    assert!(r2 < 1e-5 && (r1 / r2).log2() > 1.8, "{r1} {r2}");
}

#[test]
fn kernel_decays_exponentially() {
    let p = SpectralParams::new(1.0, 0.6).unwrap();
    let dir = Vector3::new(1.0, 2.0, -2.0).normalize();
    let norm = |r: f64| max_abs4(&phi_a(&p, &(dir * r)).unwrap());
    // log-slope of |x| phi over [2, 8] is -kappa up to the algebraic prefactor
    let slope = ((8.0 * norm(8.0)).ln() - (2.0 * norm(2.0)).ln()) / 6.0;
    assert!((slope + p.kappa).abs() < 0.05, "{slope}");
}
