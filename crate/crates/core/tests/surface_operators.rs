use dirac_shell::eigen::{construct_eigendensity, mode_norm_sup, solve_lambda};
use dirac_shell::harmonics::{HarmonicTable, ModeIndex, Sign};
use dirac_shell::modes::{d0_closed, mode_coefficients};
use dirac_shell::operators::*;
use dirac_shell::spinor::{stack, Spinor2, Spinor4, Vector3};
use dirac_shell::surface::{make_ellipsoid, make_sphere, SurfacePatchization};
use dirac_shell::{Complex64, SpectralParams};

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn params(m: f64, a: f64) -> SpectralParams {
    SpectralParams::new(m, a).unwrap()
}

fn mode_density(idx: ModeIndex, upper: bool) -> impl Fn(&Vector3) -> Spinor4 + Sync {
    move |w: &Vector3| {
        let mut t = HarmonicTable::new(idx.degree());
        t.fill(w);
        let v = idx.eval_with(&t);
        if upper {
            stack(&v, &Spinor2::zeros())
        } else {
            stack(&Spinor2::zeros(), &v)
        }
    }
}

fn weighted_inner(s: &SurfacePatchization, u: &[Spinor4], v: &[Spinor4]) -> Complex64 {
    u.iter().zip(v).zip(&s.weights).map(|((x, y), w)| x.dotc(y) * *w).sum()
}

#[test]
fn sphere_mode_errors_decrease() {
    let p = params(1.0, 0.0);
    let mut errs = [vec![], vec![], vec![]];
    for n in [12, 16, 24, 32] {
        let ops = assemble_layers(&p, &make_sphere(n).unwrap()).unwrap();
        for (e, op) in errs.iter_mut().zip([&ops.k, &ops.w, &ops.c]) {
            e.push(mode_consistency_error(op).unwrap());
        }
    }
    for e in &errs {
        assert!(strictly_decreasing(e), "{e:?}");
        assert!(e[3] < 1e-5, "{e:?}");
    }
}

#[test]
fn k_rayleigh_quotient_on_ground_mode() {
    // grid-level application, independent of the compressed matrices
    let p = params(1.0, 0.0);
    let s = make_sphere(32).unwrap();
    let psi = ModeIndex::new(1, 1, Sign::Minus).unwrap();
    let g: Vec<Spinor4> = s.params.iter().map(mode_density(psi, true)).collect();
    let cg = apply_c(&p, &s, &mode_density(psi, true)).unwrap();
    let upper: Vec<Spinor4> =
        cg.iter().map(|v| Spinor4::new(v[0], v[1], Complex64::default(), Complex64::default())).collect();
    let rq = weighted_inner(&s, &g, &upper).re / weighted_inner(&s, &g, &g).re / (p.a + p.m);
    assert!((rq - 0.432_332_4).abs() < 1e-3, "{rq}");
    assert!((rq - d0_closed(1.0)).abs() < 1e-9, "{rq}");
}

#[test]
fn grid_application_matches_mode_action() {
    let p = params(1.0, 0.3);
    let s = make_sphere(16).unwrap();
    let c = mode_coefficients(3, p.kappa).unwrap();
    for sign in [Sign::Minus, Sign::Plus] {
        let psi = ModeIndex::new(3, -1, sign).unwrap();
        let out = apply_c(&p, &s, &mode_density(psi, true)).unwrap();
        let mut t = HarmonicTable::new(3);
        let mut worst = 0.0f64;
        for (w, v) in s.params.iter().zip(&out) {
            t.fill(w);
            let own = psi.eval_with(&t) * Complex64::from((p.m + p.a) * c.d_same(sign));
            let partner = psi.partner().eval_with(&t) * c.p(sign);
            worst = worst.max((v - stack(&own, &partner)).norm());
        }
        assert!(worst < 1e-8, "{sign}: {worst}");
    }
}

#[test]
fn eigendensity_residual_shrinks() {
    let p = params(1.0, 0.0);
    let (lambda, _) = solve_lambda(1.0, 0.0, 1, Sign::Plus).unwrap();
    let g = construct_eigendensity(1, 1, Sign::Plus, &p, lambda).unwrap();
    let dens = |w: &Vector3| {
        let mut t = HarmonicTable::new(1);
        t.fill(w);
        g.eval(&t)
    };
    let mut res = vec![];
    for n in [8, 12, 16] {
        let s = make_sphere(n).unwrap();
        let samples = g.sample(&s);
        let cg = apply_c(&p, &s, &dens).unwrap();
        let r: Vec<Spinor4> = cg.iter().zip(&samples).map(|(c, x)| c + x / Complex64::from(lambda)).collect();
        res.push(weighted_norm(&s, &r) / weighted_norm(&s, &samples));
    }
    assert!(res[2] < 1e-10 && res[2] <= res[0], "{res:?}");
}

#[test]
fn operators_are_selfadjoint() {
    let p = params(1.0, 0.4);
    for s in [make_sphere(24).unwrap(), make_ellipsoid([1.0, 1.0, 1.5], 24).unwrap()] {
        let ops = assemble_layers(&p, &s).unwrap();
        for op in [&ops.c, &ops.k, &ops.w] {
            assert!(hermitian_defect(op) < 1e-8, "{:?} {}", op.kind, hermitian_defect(op));
        }
        assert!(min_symmetric_eigenvalue(&ops.k) >= -1e-8);
    }
}

#[test]
fn anticommutator_vanishes() {
    let p = params(1.0, 0.0);
    for n in [16, 24] {
        let ops = assemble_layers(&p, &make_sphere(n).unwrap()).unwrap();
        // exact by symmetry on the sphere, so only roundoff is left
        assert!(anticommutator_residual(&ops.k, &ops.w).unwrap() < 1e-12);
    }
    let res: Vec<f64> = [12, 16, 24]
        .iter()
        .map(|&n| {
            let ops = assemble_layers(&p, &make_ellipsoid([1.0, 1.0, 1.5], n).unwrap()).unwrap();
            anticommutator_residual(&ops.k, &ops.w).unwrap()
        })
        .collect();
    assert!(strictly_decreasing(&res) && res[2] < 1e-7, "{res:?}");
}

#[test]
fn ellipsoid_jump_residual_decreases() {
    let p = params(1.0, 0.0);
    let res: Vec<f64> = [12, 16, 24]
        .iter()
        .map(|&n| jump_residual(&assemble_c(&p, &make_ellipsoid([1.0, 1.0, 1.5], n).unwrap()).unwrap()).unwrap())
        .collect();
    assert!(strictly_decreasing(&res) && res[2] < 1e-5, "{res:?}");
}

#[test]
fn triaxial_ellipsoid_uses_coupled_block() {
    let p = params(1.0, 0.2);
    let mut res = vec![];
    for n in [10, 12] {
        let c = assemble_c(&p, &make_ellipsoid([1.0, 1.2, 0.8], n).unwrap()).unwrap();
        assert_eq!(c.sectors.len(), 1);
        assert_eq!(c.dim(), 4 * (n - 1) * n);
        res.push(jump_residual(&c).unwrap());
    }
    assert!(res[1] < res[0] && res[1] < 1e-2, "{res:?}");
}

#[test]
fn mirror_symmetry_on_symmetric_surfaces() {
    for s in [make_sphere(16).unwrap(), make_ellipsoid([1.0, 1.0, 1.5], 16).unwrap()] {
        let cp = assemble_c(&params(1.0, 0.4), &s).unwrap();
        let cm = assemble_c(&params(1.0, -0.4), &s).unwrap();
        for lambda in [0.7, 1.7, 3.0, 9.0] {
            let x = smallest_singular(&cp, lambda).unwrap();
            let y = smallest_singular(&cm, -lambda).unwrap();
            assert!((x - y).abs() < 1e-10, "{lambda}: {x} {y}");
        }
    }
}

#[test]
fn isospectral_pair_detected_together() {
    let p = params(1.0, 0.25);
    let c = assemble_c(&p, &make_sphere(16).unwrap()).unwrap();
    let (lambda, partner) = solve_lambda(1.0, 0.25, 3, Sign::Minus).unwrap();
    assert!((lambda * partner + 4.0).abs() < 1e-12);
    for l in [lambda, partner] {
        let d = detect(&c, l).unwrap();
        assert!(d.candidate && d.sigma_min < 1e-10, "{l}: {d:?}");
    }
    assert!(!detect(&c, 20.0).unwrap().candidate);
}

#[test]
fn norms_follow_modes() {
    let s = make_sphere(32).unwrap();
    let n0 = operator_norm(&assemble_c(&params(1.0, 0.0), &s).unwrap());
    let n1 = operator_norm(&assemble_c(&params(1.0, 0.99), &s).unwrap());
    let modes = mode_norm_sup(&params(1.0, 0.0), 61).unwrap();
    let modes_edge = mode_norm_sup(&params(1.0, 0.99), 61).unwrap();
    assert!(n0 >= 0.48);
    assert!((n0 - modes).abs() < 0.02 * modes, "{n0} {modes}");
    assert!((n1 - modes_edge).abs() < 0.02 * modes_edge, "{n1} {modes_edge}");
    // the exact ratio is 3.17 here and tends to (1 + sqrt(5)/2) / 0.5873 = 3.6 as a -> m
    let limit = (1.0 + 1.25f64.sqrt()) / modes;
    assert!(n1 / n0 > 1.0 && n1 / n0 < limit, "{}", n1 / n0);
}

#[test]
fn massless_w_is_half_an_isometry() {
    let s = make_sphere(24).unwrap();
    let w = assemble_w(&SpectralParams::newtonian(), &s).unwrap();
    for sec in &w.sectors {
        let sv = sec.matrix.clone().svd(false, false).singular_values;
        // only the top modes carry truncation error
        assert!(sv.iter().all(|x| (x - 0.5).abs() < 1e-4), "{sv:?}");
    }
    let r = riesz_witness(&s).unwrap();
    assert!((r - 0.5).abs() < 0.01);
    assert!(matches!(riesz_witness(&make_ellipsoid([1.0, 1.0, 1.5], 8).unwrap()), Err(dirac_shell::Error::NotSphere)));
}

#[test]
fn scalar_riesz_bound_is_attained() {
    // W(h e) = i (sigma . R h) e / (4 pi) for real h, so |R h| = 4 pi |W(h e)|
    let s = make_sphere(24).unwrap();
    let h = |w: &Vector3| 1.0 + 0.5 * w.x - w.z * w.z + 0.3 * w.x * w.y;
    let dens = |w: &Vector3| {
        Spinor4::new(Complex64::default(), Complex64::default(), Complex64::from(h(w)), Complex64::default())
    };
    let out = apply_c(&SpectralParams::newtonian(), &s, &dens).unwrap();
    let rh: f64 = out.iter().zip(&s.weights).map(|(v, w)| w * (v[0].norm_sqr() + v[1].norm_sqr())).sum::<f64>().sqrt()
        * 4.0
        * std::f64::consts::PI;
    let hn: f64 = s.params.iter().zip(&s.weights).map(|(x, w)| w * h(x) * h(x)).sum::<f64>().sqrt();
    let two_pi = 2.0 * std::f64::consts::PI;
    assert!(rh >= two_pi * hn * (1.0 - 1e-9), "{rh} {}", two_pi * hn);
    assert!((rh - two_pi * hn).abs() < 1e-6 * rh);
}

#[test]
fn assembly_is_deterministic() {
    let p = params(1.0, 0.1);
    let s = make_ellipsoid([1.0, 1.0, 1.3], 12).unwrap();
    let a = assemble_c(&p, &s).unwrap().to_dense();
    let b = assemble_c(&p, &s).unwrap().to_dense();
    assert!(a.iter().zip(b.iter()).all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
}

#[test]
fn matrix_dump_lists_entries() {
    let c = assemble_k(&params(1.0, 0.0), &make_sphere(8).unwrap()).unwrap();
    let csv = c.to_csv();
    assert!(csv.starts_with("row,col,re,im\n"));
    assert!(csv.lines().count() > c.dim());
}
