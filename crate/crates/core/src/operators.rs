//! Discrete layer operators `C^a`, `K^a`, `W^a` on a parametrized surface.
//!
//! # Scheme
//!
//! *Singular quadrature.* The layer integral at a target `x_i = D w_i` is
//! computed in polar coordinates on the parameter sphere centred at `w_i`:
//! Gauss-Legendre in the polar angle (with its `sin` weight, so the `1/r`
//! singularity of `k` is integrated smoothly) times the trapezoid rule in the
//! azimuth with an even count. The leading `r^-2` part of `w` is odd under a
//! half turn of the azimuth, so the principal value cancels pairwise and the
//! rule converges spectrally for analytic densities.
//!
//! *Compression.* The operators are represented on the span of pulled-back
//! spinor harmonics `psi(D^{-1} x)` with `j <= L - 1/2`, `L = n_theta - 1`,
//! the largest space the outer grid integrates exactly on the sphere. Applied
//! basis functions are projected back by the outer grid and orthonormalized
//! through the Cholesky factor of the Gram matrix, so singular values and
//! norms are those of `L^2(sigma)`.
//!
//! *Symmetry.* On surfaces of revolution about the z axis the compressed
//! operators split into independent sectors of fixed `m_j`, and the azimuthal
//! part of the projection is exact; only the `n_theta` targets with `phi = 0`
//! are needed. Other surfaces use one coupled block and every grid node as a
//! target, which costs `O(n_theta^6)` and is meant for small resolutions.
//!
//! Identity residuals (jump relation, anticommutator, confinement) are measured
//! on a probe subspace of the leading modes. On the unit sphere every
//! compressed operator maps the space to itself and the probe is the full
//! space; elsewhere truncation pollutes the top modes and the probe keeps
//! orbital degree `<= L/2`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::harmonics::{HarmonicTable, ModeIndex, Sign};
use crate::kernels::{w_radial, yukawa};
use crate::modes::d_coefficients;
use crate::quadrature::gauss_legendre_on;
use crate::spinor::{sigma_dot_apply, Spinor2, Spinor4, Vector3};
use crate::surface::{Chart, SurfacePatchization};
use crate::{Error, Result, SpectralParams};

/// Lower bound of the eigenvalue-candidate threshold. Coupling constants
/// given to seven digits already shift `sigma_min` by about `1e-8`.
pub const DETECTION_FLOOR: f64 = 1e-6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const TARGET_CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    /// 4-spinor `C^a = [[(a+m)K, W], [W, (a-m)K]]`.
    C,
    K,
    W,
}

/// One invariant block of a compressed operator.
#[derive(Debug, Clone)]
pub struct Sector {
    /// `2 m_j` of the sector, `None` for a coupled block.
    pub mj2: Option<i32>,
    /// 2-spinor basis, ordered by `j` then `-` before `+`.
    pub modes: Vec<ModeIndex>,
    /// Number of leading modes spanning the probe subspace.
    pub probe: usize,
    /// The operator in orthonormal coordinates. For `C` the coordinates are
    /// the upper-slot modes followed by the lower-slot modes.
    pub matrix: DMatrix<Complex64>,
    /// Compressed multiplication by `sigma . N`.
    pub sigma_n: DMatrix<Complex64>,
}

impl Sector {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Probe columns in the operator's own coordinates.
    pub fn probe_columns(&self, kind: OperatorKind) -> Vec<usize> {
        let n = self.modes.len();
        match kind {
            OperatorKind::C => (0..self.probe).chain(n..n + self.probe).collect(),
            _ => (0..self.probe).collect(),
        }
    }

    /// `alpha . N` in the coordinates of `C`.
    pub fn alpha_n(&self) -> DMatrix<Complex64> {
        let n = self.modes.len();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        a.view_mut((0, n), (n, n)).copy_from(&self.sigma_n);
        a.view_mut((n, 0), (n, n)).copy_from(&self.sigma_n);
        a
    }

    /// `beta` in the coordinates of `C`.
    pub fn beta(&self) -> DMatrix<Complex64> {
        let n = self.modes.len();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if i != j {
                ZERO
            } else if i < n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    pub kind: OperatorKind,
    pub params: SpectralParams,
    pub n_theta: usize,
    /// Resolved orbital degree `L`.
    pub degree: usize,
    pub unit_sphere: bool,
    pub sectors: Vec<Sector>,
}

impl DiscreteOperator {
    pub fn dim(&self) -> usize {
        self.sectors.iter().map(Sector::dim).sum()
    }

    /// Expand to one dense matrix (sectors on the diagonal).
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut off = 0;
        for s in &self.sectors {
            let d = s.dim();
            m.view_mut((off, off), (d, d)).copy_from(&s.matrix);
            off += d;
        }
        m
    }

    /// Matrix as CSV rows `row,col,re,im` of nonzero entries.
    pub fn to_csv(&self) -> String {
        let m = self.to_dense();
        let mut out = String::from("row,col,re,im\n");
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if z != ZERO {
                    out.push_str(&format!("{i},{j},{:e},{:e}\n", z.re, z.im));
                }
            }
        }
        out
    }
}

/// Compressed `K`, `W` and `sigma . N` of one sector, before assembling `C`.
#[derive(Debug, Clone)]
struct LayerSector {
    mj2: Option<i32>,
    modes: Vec<ModeIndex>,
    probe: usize,
    k: DMatrix<Complex64>,
    w: DMatrix<Complex64>,
    s: DMatrix<Complex64>,
}

/// `C`, `K` and `W` sharing one assembly.
#[derive(Debug, Clone)]
pub struct LayerOperators {
    pub c: DiscreteOperator,
    pub k: DiscreteOperator,
    pub w: DiscreteOperator,
}

fn sector_layout(surf: &SurfacePatchization, degree: usize) -> Vec<(Option<i32>, Vec<ModeIndex>, usize)> {
    let j2_top = 2 * degree as u32 - 1;
    let probe_degree = if surf.is_unit_sphere() { degree } else { degree / 2 };
    let in_probe = |m: &ModeIndex| (m.j2 as usize) < 2 * probe_degree;
    let modes_for = |mj2: i32| {
        let mut v = vec![];
        for j2 in (mj2.unsigned_abs().max(1)..=j2_top).step_by(2) {
            v.push(ModeIndex { j2, mj2, sign: Sign::Minus });
            v.push(ModeIndex { j2, mj2, sign: Sign::Plus });
        }
        v
    };
    let top = j2_top as i32;
    if surf.is_axisymmetric() {
        (-top..=top)
            .step_by(2)
            .map(|mj2| {
                let modes = modes_for(mj2);
                let probe = modes.iter().take_while(|m| in_probe(m)).count();
                (Some(mj2), modes, probe)
            })
            .collect()
    } else {
        let mut modes = vec![];
        for j2 in (1..=j2_top).step_by(2) {
            for mj2 in (-(j2 as i32)..=j2 as i32).step_by(2) {
                modes.push(ModeIndex { j2, mj2, sign: Sign::Minus });
                modes.push(ModeIndex { j2, mj2, sign: Sign::Plus });
            }
        }
        let probe = modes.iter().take_while(|m| in_probe(m)).count();
        vec![(None, modes, probe)]
    }
}

/// Polar product rule on the unit sphere centred at `center`.
struct RotatedRule {
    cos_t: Vec<f64>,
    sin_t: Vec<f64>,
    w_t: Vec<f64>,
    cos_p: Vec<f64>,
    sin_p: Vec<f64>,
    dphi: f64,
}

impl RotatedRule {
    fn new(n_theta: usize) -> Self {
        let (t, w) = gauss_legendre_on(n_theta, 0.0, PI);
        let n_phi = 2 * n_theta;
        let dphi = 2.0 * PI / n_phi as f64;
        let phis: Vec<f64> = (0..n_phi).map(|l| dphi * l as f64).collect();
        RotatedRule {
            cos_t: t.iter().map(|x| x.cos()).collect(),
            sin_t: t.iter().map(|x| x.sin()).collect(),
            w_t: w,
            cos_p: phis.iter().map(|p| p.cos()).collect(),
            sin_p: phis.iter().map(|p| p.sin()).collect(),
            dphi,
        }
    }

    /// Calls `f(w_q, weight_q)` for every node, with `weight_q` the solid-angle weight.
    #[inline]
    fn for_each(&self, center: &Vector3, mut f: impl FnMut(&Vector3, f64)) {
        let e3 = *center;
        let seed = if e3.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (seed - e3 * seed.dot(&e3)).normalize();
        let e2 = e3.cross(&e1);
        for i in 0..self.cos_t.len() {
            let (ct, st) = (self.cos_t[i], self.sin_t[i]);
            let wt = self.w_t[i] * st * self.dphi;
            for l in 0..self.cos_p.len() {
                let dir = e1 * self.cos_p[l] + e2 * self.sin_p[l];
                let w = dir * st + e3 * ct;
                f(&w, wt);
            }
        }
    }
}

/// Basis functions applied at one target.
struct TargetData {
    weight: f64,
    psi: Vec<Spinor2>,
    spsi: Vec<Spinor2>,
    kpsi: Vec<Spinor2>,
    wpsi: Vec<Spinor2>,
}

fn target_data(
    kappa: f64,
    chart: &Chart,
    rule: &RotatedRule,
    degree: usize,
    basis: &[ModeIndex],
    w_i: &Vector3,
    weight: f64,
) -> TargetData {
    let size = (degree + 1) * (degree + 1);
    let (x_i, n_i, _) = chart.eval(w_i);
    let mut table = HarmonicTable::new(degree);
    let mut mk = vec![ZERO; size];
    let mut mw = [vec![ZERO; size], vec![ZERO; size], vec![ZERO; size]];
    rule.for_each(w_i, |w_q, wq| {
        let y = chart.point(w_q);
        let d = x_i - y;
        let r = d.norm();
        let wq = wq * chart.jacobian(w_q);
        let kq = yukawa(kappa, r) * wq;
        let c = w_radial(kappa, r) * wq;
        let (cx, cy, cz) = (c * d.x, c * d.y, c * d.z);
        table.fill(w_q);
        let yv = table.values();
        let [mwx, mwy, mwz] = &mut mw;
        for (idx, yq) in yv.iter().enumerate() {
            mk[idx] += yq * kq;
            mwx[idx] += yq * cx;
            mwy[idx] += yq * cy;
            mwz[idx] += yq * cz;
        }
    });
    table.fill(w_i);
    let n = basis.len();
    let mut out = TargetData {
        weight,
        psi: Vec::with_capacity(n),
        spsi: Vec::with_capacity(n),
        kpsi: Vec::with_capacity(n),
        wpsi: Vec::with_capacity(n),
    };
    let pick = |v: &[Complex64], deg: usize, k: i64| {
        if k.unsigned_abs() as usize > deg {
            ZERO
        } else {
            v[HarmonicTable::index(deg, k)]
        }
    };
    for b in basis {
        let psi = b.eval_with(&table);
        let deg = b.degree();
        let [k1, k2] = b.orders();
        let [c1, c2] = b.weights();
        let kp = Spinor2::new(pick(&mk, deg, k1) * c1, pick(&mk, deg, k2) * c2);
        let v = |m: &[Complex64]| (pick(m, deg, k1) * c1, pick(m, deg, k2) * c2);
        let (vx, vy, vz) = (v(&mw[0]), v(&mw[1]), v(&mw[2]));
        // i (sigma_x vx + sigma_y vy + sigma_z vz)
        let up = vx.1 - I * vy.1 + vz.0;
        let dn = vx.0 + I * vy.0 - vz.1;
        out.spsi.push(sigma_dot_apply(&n_i, &psi));
        out.psi.push(psi);
        out.kpsi.push(kp);
        out.wpsi.push(Spinor2::new(I * up, I * dn));
    }
    out
}

fn check_params(params: &SpectralParams) -> Result<SpectralParams> {
    if params.kappa == 0.0 && params.a.abs() == params.m {
        return Ok(*params);
    }
    let p = SpectralParams::new(params.m, params.a)?;
    Ok(SpectralParams { kappa: params.kappa, ..p })
}

/// Galerkin matrix `sum_i w_i <u_a(i), v_b(i)>` accumulated in place.
fn accumulate(acc: &mut DMatrix<Complex64>, weight: f64, u: &[Spinor2], v: &[Spinor2]) {
    let n = u.len();
    for b in 0..n {
        let vb = v[b] * Complex64::from(weight);
        for a in 0..n {
            let ua = &u[a];
            acc[(a, b)] += ua[0].conj() * vb[0] + ua[1].conj() * vb[1];
        }
    }
}

/// `L^{-1} X L^{-H}` with `G = L L^H`.
fn orthonormalize(l: &DMatrix<Complex64>, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let y = l.solve_lower_triangular(x).expect("Gram factor is nonsingular");
    let z = l.solve_lower_triangular(&y.adjoint()).expect("Gram factor is nonsingular");
    z.adjoint()
}

fn assemble_sectors(params: &SpectralParams, surf: &SurfacePatchization) -> Result<(usize, Vec<LayerSector>)> {
    let params = check_params(params)?;
    let degree = surf.n_theta - 1;
    let layout = sector_layout(surf, degree);
    let basis: Vec<ModeIndex> = layout.iter().flat_map(|(_, m, _)| m.iter().copied()).collect();
    let chart = surf.chart();
    let rule = RotatedRule::new(surf.n_theta);

    let targets: Vec<(Vector3, f64)> = if surf.is_axisymmetric() {
        surf.cos_theta
            .iter()
            .zip(&surf.cos_theta_weights)
            .map(|(t, w)| {
                let om = Vector3::new((1.0 - t * t).sqrt(), 0.0, *t);
                (om, w * 2.0 * PI * chart.jacobian(&om))
            })
            .collect()
    } else {
        surf.params.iter().copied().zip(surf.weights.iter().copied()).collect()
    };

    let mut offsets = vec![0usize];
    for (_, m, _) in &layout {
        offsets.push(offsets.last().unwrap() + m.len());
    }
    let zeros = |n: usize| DMatrix::<Complex64>::zeros(n, n);
    let mut acc: Vec<[DMatrix<Complex64>; 4]> =
        layout.iter().map(|(_, m, _)| [zeros(m.len()), zeros(m.len()), zeros(m.len()), zeros(m.len())]).collect();

    for chunk in targets.chunks(TARGET_CHUNK) {
        let data: Vec<TargetData> =
            chunk.par_iter().map(|(w, wt)| target_data(params.kappa, &chart, &rule, degree, &basis, w, *wt)).collect();
        for td in &data {
            for (s, a) in acc.iter_mut().enumerate() {
                let r = offsets[s]..offsets[s + 1];
                let [g, sm, k, w] = a;
                accumulate(g, td.weight, &td.psi[r.clone()], &td.psi[r.clone()]);
                accumulate(sm, td.weight, &td.psi[r.clone()], &td.spsi[r.clone()]);
                accumulate(k, td.weight, &td.psi[r.clone()], &td.kpsi[r.clone()]);
                accumulate(w, td.weight, &td.psi[r.clone()], &td.wpsi[r]);
            }
        }
    }

    let sectors = layout
        .into_iter()
        .zip(acc)
        .map(|((mj2, modes, probe), [g, sm, k, w])| {
            let g = (&g + g.adjoint()) * Complex64::from(0.5);
            let chol = g.cholesky().ok_or_else(|| {
                Error::DegenerateSurface("Gram matrix of the spinor basis is not positive definite".into())
            })?;
            let l = chol.l();
            Ok(LayerSector {
                mj2,
                modes,
                probe,
                k: orthonormalize(&l, &k),
                w: orthonormalize(&l, &w),
                s: orthonormalize(&l, &sm),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((degree, sectors))
}

/// Assemble `C`, `K` and `W` together.
pub fn assemble_layers(params: &SpectralParams, surf: &SurfacePatchization) -> Result<LayerOperators> {
    let (degree, sectors) = assemble_sectors(params, surf)?;
    let p = *params;
    let make = |kind: OperatorKind| {
        let sectors = sectors
            .iter()
            .map(|s| {
                let matrix = match kind {
                    OperatorKind::K => s.k.clone(),
                    OperatorKind::W => s.w.clone(),
                    OperatorKind::C => {
                        let n = s.modes.len();
                        let mut c = DMatrix::zeros(2 * n, 2 * n);
                        c.view_mut((0, 0), (n, n)).copy_from(&(&s.k * Complex64::from(p.a + p.m)));
                        c.view_mut((0, n), (n, n)).copy_from(&s.w);
                        c.view_mut((n, 0), (n, n)).copy_from(&s.w);
                        c.view_mut((n, n), (n, n)).copy_from(&(&s.k * Complex64::from(p.a - p.m)));
                        c
                    }
                };
                Sector { mj2: s.mj2, modes: s.modes.clone(), probe: s.probe, matrix, sigma_n: s.s.clone() }
            })
            .collect();
        DiscreteOperator { kind, params: p, n_theta: surf.n_theta, degree, unit_sphere: surf.is_unit_sphere(), sectors }
    };
    Ok(LayerOperators { c: make(OperatorKind::C), k: make(OperatorKind::K), w: make(OperatorKind::W) })
}

pub fn assemble_c(params: &SpectralParams, surf: &SurfacePatchization) -> Result<DiscreteOperator> {
    Ok(assemble_layers(params, surf)?.c)
}

pub fn assemble_k(params: &SpectralParams, surf: &SurfacePatchization) -> Result<DiscreteOperator> {
    Ok(assemble_layers(params, surf)?.k)
}

pub fn assemble_w(params: &SpectralParams, surf: &SurfacePatchization) -> Result<DiscreteOperator> {
    Ok(assemble_layers(params, surf)?.w)
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return vec![];
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}

/// `sigma_min((1/lambda) I + M)` over all sectors.
pub fn smallest_singular(op: &DiscreteOperator, lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidLambda { expected: "nonzero", got: lambda });
    }
    let shift = Complex64::from(1.0 / lambda);
    let mins: Vec<f64> = op
        .sectors
        .par_iter()
        .map(|s| {
            let mut m = s.matrix.clone();
            for i in 0..m.nrows() {
                m[(i, i)] += shift;
            }
            singular_values(&m).into_iter().fold(f64::INFINITY, f64::min)
        })
        .collect();
    Ok(mins.into_iter().fold(f64::INFINITY, f64::min))
}

/// Smallest singular value of the operator itself.
pub fn smallest_singular_unshifted(op: &DiscreteOperator) -> f64 {
    op.sectors
        .iter()
        .map(|s| singular_values(&s.matrix).into_iter().fold(f64::INFINITY, f64::min))
        .fold(f64::INFINITY, f64::min)
}

/// Largest singular value.
pub fn operator_norm(op: &DiscreteOperator) -> f64 {
    op.sectors.iter().map(|s| spectral_norm(&s.matrix)).fold(0.0, f64::max)
}

fn restrict(m: &DMatrix<Complex64>, cols: &[usize]) -> DMatrix<Complex64> {
    m.select_columns(cols)
}

fn expect_kind(op: &DiscreteOperator, kind: OperatorKind, name: &'static str) -> Result<()> {
    if op.kind != kind {
        return Err(Error::WrongKind { expected: name });
    }
    Ok(())
}

/// `|| (-4 (C A)^2 - I) P ||` with `A = alpha . N` and `P` the probe subspace.
pub fn jump_residual(op: &DiscreteOperator) -> Result<f64> {
    expect_kind(op, OperatorKind::C, "C")?;
    Ok(op
        .sectors
        .par_iter()
        .map(|s| {
            let ca = &s.matrix * s.alpha_n();
            let mut r = &ca * &ca * Complex64::from(-4.0);
            for i in 0..r.nrows() {
                r[(i, i)] -= Complex64::from(1.0);
            }
            spectral_norm(&restrict(&r, &s.probe_columns(OperatorKind::C)))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(0.0, f64::max))
}

/// `|| ((S K)(S W) + (S W)(S K)) P ||` with `S = sigma . N`.
pub fn anticommutator_residual(k: &DiscreteOperator, w: &DiscreteOperator) -> Result<f64> {
    expect_kind(k, OperatorKind::K, "K")?;
    expect_kind(w, OperatorKind::W, "W")?;
    if k.sectors.len() != w.sectors.len() {
        return Err(Error::DimensionMismatch("K and W from different surfaces".into()));
    }
    let mut worst = 0.0f64;
    for (sk, sw) in k.sectors.iter().zip(&w.sectors) {
        if sk.modes != sw.modes {
            return Err(Error::DimensionMismatch("K and W sectors differ".into()));
        }
        let a = &sk.sigma_n * &sk.matrix;
        let b = &sw.sigma_n * &sw.matrix;
        let r = &a * &b + &b * &a;
        worst = worst.max(spectral_norm(&restrict(&r, &sk.probe_columns(OperatorKind::K))));
    }
    Ok(worst)
}

/// `max || P (M - M^H) P || / || M ||` over sectors, on the probe block.
pub fn hermitian_defect(op: &DiscreteOperator) -> f64 {
    op.sectors
        .iter()
        .map(|s| {
            let cols = s.probe_columns(op.kind);
            let m = s.matrix.select_rows(&cols).select_columns(&cols);
            spectral_norm(&(&m - m.adjoint())) / spectral_norm(&s.matrix).max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue of `(M + M^H)/2`.
pub fn min_symmetric_eigenvalue(op: &DiscreteOperator) -> f64 {
    op.sectors
        .iter()
        .map(|s| {
            let h = (&s.matrix + s.matrix.adjoint()) * Complex64::from(0.5);
            h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// The exact sphere blocks of `kind` in the basis of `sector`.
fn mode_prediction(kind: OperatorKind, params: &SpectralParams, sector: &Sector, d: &[f64]) -> DMatrix<Complex64> {
    let n = sector.modes.len();
    let mut k = DMatrix::zeros(n, n);
    let mut w = DMatrix::zeros(n, n);
    for (b, mb) in sector.modes.iter().enumerate() {
        k[(b, b)] = Complex64::from(d[mb.degree()]);
        let lo = (mb.j2 as usize - 1) / 2;
        let pa = (0.25 - params.kappa * params.kappa * d[lo] * d[lo + 1]).sqrt();
        let p = match mb.sign {
            Sign::Plus => Complex64::new(0.0, -pa),
            Sign::Minus => Complex64::new(0.0, pa),
        };
        let a = sector.modes.iter().position(|m| *m == mb.partner()).expect("pair-closed basis");
        w[(a, b)] = p;
    }
    match kind {
        OperatorKind::K => k,
        OperatorKind::W => w,
        OperatorKind::C => {
            let mut c = DMatrix::zeros(2 * n, 2 * n);
            c.view_mut((0, 0), (n, n)).copy_from(&(&k * Complex64::from(params.a + params.m)));
            c.view_mut((0, n), (n, n)).copy_from(&w);
            c.view_mut((n, 0), (n, n)).copy_from(&w);
            c.view_mut((n, n), (n, n)).copy_from(&(&k * Complex64::from(params.a - params.m)));
            c
        }
    }
}

/// Distance of a sphere operator from its exact mode representation
/// (`d_n` on the diagonal of `K`, `p` on the antidiagonal of `W`).
pub fn mode_consistency_error(op: &DiscreteOperator) -> Result<f64> {
    if !op.unit_sphere {
        return Err(Error::NotSphere);
    }
    let d = d_coefficients(op.degree + 1, op.params.kappa)?;
    Ok(op
        .sectors
        .iter()
        .map(|s| spectral_norm(&(&s.matrix - mode_prediction(op.kind, &op.params, s, &d))))
        .fold(0.0, f64::max))
}

/// Smallest singular value of the compressed massless `W` on the unit sphere.
/// The sharp constant of `|f| <= 2 |W f|` makes this tend to `1/2`.
pub fn riesz_witness(surf: &SurfacePatchization) -> Result<f64> {
    if !surf.is_unit_sphere() {
        return Err(Error::NotSphere);
    }
    let w = assemble_w(&SpectralParams::newtonian(), surf)?;
    Ok(smallest_singular_unshifted(&w))
}

/// Kernel-detection summary for `(1/lambda) I + C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Detection {
    pub sigma_min: f64,
    pub jump_residual: f64,
    pub norm: f64,
    pub threshold: f64,
    pub candidate: bool,
}

/// Flags an eigenvalue candidate when `sigma_min` is below
/// `max(10 * jump_residual, DETECTION_FLOOR)`.
pub fn detect(op: &DiscreteOperator, lambda: f64) -> Result<Detection> {
    let sigma_min = smallest_singular(op, lambda)?;
    let jump = jump_residual(op)?;
    let threshold = (10.0 * jump).max(DETECTION_FLOOR);
    Ok(Detection {
        sigma_min,
        jump_residual: jump,
        norm: operator_norm(op),
        threshold,
        candidate: sigma_min < threshold,
    })
}

/// `C g` at every node of `surf` for a density given on the parameter sphere,
/// by the polar rule (no compression).
pub fn apply_c(
    params: &SpectralParams,
    surf: &SurfacePatchization,
    density: &(dyn Fn(&Vector3) -> Spinor4 + Sync),
) -> Result<Vec<Spinor4>> {
    let p = check_params(params)?;
    let chart = surf.chart();
    let rule = RotatedRule::new(surf.n_theta);
    Ok(surf
        .params
        .par_iter()
        .map(|w_i| {
            let x_i = chart.point(w_i);
            let mut up = Spinor2::zeros();
            let mut dn = Spinor2::zeros();
            rule.for_each(w_i, |w_q, wq| {
                let d = x_i - chart.point(w_q);
                let r = d.norm();
                let wq = wq * chart.jacobian(w_q);
                let g = density(w_q);
                let (gu, gl) = (Spinor2::new(g[0], g[1]), Spinor2::new(g[2], g[3]));
                let k = yukawa(p.kappa, r) * wq;
                let c = Complex64::new(0.0, w_radial(p.kappa, r) * wq);
                up += gu * Complex64::from((p.a + p.m) * k) + sigma_dot_apply(&d, &gl) * c;
                dn += sigma_dot_apply(&d, &gu) * c + gl * Complex64::from((p.a - p.m) * k);
            });
            Spinor4::new(up[0], up[1], dn[0], dn[1])
        })
        .collect())
}

/// Weighted `L^2(sigma)` norm of node samples.
pub fn weighted_norm<const D: usize>(surf: &SurfacePatchization, v: &[nalgebra::SVector<Complex64, D>]) -> f64 {
    v.iter().zip(&surf.weights).map(|(x, w)| w * x.norm_squared()).sum::<f64>().sqrt()
}
