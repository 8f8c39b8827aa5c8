//! Point spectrum of the electrostatic shell interaction on the unit sphere.
//!
//! For `lambda > 0` and `|a| < m`, `a` is an eigenvalue of `H + V_lambda`
//! with an eigenfunction built from the modes `(j, m_j)` iff one of
//!
//! ```text
//! lambda^2/4 - t lambda - 1 = 0,
//! t = (m + a) d_{j-+1/2} - (m - a) d_{j+-1/2}
//! ```
//!
//! holds. [`Sign::Plus`] selects the upper signs (`t` built from `d_{j-1/2}`
//! first). The roots are `2 t +- 2 sqrt(t^2 + 1)`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

pub use crate::harmonics::Sign;
use crate::harmonics::{HarmonicTable, ModeIndex};
use crate::kernels::phi_a;
use crate::modes::{d_coefficients, mode_coefficients, ModeCoefficients};
use crate::spinor::{stack, Complex2Matrix, Spinor4, Vector3};
use crate::surface::SurfacePatchization;
use crate::{Error, Result, SpectralParams};

/// Tolerance on the condition residual accepted by [`construct_eigendensity`].
pub const CONDITION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenQuery {
    pub m: f64,
    pub a: f64,
    pub lambda: f64,
    pub j2: u32,
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub a: f64,
    pub lambda: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCurve {
    pub j2: u32,
    pub sign: Sign,
    pub m: f64,
    pub samples: Vec<CurvePoint>,
}

fn check_j2(j2: u32) -> Result<()> {
    if j2 % 2 == 0 {
        return Err(Error::InvalidMode { j2, mj2: 1 });
    }
    Ok(())
}

/// `t = (m + a) d_{j-+1/2} - (m - a) d_{j+-1/2}` from given coefficients.
fn trace_term(m: f64, a: f64, c: &ModeCoefficients, sign: Sign) -> f64 {
    (m + a) * c.d_opposite(sign) - (m - a) * c.d_same(sign)
}

fn trace_at(m: f64, a: f64, j2: u32, sign: Sign) -> Result<f64> {
    check_j2(j2)?;
    let p = SpectralParams::interior(m, a)?;
    let c = mode_coefficients(j2, p.kappa)?;
    Ok(trace_term(m, a, &c, sign))
}

/// `lambda^2/4 - t lambda - 1`.
pub fn condition_residual(q: &EigenQuery) -> Result<f64> {
    let t = trace_at(q.m, q.a, q.j2, q.sign)?;
    Ok(q.lambda * q.lambda / 4.0 - t * q.lambda - 1.0)
}

/// Roots of `lambda^2 - 4 t lambda - 4 = 0` by the cancellation-free formula.
fn roots_of(t: f64) -> (f64, f64) {
    let s = (t * t + 1.0).sqrt();
    if t >= 0.0 {
        let pos = 2.0 * (t + s);
        (pos, -4.0 / pos)
    } else {
        let neg = 2.0 * (t - s);
        (-4.0 / neg, neg)
    }
}

/// `(root_pos, root_neg)` of the eigenvalue condition.
pub fn solve_lambda(m: f64, a: f64, j2: u32, sign: Sign) -> Result<(f64, f64)> {
    Ok(roots_of(trace_at(m, a, j2, sign)?))
}

/// Positive roots along `a_grid`, in grid order.
pub fn trace_curve(m: f64, j2: u32, sign: Sign, a_grid: &[f64]) -> Result<EigenCurve> {
    if a_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    check_j2(j2)?;
    let samples = a_grid
        .par_iter()
        .map(|&a| {
            let (lambda, _) = solve_lambda(m, a, j2, sign)?;
            let residual = condition_residual(&EigenQuery { m, a, lambda, j2, sign })?;
            Ok(CurvePoint { a, lambda, residual })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EigenCurve { j2, sign, m, samples })
}

/// Positive root at the gap edges `a -> -m` and `a -> m`, where `kappa -> 0`
/// and `d_n -> 1 / (2n + 1)`.
fn edge_roots(m: f64, j2: u32, sign: Sign) -> (f64, f64) {
    let n = (j2 as f64 - 1.0) / 2.0;
    let c = ModeCoefficients { j2, d_minus: 1.0 / (2.0 * n + 1.0), d_plus: 1.0 / (2.0 * n + 3.0), p_abs: 0.5 };
    let at_lower = roots_of(trace_term(m, -m, &c, sign)).0;
    let at_upper = roots_of(trace_term(m, m, &c, sign)).0;
    (at_lower, at_upper)
}

/// Closure of `{root_pos(a) : -m < a < m}` as `(lo, hi)`.
///
/// Combines the two edge limits with a 2001-point interior sweep whose
/// interior extrema, if any, are refined by golden-section search.
pub fn admissible_interval(m: f64, j2: u32, sign: Sign) -> Result<(f64, f64)> {
    check_j2(j2)?;
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::InvalidMass(m));
    }
    let (e_lo, e_hi) = edge_roots(m, j2, sign);
    let n = 2000usize;
    let grid: Vec<f64> = (0..=n).map(|i| -m + 2.0 * m * i as f64 / n as f64).collect();
    let vals: Vec<f64> = grid
        .par_iter()
        .map(
            |&a| {
                if a.abs() >= m {
                    Ok(if a < 0.0 { e_lo } else { e_hi })
                } else {
                    Ok(solve_lambda(m, a, j2, sign)?.0)
                }
            },
        )
        .collect::<Result<Vec<_>>>()?;
    let f = |a: f64| solve_lambda(m, a, j2, sign).map(|r| r.0);
    let mut lo = e_lo.min(e_hi);
    let mut hi = e_lo.max(e_hi);
    for i in 1..n {
        let (l, c, r) = (vals[i - 1], vals[i], vals[i + 1]);
        if c <= l && c <= r && c < lo {
            lo = lo.min(golden(&f, grid[i - 1], grid[i + 1], false)?);
        }
        if c >= l && c >= r && c > hi {
            hi = hi.max(golden(&f, grid[i - 1], grid[i + 1], true)?);
        }
        lo = lo.min(c);
        hi = hi.max(c);
    }
    Ok((lo, hi))
}

fn golden(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, maximize: bool) -> Result<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let s = if maximize { -1.0 } else { 1.0 };
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (s * f(c)?, s * f(d)?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = s * f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = s * f(d)?;
        }
    }
    Ok(s * fc.min(fd))
}

/// Action of `C` on span{`(psi_{j-+1/2}, 0)`, `(0, psi_{j+-1/2})`}:
///
/// ```text
/// [[(m + a) d_{j-+1/2}, p_{j+-1/2}],
///  [p_{j-+1/2},         (a - m) d_{j+-1/2}]]
/// ```
///
/// Hermitian with determinant `-1/4`.
pub fn mode_block(j2: u32, sign: Sign, params: &SpectralParams) -> Result<Complex2Matrix> {
    check_j2(j2)?;
    let p = SpectralParams::new(params.m, params.a)?;
    let c = mode_coefficients(j2, p.kappa)?;
    Ok(block_from(&c, sign, &p))
}

fn block_from(c: &ModeCoefficients, sign: Sign, p: &SpectralParams) -> Complex2Matrix {
    Matrix2::new(
        Complex64::from((p.m + p.a) * c.d_opposite(sign)),
        c.p(sign),
        c.p(sign.flip()),
        Complex64::from((p.a - p.m) * c.d_same(sign)),
    )
}

/// `sup_{j <= j2_max/2}` of the spectral norms of the mode blocks.
pub fn mode_norm_sup(params: &SpectralParams, j2_max: u32) -> Result<f64> {
    check_j2(j2_max)?;
    let d = d_coefficients((j2_max as usize).div_ceil(2), params.kappa)?;
    let mut sup = 0.0f64;
    for j2 in (1..=j2_max).step_by(2) {
        let n = (j2 as usize - 1) / 2;
        let radicand = 0.25 - params.kappa * params.kappa * d[n] * d[n + 1];
        let c = ModeCoefficients { j2, d_minus: d[n], d_plus: d[n + 1], p_abs: radicand.sqrt() };
        for sign in [Sign::Plus, Sign::Minus] {
            sup = sup.max(hermitian2_norm(&block_from(&c, sign, params)));
        }
    }
    Ok(sup)
}

/// Spectral norm of a Hermitian 2x2 matrix.
fn hermitian2_norm(b: &Complex2Matrix) -> f64 {
    let (x, y) = (b[(0, 0)].re, b[(1, 1)].re);
    let h = 0.5 * (x - y);
    let r = (h * h + b[(0, 1)].norm_sqr()).sqrt();
    (0.5 * (x + y)).abs() + r
}

/// `-4 / lambda`: the coupling with the same eigenvalues in the gap.
pub fn isospectral_partner(lambda: f64) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidLambda { expected: "nonzero", got: lambda });
    }
    Ok(-4.0 / lambda)
}

/// Density `g = (f, h)` with `h = psi_{j+-1/2}^{m_j}` and
/// `f = -(1/lambda + (m + a) K)^{-1} W h = f_coeff psi_{j-+1/2}^{m_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenDensity {
    pub j2: u32,
    pub mj2: i32,
    pub sign: Sign,
    pub lambda: f64,
    pub params: SpectralParams,
    pub f_coeff: Complex64,
}

impl EigenDensity {
    /// Coefficients in the basis of [`mode_block`].
    pub fn coefficients(&self) -> nalgebra::Vector2<Complex64> {
        nalgebra::Vector2::new(self.f_coeff, Complex64::new(1.0, 0.0))
    }

    /// Relative residual `|C g + g / lambda| / |g|` in mode space.
    pub fn mode_residual(&self) -> Result<f64> {
        let b = mode_block(self.j2, self.sign, &self.params)?;
        let v = self.coefficients();
        Ok((b * v + v / Complex64::from(self.lambda)).norm() / v.norm())
    }

    /// `g` at a point of the unit sphere.
    pub fn eval(&self, table: &HarmonicTable) -> Spinor4 {
        let h = ModeIndex { j2: self.j2, mj2: self.mj2, sign: self.sign };
        let f = h.partner();
        stack(&(f.eval_with(table) * self.f_coeff), &h.eval_with(table))
    }

    /// Samples at the nodes of a surface, through its parameter sphere.
    pub fn sample(&self, surf: &SurfacePatchization) -> Vec<Spinor4> {
        let mut t = HarmonicTable::new((self.j2 as usize).div_ceil(2));
        surf.params
            .iter()
            .map(|w| {
                t.fill(w);
                self.eval(&t)
            })
            .collect()
    }
}

pub fn construct_eigendensity(
    j2: u32,
    mj2: i32,
    sign: Sign,
    params: &SpectralParams,
    lambda: f64,
) -> Result<EigenDensity> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidLambda { expected: "positive", got: lambda });
    }
    ModeIndex::new(j2, mj2, sign)?;
    let p = SpectralParams::interior(params.m, params.a)?;
    let residual = condition_residual(&EigenQuery { m: p.m, a: p.a, lambda, j2, sign })?;
    if residual.abs() > CONDITION_TOL {
        return Err(Error::ConditionNotSatisfied(residual));
    }
    let c = mode_coefficients(j2, p.kappa)?;
    let f_coeff = -c.p(sign) / (1.0 / lambda + (p.m + p.a) * c.d_opposite(sign));
    Ok(EigenDensity { j2, mj2, sign, lambda, params: p, f_coeff })
}

/// Layer potential `phi(x) = int phi^a(x - y) g(y) dsigma(y)` by the
/// surface quadrature. Accurate when `x` is a few node spacings away from the
/// surface.
pub fn evaluate_eigenfunction(
    g: &[Spinor4],
    surf: &SurfacePatchization,
    params: &SpectralParams,
    x: &Vector3,
) -> Result<Spinor4> {
    if g.len() != surf.len() {
        return Err(Error::DimensionMismatch(format!("{} density samples for {} nodes", g.len(), surf.len())));
    }
    if params.a == 0.0 {
        return Err(Error::ZeroSpectralPoint);
    }
    let p = SpectralParams::interior(params.m, params.a)?;
    if (surf.level(x) - 1.0).abs() < 1e-10 {
        return Err(Error::OnSurface);
    }
    let mut acc = Spinor4::zeros();
    for ((y, w), gi) in surf.nodes.iter().zip(&surf.weights).zip(g) {
        acc += phi_a(&p, &(x - y))? * gi * Complex64::from(*w);
    }
    Ok(acc)
}
