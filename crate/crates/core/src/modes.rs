//! Diagonal data of the layer operators on the unit sphere.
//!
//! On `S^2` the scalar operator `K^a` acts on degree-`n` harmonics by the
//! Funk-Hecke eigenvalue `d_n`, and `W^a` swaps the two spinor harmonics of
//! the same `(j, m_j)`:
//!
//! ```text
//! K psi_{j+-1/2} = d_{j+-1/2} psi_{j+-1/2}
//! W psi_{j-1/2}  = +i|p_j| psi_{j+1/2},   W psi_{j+1/2} = -i|p_j| psi_{j-1/2}
//! |p_j|^2 = 1/4 - kappa^2 d_{j-1/2} d_{j+1/2}
//! ```
//!
//! The phase of `p` is fixed by the harmonic conventions in [`crate::harmonics`]
//! and is checked against the discretized `W` in the operator tests.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::harmonics::{ModeIndex, Sign};
use crate::quadrature::{gauss_legendre_on, legendre_all};
use crate::{Error, Result, SpectralParams};

/// Default scan bound, `j <= 199.5`.
pub const DEFAULT_J2_MAX: u32 = 399;

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::NegativeKappa(kappa));
    }
    Ok(())
}

/// Node count of the Funk-Hecke rule. The integrand is a polynomial of degree
/// `2n` in `s` times `e^{-kappa s}`.
fn funk_hecke_nodes(n_max: usize, kappa: f64) -> usize {
    200usize.max(n_max + 100) + (4.0 * kappa).ceil() as usize
}

/// `d_0, ..., d_{n_max}` at decay rate `kappa`.
///
/// With `s = sqrt(2 (1 - cos phi))` the Funk-Hecke integral becomes
/// `d_n = 1/2 int_0^2 e^{-kappa s} P_n(1 - s^2/2) ds`, which is smooth.
pub fn d_coefficients(n_max: usize, kappa: f64) -> Result<Vec<f64>> {
    check_kappa(kappa)?;
    let (s, w) = gauss_legendre_on(funk_hecke_nodes(n_max, kappa), 0.0, 2.0);
    let mut d = vec![0.0; n_max + 1];
    let mut p = Vec::with_capacity(n_max + 1);
    for (si, wi) in s.iter().zip(&w) {
        legendre_all(n_max, 1.0 - 0.5 * si * si, &mut p);
        let f = 0.5 * wi * (-kappa * si).exp();
        for (dn, pn) in d.iter_mut().zip(&p) {
            *dn += f * pn;
        }
    }
    Ok(d)
}

pub fn d_coefficient(n: usize, kappa: f64) -> Result<f64> {
    Ok(d_coefficients(n, kappa)?[n])
}

/// `d_0 = (1 - e^{-2 kappa}) / (2 kappa)`, equal to 1 at `kappa = 0`.
pub fn d0_closed(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return 1.0;
    }
    -(-2.0 * kappa).exp_m1() / (2.0 * kappa)
}

/// `d_1 = (1 - 1/kappa^2 + (1 + 1/kappa)^2 e^{-2 kappa}) / (2 kappa)`.
///
/// Loses about `eps / kappa^3` to cancellation; use [`d_coefficient`] for small `kappa`.
pub fn d1_closed(kappa: f64) -> f64 {
    let e = (-2.0 * kappa).exp();
    let ik = 1.0 / kappa;
    (1.0 - ik * ik + (1.0 + ik) * (1.0 + ik) * e) / (2.0 * kappa)
}

/// Closed form of `|p_{1/2}| = (1 - (1 + kappa) e^{-2 kappa}) / (2 kappa)`.
pub fn m_closed(kappa: f64) -> f64 {
    if kappa == 0.0 {
        return 0.5;
    }
    let e = (-2.0 * kappa).exp();
    (-(-2.0 * kappa).exp_m1() - kappa * e) / (2.0 * kappa)
}

/// Lower bound `e^{-kappa} sqrt(2 - e^{-2 kappa}) / 2` for every `|p_j|`.
pub fn p_lower_bound(kappa: f64) -> f64 {
    0.5 * (-kappa).exp() * (2.0 - (-2.0 * kappa).exp()).sqrt()
}

/// Per-`j` coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeCoefficients {
    pub j2: u32,
    pub d_minus: f64,
    pub d_plus: f64,
    pub p_abs: f64,
}

impl ModeCoefficients {
    fn from_d(j2: u32, d: &[f64], kappa: f64) -> Self {
        let n = (j2 as usize - 1) / 2;
        let (d_minus, d_plus) = (d[n], d[n + 1]);
        let radicand = 0.25 - kappa * kappa * d_minus * d_plus;
        assert!(radicand > 0.0, "1/4 - kappa^2 d- d+ must be positive, got {radicand}");
        ModeCoefficients { j2, d_minus, d_plus, p_abs: radicand.sqrt() }
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    /// `d_{j -+ 1/2}`: the coefficient paired with `psi_{j +- 1/2}` in the
    /// eigenvalue condition and in the uncertainty inequality.
    pub fn d_opposite(&self, sign: Sign) -> f64 {
        match sign {
            Sign::Plus => self.d_minus,
            Sign::Minus => self.d_plus,
        }
    }

    pub fn d_same(&self, sign: Sign) -> f64 {
        match sign {
            Sign::Plus => self.d_plus,
            Sign::Minus => self.d_minus,
        }
    }

    /// `p_{j +- 1/2}`, with `W psi_{j+-1/2} = p_{j+-1/2} psi_{j-+1/2}`.
    pub fn p(&self, sign: Sign) -> Complex64 {
        match sign {
            Sign::Plus => Complex64::new(0.0, -self.p_abs),
            Sign::Minus => Complex64::new(0.0, self.p_abs),
        }
    }
}

fn check_j2(j2: u32) -> Result<()> {
    if j2 % 2 == 0 {
        return Err(Error::InvalidMode { j2, mj2: 1 });
    }
    Ok(())
}

pub fn mode_coefficients(j2: u32, kappa: f64) -> Result<ModeCoefficients> {
    check_j2(j2)?;
    let d = d_coefficients((j2 as usize).div_ceil(2), kappa)?;
    Ok(ModeCoefficients::from_d(j2, &d, kappa))
}

/// Coefficients for `j = 1/2, 3/2, ..., j2_max/2`.
pub fn mode_table(j2_max: u32, kappa: f64) -> Result<Vec<ModeCoefficients>> {
    check_j2(j2_max)?;
    let d = d_coefficients((j2_max as usize).div_ceil(2), kappa)?;
    Ok((1..=j2_max).step_by(2).map(|j2| ModeCoefficients::from_d(j2, &d, kappa)).collect())
}

/// `|p_{j +- 1/2}| = sqrt(1/4 - kappa^2 d_{j-1/2} d_{j+1/2})`.
pub fn p_abs(j2: u32, kappa: f64) -> Result<f64> {
    Ok(mode_coefficients(j2, kappa)?.p_abs)
}

/// Result of [`min_p`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinP {
    pub value: f64,
    pub j2_argmin: u32,
    /// The last (up to) 50 scanned `|p_j|` increase strictly and stay above
    /// `value`. A heuristic, not a proof that the minimum is global.
    pub tail_certified: bool,
}

fn min_of(table: &[ModeCoefficients]) -> MinP {
    let mut best = table[0];
    for c in table {
        if c.p_abs < best.p_abs {
            best = *c;
        }
    }
    let tail = &table[table.len().saturating_sub(50)..];
    let increasing = tail.windows(2).all(|w| w[1].p_abs > w[0].p_abs);
    let above = tail.len() < table.len() && tail.iter().all(|c| c.p_abs > best.p_abs);
    MinP { value: best.p_abs, j2_argmin: best.j2, tail_certified: increasing && above }
}

/// Minimum of `|p_j|` over `j = 1/2, ..., j2_max/2`; ties resolve to the smallest `j`.
pub fn min_p(kappa: f64, j2_max: u32) -> Result<MinP> {
    Ok(min_of(&mode_table(j2_max, kappa)?))
}

fn check_lambda_positive(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidLambda { expected: "positive", got: lambda });
    }
    Ok(())
}

/// Data of the sharp uncertainty inequality at one `(lambda, a, delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyContext {
    pub lambda: f64,
    pub a: f64,
    pub delta: f64,
    pub m_value: f64,
    pub j2_argmin: u32,
}

/// The `delta` for which `f = psi_{j0 +- 1/2}` attains equality:
/// `delta = M / (1/lambda + (m + a) d_{j0 -+ 1/2})`.
pub fn delta_star(lambda: f64, params: &SpectralParams, j2_0: u32, sign: Sign) -> Result<f64> {
    check_lambda_positive(lambda)?;
    SpectralParams::interior(params.m, params.a)?;
    let table = mode_table(j2_0.max(DEFAULT_J2_MAX) | 1, params.kappa)?;
    check_j2(j2_0)?;
    let mv = min_of(&table).value;
    let c = table[(j2_0 as usize - 1) / 2];
    Ok(mv / (1.0 / lambda + (params.m + params.a) * c.d_opposite(sign)))
}

pub fn uncertainty_context(lambda: f64, params: &SpectralParams, j2_0: u32, sign: Sign) -> Result<UncertaintyContext> {
    let delta = delta_star(lambda, params, j2_0, sign)?;
    let mp = min_p(params.kappa, j2_0.max(DEFAULT_J2_MAX) | 1)?;
    Ok(UncertaintyContext { lambda, a: params.a, delta, m_value: mp.value, j2_argmin: mp.j2_argmin })
}

/// Both sides of the uncertainty inequality for `f = sum c_i psi_i`,
/// evaluated exactly in mode space. Repeated modes are summed first.
pub fn verify_uncertainty(
    coeffs: &[(ModeIndex, Complex64)],
    lambda: f64,
    params: &SpectralParams,
    delta: f64,
) -> Result<(f64, f64)> {
    check_lambda_positive(lambda)?;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidDelta(delta));
    }
    SpectralParams::interior(params.m, params.a)?;
    let mut merged: BTreeMap<(u32, i32, bool), Complex64> = BTreeMap::new();
    for (idx, c) in coeffs {
        let idx = ModeIndex::new(idx.j2, idx.mj2, idx.sign)?;
        *merged.entry((idx.j2, idx.mj2, idx.sign == Sign::Plus)).or_default() += c;
    }
    let j2_top = merged.keys().map(|k| k.0).max().unwrap_or(1);
    let table = mode_table(j2_top.max(DEFAULT_J2_MAX) | 1, params.kappa)?;
    let mv = min_of(&table).value;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for ((j2, _, plus), c) in merged {
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let mc = table[(j2 as usize - 1) / 2];
        let dd = 1.0 / lambda + (params.m + params.a) * mc.d_opposite(sign);
        let w = c.norm_sqr();
        lhs += w;
        rhs += w * (mc.p_abs * mc.p_abs / (2.0 * mv * delta * dd) + delta * dd / (2.0 * mv));
    }
    Ok((lhs, rhs))
}

/// Sharp constants `(2, 2 pi)` of `|f| <= 2 |W f|` and `2 pi |h| <= |R h|`.
pub fn riesz_constants() -> (f64, f64) {
    (2.0, 2.0 * std::f64::consts::PI)
}

/// One row of [`scan_question`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionEntry {
    pub kappa: f64,
    pub d0_d1: f64,
    /// Largest `d_{j+1/2} d_{j-1/2} / (d_1 d_0)` over `j >= 3/2`.
    pub max_ratio: f64,
    /// `2j` of every `j >= 3/2` with `d_{j+1/2} d_{j-1/2} >= d_1 d_0`.
    pub violations: Vec<u32>,
    pub m_scan: f64,
    pub j2_argmin: u32,
    /// Closed form `M(kappa)`; meaningful when the minimum sits at `j = 1/2`.
    pub m_formula: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionReport {
    pub j2_max: u32,
    pub entries: Vec<QuestionEntry>,
}

impl QuestionReport {
    pub fn total_violations(&self) -> usize {
        self.entries.iter().map(|e| e.violations.len()).sum()
    }
}

/// Scans whether `d_{j+1/2} d_{j-1/2} < d_1 d_0` for `3/2 <= j <= j2_max/2`.
/// Exploratory: the report is data, not a proof.
pub fn scan_question(kappa_grid: &[f64], j2_max: u32) -> Result<QuestionReport> {
    if j2_max < 3 {
        return Err(Error::EmptyScan(j2_max));
    }
    let j2_max = j2_max | 1;
    let mut entries = Vec::with_capacity(kappa_grid.len());
    for &kappa in kappa_grid {
        let table = mode_table(j2_max, kappa)?;
        let base = table[0].d_minus * table[0].d_plus;
        let mut violations = vec![];
        let mut max_ratio = 0.0f64;
        for c in &table[1..] {
            let prod = c.d_minus * c.d_plus;
            max_ratio = max_ratio.max(prod / base);
            if prod >= base {
                violations.push(c.j2);
            }
        }
        let mp = min_of(&table);
        entries.push(QuestionEntry {
            kappa,
            d0_d1: base,
            max_ratio,
            violations,
            m_scan: mp.value,
            j2_argmin: mp.j2_argmin,
            m_formula: m_closed(kappa),
        });
    }
    Ok(QuestionReport { j2_max, entries })
}
