//! Fundamental solution of `H - a` for the free Dirac operator
//! `H = -i alpha . grad + m beta`, and its 2x2 blocks.
//!
//! ```text
//! phi(x) = e^{-k|x|} / (4 pi |x|) (a + m beta + (1 + k|x|) i alpha.x / |x|^2),   k = sqrt(m^2 - a^2)
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::spinor::{alpha_dot, beta, from_blocks, sigma_dot, Complex2Matrix, Complex4Matrix, Vector3};
use crate::{Error, Result};

/// Mass `m`, spectral point `a` and the decay rate `kappa = sqrt(m^2 - a^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralParams {
    pub m: f64,
    pub a: f64,
    pub kappa: f64,
}

impl SpectralParams {
    /// Requires `m > 0` and `|a| <= m`.
    pub fn new(m: f64, a: f64) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidMass(m));
        }
        if !a.is_finite() || a.abs() > m {
            return Err(Error::OutsideGap { m, a });
        }
        let kappa = ((m - a) * (m + a)).max(0.0).sqrt();
        Ok(SpectralParams { m, a, kappa })
    }

    /// Like [`SpectralParams::new`] but rejects the gap edges `|a| = m`.
    pub fn interior(m: f64, a: f64) -> Result<Self> {
        if m.is_finite() && m > 0.0 && !(a.abs() < m) {
            return Err(Error::NotInterior { m, a });
        }
        Self::new(m, a)
    }

    /// The massless-limit kernel `w(x) = i sigma.x / (4 pi |x|^3)` is reached at `kappa = 0`.
    pub fn newtonian() -> Self {
        SpectralParams { m: 1.0, a: 1.0, kappa: 0.0 }
    }
}

#[inline]
fn radius(x: &Vector3) -> Result<f64> {
    let r = x.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::SingularPoint);
    }
    Ok(r)
}

/// Yukawa potential `e^{-kappa r} / (4 pi r)`.
#[inline]
pub fn yukawa(kappa: f64, r: f64) -> f64 {
    (-kappa * r).exp() / (4.0 * PI * r)
}

/// Radial factor of `w`: `e^{-kappa r} (1 + kappa r) / (4 pi r^3)`.
#[inline]
pub fn w_radial(kappa: f64, r: f64) -> f64 {
    (-kappa * r).exp() * (1.0 + kappa * r) / (4.0 * PI * r * r * r)
}

/// Scalar kernel `k^a(x)`.
pub fn k_a(p: &SpectralParams, x: &Vector3) -> Result<f64> {
    Ok(yukawa(p.kappa, radius(x)?))
}

/// `w^a(x) = e^{-kappa|x|} (1 + kappa|x|) / (4 pi |x|^3) i sigma.x`.
pub fn w_a(p: &SpectralParams, x: &Vector3) -> Result<Complex2Matrix> {
    let r = radius(x)?;
    Ok(sigma_dot(x) * Complex64::new(0.0, w_radial(p.kappa, r)))
}

/// `phi^a(x)`, block form `[[(a+m)k, w], [w, (a-m)k]]`.
pub fn phi_a(p: &SpectralParams, x: &Vector3) -> Result<Complex4Matrix> {
    let k = k_a(p, x)?;
    let w = w_a(p, x)?;
    let e = Complex2Matrix::identity();
    Ok(from_blocks(&(e * Complex64::from((p.a + p.m) * k)), &w, &w, &(e * Complex64::from((p.a - p.m) * k))))
}

/// Split `phi^a = w1 + w2 + w3` with
///
/// ```text
/// w1 = e^{-k r}/(4 pi r) (a + m beta + i k alpha.x/r)
/// w2 = (e^{-k r} - 1)/(4 pi) i alpha.x / r^3
/// w3 = i alpha.x / (4 pi r^3)
/// ```
///
/// `w1` and `w2` are `O(1/r)` at the origin; `w3` is odd and independent of `a`.
pub fn omega_split(p: &SpectralParams, x: &Vector3) -> Result<(Complex4Matrix, Complex4Matrix, Complex4Matrix)> {
    let r = radius(x)?;
    let ax = alpha_dot(x);
    let decay = (-p.kappa * r).exp();
    let id = Complex4Matrix::identity();
    let w1 = (id * Complex64::from(p.a) + beta() * Complex64::from(p.m) + ax * Complex64::new(0.0, p.kappa / r))
        * Complex64::from(decay / (4.0 * PI * r));
    let w2 = ax * Complex64::new(0.0, (-p.kappa * r).exp_m1() / (4.0 * PI * r * r * r));
    let w3 = ax * Complex64::new(0.0, 1.0 / (4.0 * PI * r * r * r));
    Ok((w1, w2, w3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::blocks;

    fn p(m: f64, a: f64) -> SpectralParams {
        SpectralParams::new(m, a).unwrap()
    }

    fn max_abs(m: &Complex4Matrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn params_validation() {
        assert!(SpectralParams::new(0.0, 0.0).is_err());
        assert!(SpectralParams::new(1.0, 1.5).is_err());
        assert!(SpectralParams::new(1.0, f64::NAN).is_err());
        assert_eq!(SpectralParams::new(1.0, 1.0).unwrap().kappa, 0.0);
        assert!(SpectralParams::interior(1.0, 1.0).is_err());
        assert!((p(2.0, 1.0).kappa - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn singular_point_rejected() {
        let z = Vector3::zeros();
        assert_eq!(phi_a(&p(1.0, 0.0), &z), Err(Error::SingularPoint));
        assert!(k_a(&p(1.0, 0.0), &z).is_err());
        assert!(w_a(&p(1.0, 0.0), &z).is_err());
        assert!(omega_split(&p(1.0, 0.0), &z).is_err());
    }

    #[test]
    fn yukawa_values() {
        let e1 = Vector3::new(1.0, 0.0, 0.0);
        assert!((k_a(&p(1.0, 1.0), &e1).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-16);
        let v = k_a(&p(1.0, 0.0), &Vector3::new(0.0, 0.6, 0.8)).unwrap();
        assert!((v - 0.029_274_915_762_16).abs() < 1e-13, "{v}");
    }

    #[test]
    fn w_is_odd() {
        let q = p(1.0, 0.3);
        let x = Vector3::new(1.0, 2.0, 3.0);
        let d = w_a(&q, &x).unwrap() + w_a(&q, &-x).unwrap();
        assert!(d.iter().all(|z| z.norm() < 1e-16));
    }

    #[test]
    fn adjoint_symmetry() {
        let q = p(1.0, 0.0);
        let (x, y) = (Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0));
        let d = phi_a(&q, &(x - y)).unwrap() - phi_a(&q, &(y - x)).unwrap().adjoint();
        assert!(max_abs(&d) < 1e-15);
    }

    #[test]
    fn upper_block_is_scaled_yukawa() {
        let q = p(1.0, 0.5);
        let x = Vector3::new(0.0, 0.0, 2.0);
        let [ul, ur, ll, lr] = blocks(&phi_a(&q, &x).unwrap());
        let k = k_a(&q, &x).unwrap();
        let e = Complex2Matrix::identity();
        assert!((ul - e * Complex64::from(1.5 * k)).norm() < 1e-15);
        assert!((lr - e * Complex64::from(-0.5 * k)).norm() < 1e-15);
        let w = w_a(&q, &x).unwrap();
        assert!((ur - w).norm() < 1e-15 && (ll - w).norm() < 1e-15);
    }

    #[test]
    fn decays_far_away() {
        let m = phi_a(&p(1.0, 0.0), &Vector3::new(20.0, 0.0, 0.0)).unwrap();
        assert!(m.iter().all(|z| z.norm() < 1e-8));
    }

    #[test]
    fn split_reconstructs() {
        let q = p(1.0, 0.9);
        let x = Vector3::new(0.1, 0.0, 0.0);
        let (w1, w2, w3) = omega_split(&q, &x).unwrap();
        let phi = phi_a(&q, &x).unwrap();
        assert!(max_abs(&(w1 + w2 + w3 - phi)) < 1e-13 * max_abs(&phi));
        let (_, _, w3_0) = omega_split(&p(1.0, 0.0), &x).unwrap();
        assert_eq!(w3, w3_0);
    }

    #[test]
    fn split_parts_are_weakly_singular() {
        let q = p(1.0, 0.0);
        let mut scaled = vec![];
        for t in [1e-2, 1e-4, 1e-6] {
            let (w1, w2, _) = omega_split(&q, &Vector3::new(t, 0.0, 0.0)).unwrap();
            scaled.push(t * max_abs(&w1).max(max_abs(&w2)));
        }
        assert!(scaled.iter().all(|&s| s < 0.2), "{scaled:?}");
        assert!((scaled[2] - scaled[1]).abs() < 1e-3);
    }
}
