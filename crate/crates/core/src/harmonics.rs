//! Scalar and spinor spherical harmonics on the unit sphere.
//!
//! `Y_n^l` is orthonormal for the surface measure of S^2 and carries the
//! Condon-Shortley phase, so `Y_1^1 = -sqrt(3/8pi) (x + i y)`.
//!
//! The spinor harmonics are
//!
//! ```text
//! psi_{j-1/2}^{m} = ( sqrt(j+m) Y_{j-1/2}^{m-1/2},  sqrt(j-m) Y_{j-1/2}^{m+1/2}) / sqrt(2j)
//! psi_{j+1/2}^{m} = ( sqrt(j+1-m) Y_{j+1/2}^{m-1/2}, -sqrt(j+1+m) Y_{j+1/2}^{m+1/2}) / sqrt(2j+2)
//! ```
//!
//! and satisfy `(sigma.N) psi_{j-1/2}^m = psi_{j+1/2}^m` pointwise.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector2;
use num_complex::Complex64;
use serde::Serialize;

use crate::spinor::{Spinor2, Vector3};
use crate::{Error, Result};

const SPHERE_TOL: f64 = 1e-10;

/// Which of `j - 1/2` / `j + 1/2` a mode refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plus" | "+" | "upper" => Ok(Sign::Plus),
            "minus" | "-" | "lower" => Ok(Sign::Minus),
            other => Err(format!("expected plus or minus, got {other:?}")),
        }
    }
}

/// Spinor mode `psi_{j +- 1/2}^{m_j}` with `j = j2/2` and `m_j = mj2/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ModeIndex {
    pub j2: u32,
    pub mj2: i32,
    pub sign: Sign,
}

impl ModeIndex {
    pub fn new(j2: u32, mj2: i32, sign: Sign) -> Result<Self> {
        let valid = j2 % 2 == 1 && mj2.rem_euclid(2) == 1 && mj2.unsigned_abs() <= j2;
        if !valid {
            return Err(Error::InvalidMode { j2, mj2 });
        }
        Ok(ModeIndex { j2, mj2, sign })
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    pub fn mj(&self) -> f64 {
        self.mj2 as f64 / 2.0
    }

    /// Orbital degree `j +- 1/2` of both components.
    pub fn degree(&self) -> usize {
        match self.sign {
            Sign::Minus => (self.j2 as usize - 1) / 2,
            Sign::Plus => (self.j2 as usize).div_ceil(2),
        }
    }

    /// The partner `psi_{j -+ 1/2}^{m_j}` with the same `j`, `m_j`.
    pub fn partner(&self) -> ModeIndex {
        ModeIndex { sign: self.sign.flip(), ..*self }
    }

    /// Orders `m_j - 1/2` and `m_j + 1/2` of the two components.
    pub fn orders(&self) -> [i64; 2] {
        [(self.mj2 as i64 - 1) / 2, (self.mj2 as i64 + 1) / 2]
    }

    /// Weights of `Y_n^{m_j - 1/2}` and `Y_n^{m_j + 1/2}`.
    pub fn weights(&self) -> [f64; 2] {
        let (j, m) = (self.j(), self.mj());
        match self.sign {
            Sign::Minus => {
                let c = 1.0 / (2.0 * j).sqrt();
                [c * (j + m).sqrt(), c * (j - m).max(0.0).sqrt()]
            }
            Sign::Plus => {
                let c = 1.0 / (2.0 * j + 2.0).sqrt();
                [c * (j + 1.0 - m).sqrt(), -c * (j + 1.0 + m).sqrt()]
            }
        }
    }

    /// Value from a filled [`HarmonicTable`] of sufficient degree.
    #[inline]
    pub fn eval_with(&self, table: &HarmonicTable) -> Spinor2 {
        let n = self.degree();
        let [k1, k2] = self.orders();
        let [c1, c2] = self.weights();
        Vector2::new(table.get_or_zero(n, k1) * c1, table.get_or_zero(n, k2) * c2)
    }
}

/// All `Y_n^l(x)` with `n <= l_max` at one point of the unit sphere.
#[derive(Debug, Clone)]
pub struct HarmonicTable {
    l_max: usize,
    // recurrence coefficients, indexed like the values with l >= 0 only
    a: Vec<f64>,
    b: Vec<f64>,
    diag: Vec<f64>,
    values: Vec<Complex64>,
}

impl HarmonicTable {
    pub fn new(l_max: usize) -> Self {
        let size = (l_max + 1) * (l_max + 1);
        let mut a = vec![0.0; size];
        let mut b = vec![0.0; size];
        for n in 2..=l_max {
            for k in 0..n.saturating_sub(1) {
                let (nf, kf) = (n as f64, k as f64);
                a[n * n + n + k] = ((4.0 * nf * nf - 1.0) / (nf * nf - kf * kf)).sqrt();
                let m1 = nf - 1.0;
                b[n * n + n + k] = ((m1 * m1 - kf * kf) / (4.0 * m1 * m1 - 1.0)).sqrt();
            }
        }
        let mut diag = vec![1.0 / (4.0 * PI).sqrt(); l_max + 1];
        for k in 1..=l_max {
            let kf = k as f64;
            diag[k] = -diag[k - 1] * ((2.0 * kf + 1.0) / (2.0 * kf)).sqrt();
        }
        HarmonicTable { l_max, a, b, diag, values: vec![Complex64::new(0.0, 0.0); size] }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    #[inline]
    pub fn index(n: usize, l: i64) -> usize {
        ((n * n + n) as i64 + l) as usize
    }

    /// Evaluate at a unit vector. No normalization is applied.
    pub fn fill(&mut self, x: &Vector3) {
        let z = x.z;
        let xy = Complex64::new(x.x, x.y);
        let lm = self.l_max;
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 0..=lm {
            // q_n^k = Y_n^k / (x + i y)^k is a polynomial in z
            let mut q_prev = self.diag[k];
            let mut q = 0.0;
            self.values[k * k + 2 * k] = pow * q_prev;
            if k < lm {
                q = (2.0 * k as f64 + 3.0).sqrt() * z * q_prev;
                let n = k + 1;
                self.values[n * n + n + k] = pow * q;
            }
            for n in k + 2..=lm {
                let i = n * n + n + k;
                let next = self.a[i] * (z * q - self.b[i] * q_prev);
                q_prev = q;
                q = next;
                self.values[i] = pow * q;
            }
            pow *= xy;
        }
        for n in 1..=lm {
            for k in 1..=n {
                let v = self.values[n * n + n + k].conj();
                self.values[n * n + n - k] = if k % 2 == 0 { v } else { -v };
            }
        }
    }

    #[inline]
    pub fn get(&self, n: usize, l: i64) -> Complex64 {
        debug_assert!(n <= self.l_max && l.unsigned_abs() as usize <= n);
        self.values[Self::index(n, l)]
    }

    #[inline]
    pub fn get_or_zero(&self, n: usize, l: i64) -> Complex64 {
        if l.unsigned_abs() as usize > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[Self::index(n, l)]
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn check_on_sphere(point: &Vector3) -> Result<()> {
    let r = point.norm();
    if (r - 1.0).abs() > SPHERE_TOL || !r.is_finite() {
        return Err(Error::OffSphere(r));
    }
    Ok(())
}

/// Orthonormal `Y_n^l` at a point of S^2.
pub fn spherical_harmonic(n: i64, l: i64, point: &Vector3) -> Result<Complex64> {
    if n < 0 || l.abs() > n {
        return Err(Error::InvalidHarmonic { n, l });
    }
    check_on_sphere(point)?;
    let mut t = HarmonicTable::new(n as usize);
    t.fill(point);
    Ok(t.get(n as usize, l))
}

pub fn spinor_harmonic(idx: &ModeIndex, point: &Vector3) -> Result<Spinor2> {
    let idx = ModeIndex::new(idx.j2, idx.mj2, idx.sign)?;
    check_on_sphere(point)?;
    let mut t = HarmonicTable::new(idx.degree());
    t.fill(point);
    Ok(idx.eval_with(&t))
}
