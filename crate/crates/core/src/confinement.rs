//! Impenetrability of the shell for electrostatic plus Lorentz-scalar couplings.
//!
//! With `A = alpha . N` the shell confines iff
//! `{C A, Lambda A} = -(Lambda A)^2`. For the coupling
//! `Lambda = (lambda_s beta - lambda_e) / (lambda_e^2 - lambda_s^2) - C`
//! the left side minus the right side collapses, through `-4 (C A)^2 = I`
//! and `beta A = -A beta`, to the scalar `1/4 + 1/(lambda_e^2 - lambda_s^2)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::operators::{spectral_norm, DiscreteOperator, OperatorKind};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingSpec {
    pub lambda_e: f64,
    pub lambda_s: f64,
}

impl CouplingSpec {
    pub fn new(lambda_e: f64, lambda_s: f64) -> Result<Self> {
        let c = CouplingSpec { lambda_e, lambda_s };
        c.check()?;
        Ok(c)
    }

    /// `lambda_e^2 - lambda_s^2`.
    pub fn discriminant(&self) -> f64 {
        self.lambda_e * self.lambda_e - self.lambda_s * self.lambda_s
    }

    fn check(&self) -> Result<()> {
        if !(self.lambda_e.is_finite() && self.lambda_s.is_finite()) || self.lambda_e.abs() == self.lambda_s.abs() {
            return Err(Error::CriticalCoupling { lambda_e: self.lambda_e, lambda_s: self.lambda_s });
        }
        Ok(())
    }
}

/// `1/4 + 1/(lambda_e^2 - lambda_s^2)`; zero exactly in the confining case.
pub fn confinement_scalar(c: &CouplingSpec) -> Result<f64> {
    c.check()?;
    Ok(0.25 + 1.0 / c.discriminant())
}

/// `|lambda_e^2 - lambda_s^2 + 4| < tol`.
pub fn is_confining(c: &CouplingSpec, tol: f64) -> Result<bool> {
    c.check()?;
    Ok((c.discriminant() + 4.0).abs() < tol)
}

/// Excludes `|lambda_e| = |lambda_s|` and `lambda_e^2 - lambda_s^2 = 4`, the
/// latter up to [`DEFAULT_TOL`] so that inputs like `(3, sqrt 5)` count.
pub fn is_selfadjoint_regime(c: &CouplingSpec) -> bool {
    c.lambda_e.abs() != c.lambda_s.abs() && (c.discriminant() - 4.0).abs() >= DEFAULT_TOL
}

/// The operator `Lambda` in the confinement condition.
#[derive(Debug, Clone)]
pub enum LambdaSpec {
    /// `(lambda_s beta - lambda_e)/(lambda_e^2 - lambda_s^2) - C`.
    Coupling(CouplingSpec),
    /// `-(1/lambda + C)`, the pure electrostatic shell.
    Electrostatic(f64),
    Zero,
    /// One matrix per sector of `C`, in the same coordinates.
    Blocks(Vec<DMatrix<Complex64>>),
}

impl LambdaSpec {
    /// The scalar the left side should equal.
    pub fn expected_scalar(&self) -> Result<f64> {
        match self {
            LambdaSpec::Coupling(c) => confinement_scalar(c),
            LambdaSpec::Electrostatic(l) => confinement_scalar(&CouplingSpec::new(*l, 0.0)?),
            LambdaSpec::Zero | LambdaSpec::Blocks(_) => Ok(0.0),
        }
    }
}

/// `|| ({C A, Lambda A} + (Lambda A)^2 - s I) P ||` over sectors, with `s`
/// from [`LambdaSpec::expected_scalar`] and `P` the probe subspace of `C`.
pub fn criterion_residual(c: &DiscreteOperator, lambda: &LambdaSpec) -> Result<f64> {
    if c.kind != OperatorKind::C {
        return Err(Error::WrongKind { expected: "C" });
    }
    if let LambdaSpec::Blocks(b) = lambda {
        if b.len() != c.sectors.len() {
            return Err(Error::DimensionMismatch(format!("{} Lambda blocks for {} sectors", b.len(), c.sectors.len())));
        }
    }
    let s = lambda.expected_scalar()?;
    let mut worst = 0.0f64;
    for (idx, sec) in c.sectors.iter().enumerate() {
        let n = sec.matrix.nrows();
        let lam = match lambda {
            LambdaSpec::Coupling(cp) => {
                let d = cp.discriminant();
                (sec.beta() * Complex64::from(cp.lambda_s / d)
                    - DMatrix::identity(n, n) * Complex64::from(cp.lambda_e / d))
                    - &sec.matrix
            }
            LambdaSpec::Electrostatic(l) => {
                if *l == 0.0 {
                    return Err(Error::InvalidLambda { expected: "nonzero", got: *l });
                }
                -(DMatrix::identity(n, n) * Complex64::from(1.0 / l) + &sec.matrix)
            }
            LambdaSpec::Zero => DMatrix::zeros(n, n),
            LambdaSpec::Blocks(b) => {
                if b[idx].shape() != (n, n) {
                    return Err(Error::DimensionMismatch(format!(
                        "Lambda block {idx} is {:?}, expected ({n}, {n})",
                        b[idx].shape()
                    )));
                }
                b[idx].clone()
            }
        };
        let a = sec.alpha_n();
        let ca = &sec.matrix * &a;
        let la = lam * &a;
        let mut r = &ca * &la + &la * &ca + &la * &la;
        for i in 0..n {
            r[(i, i)] -= Complex64::from(s);
        }
        worst = worst.max(spectral_norm(&r.select_columns(&sec.probe_columns(OperatorKind::C))));
    }
    Ok(worst)
}
