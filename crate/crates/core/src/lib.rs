#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

//! Dirac operators coupled to shell potentials on closed surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`spinor`]: Pauli and Dirac matrices, 2- and 4-spinors.
//! * [`kernels`]: the fundamental solution of `H - a` and its 2x2 blocks.
//! * [`harmonics`] and [`modes`]: spinor spherical harmonics and the
//!   diagonal data (`d`, `|p|`) of the layer operators on the unit sphere.
//! * [`eigen`]: the quadratic eigenvalue condition on the sphere, curve
//!   tracing and admissible coupling intervals.
//! * [`surface`] and [`operators`]: parametrized surfaces and the discrete
//!   layer operators `C`, `K`, `W` built on them.
//! * [`confinement`]: the algebraic impenetrability test.
//!
//! Half-integers (`j`, `m_j`) are carried as twice their value in `u32`/`i32`
//! so that index arithmetic stays exact.

pub mod cli;
pub mod confinement;
pub mod eigen;
mod error;
pub mod harmonics;
pub mod kernels;
pub mod modes;
pub mod operators;
pub mod quadrature;
pub mod spinor;
pub mod surface;

pub use error::{Error, Result};
pub use kernels::SpectralParams;
pub use num_complex::Complex64;
