//! C ABI for `dirac-shell`.
//!
//! Surfaces and operators cross the boundary as opaque handles created by
//! `ds_surface_sphere`, `ds_surface_ellipsoid` or `ds_operator_assemble` and
//! released by the matching `_free`.
//! Every fallible call returns a [`DsStatus`] and writes results through out
//! pointers; on failure a message is kept per thread and can be read with
//! [`ds_last_error`]. Panics are caught and reported as `DS_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dirac_shell::confinement::{confinement_scalar, criterion_residual, is_confining, CouplingSpec, LambdaSpec};
use dirac_shell::eigen::{admissible_interval, solve_lambda};
use dirac_shell::harmonics::Sign;
use dirac_shell::modes::mode_coefficients;
use dirac_shell::operators::{self, DiscreteOperator, OperatorKind};
use dirac_shell::surface::{make_ellipsoid, make_sphere, SurfacePatchization};
use dirac_shell::{Error, SpectralParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotSphere = 3,
    WrongKind = 4,
    Computation = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsSign {
    Plus = 0,
    Minus = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsKernel {
    C = 0,
    K = 1,
    W = 2,
}

/// Opaque surface handle.
pub struct DsSurface(SurfacePatchization);

/// Opaque discrete operator handle.
pub struct DsOperator(DiscreteOperator);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> DsStatus {
    match e {
        Error::NotSphere => DsStatus::NotSphere,
        Error::WrongKind { .. } => DsStatus::WrongKind,
        Error::SingularPoint | Error::DimensionMismatch(_) | Error::ConditionNotSatisfied(_) => DsStatus::Computation,
        _ => DsStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (DsStatus, String)>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            DsStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside dirac-shell");
            DsStatus::Panic
        }
    }
}

fn lib<T>(r: dirac_shell::Result<T>) -> Result<T, (DsStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (DsStatus, String) {
    (DsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), (DsStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, (DsStatus, String)> {
    p.as_ref().ok_or_else(null)
}

fn sign(s: DsSign) -> Sign {
    match s {
        DsSign::Plus => Sign::Plus,
        DsSign::Minus => Sign::Minus,
    }
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Unit sphere with an `n_theta x 2 n_theta` grid.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ds_surface_sphere(n_theta: usize, out: *mut *mut DsSurface) -> DsStatus {
    guard(|| {
        let s = lib(make_sphere(n_theta))?;
        write(out, Box::into_raw(Box::new(DsSurface(s))))
    })
}

/// Ellipsoid with semi-axes `(a, b, c)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ds_surface_ellipsoid(
    a: f64,
    b: f64,
    c: f64,
    n_theta: usize,
    out: *mut *mut DsSurface,
) -> DsStatus {
    guard(|| {
        let s = lib(make_ellipsoid([a, b, c], n_theta))?;
        write(out, Box::into_raw(Box::new(DsSurface(s))))
    })
}

/// # Safety
/// `surf` must come from a `ds_surface_*` constructor and not be freed twice.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_surface_free(surf: *mut DsSurface) {
    if !surf.is_null() {
        drop(Box::from_raw(surf));
    }
}

/// Number of nodes and total area.
///
/// # Safety
/// `surf` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_surface_info(surf: *const DsSurface, len: *mut usize, area: *mut f64) -> DsStatus {
    guard(|| {
        let s = &borrow(surf)?.0;
        write(len, s.len())?;
        write(area, s.area())
    })
}

/// Assemble `C`, `K` or `W` at `(m, a)` on `surf`.
///
/// # Safety
/// `surf` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_assemble(
    surf: *const DsSurface,
    m: f64,
    a: f64,
    kernel: DsKernel,
    out: *mut *mut DsOperator,
) -> DsStatus {
    guard(|| {
        let s = &borrow(surf)?.0;
        if out.is_null() {
            return Err(null());
        }
        let p = lib(SpectralParams::new(m, a))?;
        let op = lib(match kernel {
            DsKernel::C => operators::assemble_c(&p, s),
            DsKernel::K => operators::assemble_k(&p, s),
            DsKernel::W => operators::assemble_w(&p, s),
        })?;
        write(out, Box::into_raw(Box::new(DsOperator(op))))
    })
}

/// # Safety
/// `op` must come from [`ds_operator_assemble`] and not be freed twice.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_free(op: *mut DsOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Dimension of the compressed operator.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_dim(op: *const DsOperator, out: *mut usize) -> DsStatus {
    guard(|| write(out, borrow(op)?.0.dim()))
}

/// `sigma_min((1/lambda) I + M)`.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_smallest_singular(op: *const DsOperator, lambda: f64, out: *mut f64) -> DsStatus {
    guard(|| {
        let v = lib(operators::smallest_singular(&borrow(op)?.0, lambda))?;
        write(out, v)
    })
}

/// Largest singular value.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_norm(op: *const DsOperator, out: *mut f64) -> DsStatus {
    guard(|| write(out, operators::operator_norm(&borrow(op)?.0)))
}

/// `|| -4 (C A)^2 - I ||` on the probe subspace; `op` must be a `C` operator.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_jump_residual(op: *const DsOperator, out: *mut f64) -> DsStatus {
    guard(|| {
        let v = lib(operators::jump_residual(&borrow(op)?.0))?;
        write(out, v)
    })
}

/// Confinement criterion residual for the coupling `(lambda_e, lambda_s)`.
///
/// # Safety
/// `op` must be a live `C` handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_criterion_residual(
    op: *const DsOperator,
    lambda_e: f64,
    lambda_s: f64,
    out: *mut f64,
) -> DsStatus {
    guard(|| {
        let c = lib(CouplingSpec::new(lambda_e, lambda_s))?;
        let v = lib(criterion_residual(&borrow(op)?.0, &LambdaSpec::Coupling(c)))?;
        write(out, v)
    })
}

/// Smallest singular value of the massless `W`; `surf` must be the unit sphere.
///
/// # Safety
/// `surf` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_riesz_witness(surf: *const DsSurface, out: *mut f64) -> DsStatus {
    guard(|| {
        let v = lib(operators::riesz_witness(&borrow(surf)?.0))?;
        write(out, v)
    })
}

/// Sphere mode coefficients at `j = j2/2`.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_mode_coefficients(
    j2: u32,
    kappa: f64,
    d_minus: *mut f64,
    d_plus: *mut f64,
    p_abs: *mut f64,
) -> DsStatus {
    guard(|| {
        let c = lib(mode_coefficients(j2, kappa))?;
        write(d_minus, c.d_minus)?;
        write(d_plus, c.d_plus)?;
        write(p_abs, c.p_abs)
    })
}

/// Positive and negative roots of the sphere eigenvalue condition.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_solve_lambda(m: f64, a: f64, j2: u32, s: DsSign, pos: *mut f64, neg: *mut f64) -> DsStatus {
    guard(|| {
        let (p, n) = lib(solve_lambda(m, a, j2, sign(s)))?;
        write(pos, p)?;
        write(neg, n)
    })
}

/// Closure of the positive-root range over `a in (-m, m)`.
///
/// # Safety
/// Out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ds_admissible_interval(m: f64, j2: u32, s: DsSign, lo: *mut f64, hi: *mut f64) -> DsStatus {
    guard(|| {
        let (l, h) = lib(admissible_interval(m, j2, sign(s)))?;
        write(lo, l)?;
        write(hi, h)
    })
}

/// `1/4 + 1/(lambda_e^2 - lambda_s^2)`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_confinement_scalar(lambda_e: f64, lambda_s: f64, out: *mut f64) -> DsStatus {
    guard(|| {
        let c = lib(CouplingSpec::new(lambda_e, lambda_s))?;
        write(out, lib(confinement_scalar(&c))?)
    })
}

/// Whether `|lambda_e^2 - lambda_s^2 + 4| < tol`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_is_confining(lambda_e: f64, lambda_s: f64, tol: f64, out: *mut bool) -> DsStatus {
    guard(|| {
        let c = lib(CouplingSpec::new(lambda_e, lambda_s))?;
        write(out, lib(is_confining(&c, tol))?)
    })
}

/// Kernel of an operator handle.
///
/// # Safety
/// `op` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_operator_kernel(op: *const DsOperator, out: *mut DsKernel) -> DsStatus {
    guard(|| {
        let k = match borrow(op)?.0.kind {
            OperatorKind::C => DsKernel::C,
            OperatorKind::K => DsKernel::K,
            OperatorKind::W => DsKernel::W,
        };
        write(out, k)
    })
}
