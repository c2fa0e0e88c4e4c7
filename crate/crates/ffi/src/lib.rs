//! C interface to `ritz-core`.
//!
//! Handles are opaque and owned by the caller (`*_new` / `*_free`). Every
//! fallible call returns a [`RitzStatus`]; the message of the most recent
//! failure on the calling thread is available from [`ritz_last_error`].
//! Numbers cross the boundary as NUL-terminated decimal strings so no
//! precision is lost.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ritz_core::basis::BasisKind;
use ritz_core::collocation::collocation_ground_energy;
use ritz_core::hamiltonian::{assemble, dump_matrix, Coupling, HamiltonianForm, HamiltonianSpec};
use ritz_core::numerics::{format_decimal, smallest_eigenvalue, PrecisionContext};
use ritz_core::optimizer::optimize_parameter;
use ritz_core::Error;

pub const RITZ_FORM_ORIGINAL: u32 = 0;
pub const RITZ_FORM_ROTATED: u32 = 1;
pub const RITZ_BASIS_TRIG: u32 = 0;
pub const RITZ_BASIS_HO: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RitzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidPrecision = 3,
    NoConvergence = 4,
    NoStationaryPoint = 5,
    Unsupported = 6,
    /// The output buffer is too small; `*required` holds the needed size.
    BufferTooSmall = 7,
    Io = 8,
    Internal = 9,
}

/// Working-precision configuration.
pub struct RitzContext {
    inner: PrecisionContext,
}

/// A Hamiltonian, basis and basis size.
pub struct RitzProblem {
    spec: HamiltonianSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(error: &Error) -> RitzStatus {
    match error {
        Error::InvalidPrecision(_) => RitzStatus::InvalidPrecision,
        Error::NoConvergence { .. } => RitzStatus::NoConvergence,
        Error::NoStationaryPoint | Error::DegenerateForm => RitzStatus::NoStationaryPoint,
        Error::Unsupported(_) => RitzStatus::Unsupported,
        Error::Io(_) => RitzStatus::Io,
        _ => RitzStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), RitzStatus>) -> RitzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            RitzStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => {
            set_last_error("internal panic");
            RitzStatus::Internal
        }
    }
}

fn fail(error: Error) -> RitzStatus {
    set_last_error(&error.to_string());
    status_of(&error)
}

fn fail_with(status: RitzStatus, message: &str) -> RitzStatus {
    set_last_error(message);
    status
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, RitzStatus> {
    // SAFETY: caller guarantees `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail_with(RitzStatus::NullPointer, &format!("{what} is null")))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, RitzStatus> {
    if p.is_null() {
        return Err(fail_with(RitzStatus::NullPointer, &format!("{what} is null")));
    }
    // SAFETY: caller guarantees a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail_with(RitzStatus::InvalidArgument, &format!("{what} is not UTF-8")))
}

/// Copies `text` plus a NUL into `buf`; `*required` always receives the size needed.
unsafe fn write_str(text: &str, buf: *mut c_char, len: usize, required: *mut usize) -> Result<(), RitzStatus> {
    let need = text.len() + 1;
    if !required.is_null() {
        // SAFETY: caller-provided out-pointer.
        unsafe { *required = need };
    }
    if buf.is_null() {
        return Err(fail_with(RitzStatus::NullPointer, "output buffer is null"));
    }
    if len < need {
        return Err(fail_with(
            RitzStatus::BufferTooSmall,
            &format!("output needs {need} bytes, buffer has {len}"),
        ));
    }
    // SAFETY: `buf` has room for `need` bytes per the check above.
    unsafe {
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        *buf.add(text.len()) = 0;
    }
    Ok(())
}

/// Creates a context with `target_digits` (≥ 16) and `guard_digits` (≥ 10).
///
/// # Safety
/// `out` must be a valid pointer; on success it receives a handle to release
/// with [`ritz_context_free`].
#[no_mangle]
pub unsafe extern "C" fn ritz_context_new(target_digits: u32, guard_digits: u32, out: *mut *mut RitzContext) -> RitzStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail_with(RitzStatus::NullPointer, "out is null"));
        }
        let inner = PrecisionContext::new(target_digits, guard_digits).map_err(fail)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(RitzContext { inner })) };
        Ok(())
    })
}

/// # Safety
/// `ctx` must be null or a handle from [`ritz_context_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ritz_context_free(ctx: *mut RitzContext) {
    if !ctx.is_null() {
        // SAFETY: handle ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// Describes a problem. `lambda` is a decimal or fraction string (`"10"`,
/// `"2.5"`, `"5/2"`); `form` is `RITZ_FORM_*`, `basis` is `RITZ_BASIS_*`.
///
/// # Safety
/// `lambda` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ritz_problem_new(
    lambda: *const c_char,
    form: u32,
    basis: u32,
    m: usize,
    out: *mut *mut RitzProblem,
) -> RitzStatus {
    guard(|| {
        if out.is_null() {
            return Err(fail_with(RitzStatus::NullPointer, "out is null"));
        }
        let lambda: Coupling = unsafe { read_str(lambda, "lambda") }?.parse().map_err(fail)?;
        let form = match form {
            RITZ_FORM_ORIGINAL => HamiltonianForm::Original,
            RITZ_FORM_ROTATED => HamiltonianForm::Rotated,
            other => return Err(fail_with(RitzStatus::InvalidArgument, &format!("unknown form {other}"))),
        };
        let basis = match basis {
            RITZ_BASIS_TRIG => BasisKind::Trigonometric,
            RITZ_BASIS_HO => BasisKind::HarmonicOscillator,
            other => return Err(fail_with(RitzStatus::InvalidArgument, &format!("unknown basis {other}"))),
        };
        let spec = HamiltonianSpec::new(lambda, form, basis, m).map_err(fail)?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(RitzProblem { spec })) };
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle from [`ritz_problem_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ritz_problem_free(problem: *mut RitzProblem) {
    if !problem.is_null() {
        // SAFETY: handle ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Writes the trace-stationary basis parameter (`L` or `Omega`) as a decimal
/// string with the context's target digits.
///
/// # Safety
/// Handles must be live; `buf` must hold `len` bytes; `required` may be null.
#[no_mangle]
pub unsafe extern "C" fn ritz_optimize(
    problem: *const RitzProblem,
    ctx: *const RitzContext,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> RitzStatus {
    guard(|| {
        let problem = unsafe { borrow(problem, "problem") }?;
        let ctx = &unsafe { borrow(ctx, "context") }?.inner;
        let opt = optimize_parameter(&problem.spec, ctx).map_err(fail)?;
        unsafe { write_str(&format_decimal(&opt.alpha_opt, ctx.target_digits() as usize), buf, len, required) }
    })
}

/// Writes the Rayleigh-Ritz ground energy at the optimal parameter.
///
/// # Safety
/// As for [`ritz_optimize`].
#[no_mangle]
pub unsafe extern "C" fn ritz_ground_energy(
    problem: *const RitzProblem,
    ctx: *const RitzContext,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> RitzStatus {
    guard(|| {
        let problem = unsafe { borrow(problem, "problem") }?;
        let ctx = &unsafe { borrow(ctx, "context") }?.inner;
        let energy = optimize_parameter(&problem.spec, ctx)
            .and_then(|opt| assemble(&problem.spec, &opt.alpha_opt, ctx))
            .and_then(|h| smallest_eigenvalue(&h, ctx))
            .map_err(fail)?;
        unsafe { write_str(&format_decimal(&energy, ctx.target_digits() as usize), buf, len, required) }
    })
}

/// Writes the collocation ground-energy estimate for the half-width `l`
/// (decimal string). Trig basis only.
///
/// # Safety
/// As for [`ritz_optimize`]; `l` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ritz_collocation_energy(
    problem: *const RitzProblem,
    ctx: *const RitzContext,
    l: *const c_char,
    buf: *mut c_char,
    len: usize,
    required: *mut usize,
) -> RitzStatus {
    guard(|| {
        let problem = unsafe { borrow(problem, "problem") }?;
        let ctx = &unsafe { borrow(ctx, "context") }?.inner;
        let l = ctx.parse(unsafe { read_str(l, "half-width") }?).map_err(fail)?;
        if l <= 0 {
            return Err(fail_with(RitzStatus::InvalidArgument, "half-width must be positive"));
        }
        let energy = collocation_ground_energy(&problem.spec, &l, ctx).map_err(fail)?;
        unsafe { write_str(&format_decimal(&energy, ctx.target_digits() as usize), buf, len, required) }
    })
}

/// Writes the Rayleigh-Ritz matrix at the optimal parameter to `path`, one
/// `i j value` line per nonzero upper-triangle entry.
///
/// # Safety
/// Handles must be live; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ritz_dump_matrix(
    problem: *const RitzProblem,
    ctx: *const RitzContext,
    path: *const c_char,
) -> RitzStatus {
    guard(|| {
        let problem = unsafe { borrow(problem, "problem") }?;
        let ctx = &unsafe { borrow(ctx, "context") }?.inner;
        let path = unsafe { read_str(path, "path") }?;
        let alpha = optimize_parameter(&problem.spec, ctx).map_err(fail)?.alpha_opt;
        let mut out = BufWriter::new(File::create(path).map_err(|e| fail(e.into()))?);
        dump_matrix(&problem.spec, &alpha, ctx, &mut out).map_err(fail)?;
        out.flush().map_err(|e| fail(e.into()))
    })
}

/// Message of the last failed call on this thread (empty after a success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ritz_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, e.g. `"0.1.0"`. Static storage.
#[no_mangle]
pub extern "C" fn ritz_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
