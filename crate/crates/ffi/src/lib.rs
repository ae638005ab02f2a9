//! C ABI for the hyperlog toolkit.
//!
//! Conventions:
//! - Every fallible function returns an [`HlStatus`] and writes results through out-pointers.
//! - Objects are opaque handles created by `hl_*_new` or a computing function and released by
//!   the matching `hl_*_free`. Freeing a null handle is a no-op.
//! - Strings returned through `char **` out-pointers are owned by the caller and released with
//!   [`hl_string_free`].
//! - On failure a message is stored per thread and read with [`hl_last_error_message`].
//! - Rationals are passed as NUL-terminated `"p"` or `"p/q"` strings; lists are comma separated.
//! - Panics never cross the boundary; they surface as [`HlStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperlog::arith::{parse_rational_list, Rational};
use hyperlog::criteria::{classify, HGParams, Label};
use hyperlog::eval::{pfq, Ball};
use hyperlog::explicit_log::explicit_residual;
use hyperlog::regulator::{det_scan, RecurrenceParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A string argument could not be parsed as a rational or list of rationals.
    Parse = 3,
    /// Inputs violate a mathematical precondition.
    Precondition = 4,
    /// A numerical routine could not produce a result (domain, branch cut, convergence).
    Numeric = 5,
    /// Internal panic caught at the boundary.
    Panic = 6,
}

/// Classification label of a triple `(q, a, b)`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HlLabel {
    FailsPreconditions = 0,
    LogFunctional = 1,
    LogAtOneOnly = 2,
    Neither = 3,
}

impl From<Label> for HlLabel {
    fn from(l: Label) -> HlLabel {
        match l {
            Label::FailsPreconditions => HlLabel::FailsPreconditions,
            Label::LogFunctional => HlLabel::LogFunctional,
            Label::LogAtOneOnly => HlLabel::LogAtOneOnly,
            Label::Neither => HlLabel::Neither,
        }
    }
}

/// Parameters `(q, a, b)` of `3F2(1, 1, q; a, b; x)`.
pub struct HlParams(HGParams);

/// A real ball `[mid ± rad]`.
pub struct HlBall(Ball);

/// Recurrence parameters `(mu, β₁, β₂)`.
pub struct HlRecurrence(RecurrenceParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Fail = (HlStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> HlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HlStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".to_string());
            HlStatus::Panic
        }
    }
}

fn numeric<E: std::fmt::Display>(e: E) -> Fail {
    (HlStatus::Numeric, e.to_string())
}

fn precondition<E: std::fmt::Display>(e: E) -> Fail {
    (HlStatus::Precondition, e.to_string())
}

/// # Safety
/// `p` is null or points to a NUL-terminated string valid for the duration of the call.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err((HlStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HlStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

/// # Safety
/// As [`read_str`].
unsafe fn read_rational(p: *const c_char, name: &str) -> Result<Rational, Fail> {
    read_str(p, name)?.parse().map_err(|e| (HlStatus::Parse, format!("{name}: {e}")))
}

/// # Safety
/// As [`read_str`].
unsafe fn read_list(p: *const c_char, name: &str) -> Result<Vec<Rational>, Fail> {
    parse_rational_list(read_str(p, name)?).map_err(|e| (HlStatus::Parse, format!("{name}: {e}")))
}

/// # Safety
/// `out` is null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, v: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err((HlStatus::NullPointer, format!("{name} is null")));
    }
    out.write(v);
    Ok(())
}

/// # Safety
/// `h` is null or a live handle produced by this library.
unsafe fn handle<'a, T>(h: *const T, name: &str) -> Result<&'a T, Fail> {
    h.as_ref().ok_or_else(|| (HlStatus::NullPointer, format!("{name} is null")))
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("interior NULs removed").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn hl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if the last call succeeded.
///
/// The pointer stays valid until the next `hl_*` call on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` is null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `(q, a, b)` into a new handle.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_params_new(q: *const c_char, a: *const c_char, b: *const c_char, out: *mut *mut HlParams) -> HlStatus {
    guard(|| {
        let p = HGParams::new(read_rational(q, "q")?, read_rational(a, "a")?, read_rational(b, "b")?);
        write_out(out, Box::into_raw(Box::new(HlParams(p))), "out")
    })
}

/// # Safety
/// `p` is null or a live handle from [`hl_params_new`].
#[no_mangle]
pub unsafe extern "C" fn hl_params_free(p: *mut HlParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Classifies the triple. Failing preconditions is a label, not an error.
///
/// # Safety
/// `p` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_classify(p: *const HlParams, out: *mut HlLabel) -> HlStatus {
    guard(|| {
        let r = classify(&handle(p, "params")?.0).map_err(precondition)?;
        write_out(out, r.label.into(), "out")
    })
}

/// Classification record as a JSON string owned by the caller.
///
/// # Safety
/// `p` is a live handle; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_classify_json(p: *const HlParams, out: *mut *mut c_char) -> HlStatus {
    guard(|| {
        let r = classify(&handle(p, "params")?.0).map_err(precondition)?;
        let s = serde_json::to_string(&r).map_err(numeric)?;
        write_out(out, owned_string(s), "out")
    })
}

/// Encloses `pFq(upper; lower; x)` at `prec` bits.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_pfq(upper: *const c_char, lower: *const c_char, x: *const c_char, prec: u32, out: *mut *mut HlBall) -> HlStatus {
    guard(|| {
        let upper = read_list(upper, "upper")?;
        let lower = read_list(lower, "lower")?;
        let x = read_rational(x, "x")?;
        let v = pfq(&upper, &lower, &Ball::from_rational(&x, prec.max(16)), prec).map_err(numeric)?;
        write_out(out, Box::into_raw(Box::new(HlBall(v))), "out")
    })
}

/// Residual `₃F₂(1,1,1/2; 7/6,11/6; x) − (closed form)` at `prec` bits; contains 0 when the
/// identity holds.
///
/// # Safety
/// `x` is NUL-terminated; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_explicit_log_residual(x: *const c_char, prec: u32, out: *mut *mut HlBall) -> HlStatus {
    guard(|| {
        let x = read_rational(x, "x")?;
        let v = explicit_residual(&Ball::from_rational(&x, prec.saturating_add(32)), prec).map_err(numeric)?;
        write_out(out, Box::into_raw(Box::new(HlBall(v))), "out")
    })
}

/// Midpoint rounded to the nearest double.
///
/// # Safety
/// `b` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_mid(b: *const HlBall, out: *mut f64) -> HlStatus {
    guard(|| write_out(out, handle(b, "ball")?.0.mid().to_f64(), "out"))
}

/// Radius rounded up to a double.
///
/// # Safety
/// `b` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_rad(b: *const HlBall, out: *mut f64) -> HlStatus {
    guard(|| {
        write_out(out, handle(b, "ball")?.0.rad_f64_upper(), "out")
    })
}

/// Whether the ball contains zero.
///
/// # Safety
/// `b` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_contains_zero(b: *const HlBall, out: *mut bool) -> HlStatus {
    guard(|| write_out(out, handle(b, "ball")?.0.contains_zero(), "out"))
}

/// Whether the radius is a rigorous bound (false when a heuristic step such as quadrature was used).
///
/// # Safety
/// `b` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_is_rigorous(b: *const HlBall, out: *mut bool) -> HlStatus {
    guard(|| write_out(out, !handle(b, "ball")?.0.is_heuristic(), "out"))
}

/// Decimal rendering `[mid +/- rad]`, owned by the caller.
///
/// # Safety
/// `b` is a live handle; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_to_string(b: *const HlBall, out: *mut *mut c_char) -> HlStatus {
    guard(|| write_out(out, owned_string(handle(b, "ball")?.0.to_string()), "out"))
}

/// # Safety
/// `b` is null or a live ball handle.
#[no_mangle]
pub unsafe extern "C" fn hl_ball_free(b: *mut HlBall) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Validates `(mu, β₁, β₂)` into a new handle.
///
/// # Safety
/// String arguments are NUL-terminated; `out` is valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn hl_recurrence_new(mu: *const c_char, beta1: *const c_char, beta2: *const c_char, out: *mut *mut HlRecurrence) -> HlStatus {
    guard(|| {
        let p = RecurrenceParams::new(read_rational(mu, "mu")?, read_rational(beta1, "beta1")?, read_rational(beta2, "beta2")?)
            .map_err(precondition)?;
        write_out(out, Box::into_raw(Box::new(HlRecurrence(p))), "out")
    })
}

/// # Safety
/// `r` is null or a live handle from [`hl_recurrence_new`].
#[no_mangle]
pub unsafe extern "C" fn hl_recurrence_free(r: *mut HlRecurrence) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of `r ∈ [0, rmax]` whose E-pair determinant vanishes identically.
///
/// # Safety
/// `r` is a live handle; `out` is valid for writing.
#[no_mangle]
pub unsafe extern "C" fn hl_det_scan(r: *const HlRecurrence, rmax: u64, out: *mut usize) -> HlStatus {
    guard(|| {
        let failing = det_scan(&handle(r, "recurrence")?.0, rmax).map_err(precondition)?;
        write_out(out, failing.len(), "out")
    })
}
