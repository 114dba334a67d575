//! C ABI for `padic-sos`.
//!
//! Objects are opaque handles created by `ps_*_new`/`ps_*_from_*` style
//! functions and released with the matching `ps_*_free`. Every fallible
//! function returns a [`PsStatus`]; on failure a message describing the
//! violated precondition is available from [`ps_last_error`] on the same
//! thread. Strings returned to the caller are released with
//! [`ps_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_sos::error::Error;
use padic_sos::measure::{check_compatibility_resolved, classify_boundedness, default_field};
use padic_sos::padic::{
    eval_expr, exp_p, log_p, parse_rational, sqrt, PadicError, PadicNumber, Prime,
};
use padic_sos::solver::{certify, GibbsCertificate, Verdict};
use padic_sos::tree::{ModelParams, TreeError};

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad argument or value outside the mathematical domain.
    InvalidArgument = 2,
    /// Solver non-convergence or enumeration cap.
    Limit = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsVerdict {
    UniqueNoTransition = 0,
    TransitionCertified = 1,
    Inconclusive = 2,
}

impl From<Verdict> for PsVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::UniqueNoTransition => PsVerdict::UniqueNoTransition,
            Verdict::TransitionCertified => PsVerdict::TransitionCertified,
            Verdict::Inconclusive => PsVerdict::Inconclusive,
        }
    }
}

/// A p-adic number with capped relative precision.
pub struct PsPadic(PadicNumber);

/// Model parameters `(p, k, m, θ, N)`.
pub struct PsParams(ModelParams);

/// Outcome of a uniqueness / phase-transition certification.
pub struct PsCertificate(GibbsCertificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(PsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_limit() {
            PsStatus::Limit
        } else {
            PsStatus::InvalidArgument
        };
        Failure(status, e.to_string())
    }
}

impl From<PadicError> for Failure {
    fn from(e: PadicError) -> Self {
        Error::from(e).into()
    }
}

impl From<TreeError> for Failure {
    fn from(e: TreeError) -> Self {
        Error::from(e).into()
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PsStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PsStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(PsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(PsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn string<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(PsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PsStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn prime(p: u64) -> Result<Prime, Failure> {
    Ok(Prime::new(p)?)
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ps_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ps_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Evaluates a literal such as `"-3/7"`, `"sqrt(7)"` or `"exp(3)"` in `Q_p`
/// at relative precision `precision`.
///
/// # Safety
/// `literal` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_from_literal(
    p: u64,
    literal: *const c_char,
    precision: u32,
    out: *mut *mut PsPadic,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let x = eval_expr(string(literal, "literal")?, prime(p)?, precision)?;
        *out = boxed(PsPadic(x));
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_from_i64(
    p: u64,
    value: i64,
    precision: u32,
    out: *mut *mut PsPadic,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(PsPadic(PadicNumber::from_i64(prime(p)?, value, precision)));
        Ok(())
    })
}

/// # Safety
/// `x` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_free(x: *mut PsPadic) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Binary operation on two p-adic numbers.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_binary(
    op: PsOp,
    a: *const PsPadic,
    b: *const PsPadic,
    out: *mut *mut PsPadic,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let (a, b) = (&deref(a, "a")?.0, &deref(b, "b")?.0);
        let r = match op {
            PsOp::Add => a.checked_add(b)?,
            PsOp::Sub => a.checked_sub(b)?,
            PsOp::Mul => a.checked_mul(b)?,
            PsOp::Div => a.checked_div(b)?,
        };
        *out = boxed(PsPadic(r));
        Ok(())
    })
}

/// Unary function of a p-adic number.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsFunction {
    Exp = 0,
    Log = 1,
    Sqrt = 2,
}

/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_apply(
    f: PsFunction,
    x: *const PsPadic,
    out: *mut *mut PsPadic,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let x = &deref(x, "x")?.0;
        let r = match f {
            PsFunction::Exp => exp_p(x)?,
            PsFunction::Log => log_p(x)?,
            PsFunction::Sqrt => sqrt(x)?,
        };
        *out = boxed(PsPadic(r));
        Ok(())
    })
}

/// Valuation `v(x)`; for zero this is the absolute precision `M` of
/// `O(p^M)`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_valuation(x: *const PsPadic, out: *mut i64) -> PsStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(x, "x")?.0.valuation();
        Ok(())
    })
}

/// `x mod p^j` for `x ∈ Z_p`, when it fits in 64 bits.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_residue(x: *const PsPadic, j: u32, out: *mut u64) -> PsStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(x, "x")?.0.residue_u64(j)?;
        Ok(())
    })
}

/// JSON form `{"prime", "valuation", "digits", "precision"}`; release with
/// [`ps_string_free`].
///
/// # Safety
/// `x` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_padic_to_json(x: *const PsPadic) -> *mut c_char {
    match deref(x, "x") {
        Ok(x) => c_string(serde_json::to_string(&x.0).expect("numbers serialize")),
        Err(Failure(_, msg)) => {
            set_error(msg);
            ptr::null_mut()
        }
    }
}

/// Model with `θ` given as an exact rational literal in `E_p`.
///
/// # Safety
/// `theta` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_params_new(
    p: u64,
    k: u32,
    m: u32,
    theta: *const c_char,
    precision: u32,
    out: *mut *mut PsParams,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let theta = parse_rational(string(theta, "theta")?)?;
        *out = boxed(PsParams(ModelParams::from_theta_rational(
            prime(p)?,
            k,
            m,
            &theta,
            precision,
        )?));
        Ok(())
    })
}

/// Model with the coupling `J` given as an exact rational literal;
/// `θ = exp_p(J)`.
///
/// # Safety
/// `coupling` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_params_from_coupling(
    p: u64,
    k: u32,
    m: u32,
    coupling: *const c_char,
    precision: u32,
    out: *mut *mut PsParams,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let j = parse_rational(string(coupling, "coupling")?)?;
        *out = boxed(PsParams(ModelParams::from_coupling_rational(
            prime(p)?,
            k,
            m,
            &j,
            precision,
        )?));
        Ok(())
    })
}

/// # Safety
/// `params` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ps_params_free(params: *mut PsParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_certify(
    params: *const PsParams,
    out: *mut *mut PsCertificate,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = boxed(PsCertificate(certify(&deref(params, "params")?.0)?));
        Ok(())
    })
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_certificate_verdict(
    cert: *const PsCertificate,
    out: *mut PsVerdict,
) -> PsStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(cert, "cert")?.0.verdict.into();
        Ok(())
    })
}

/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_certificate_solution_count(
    cert: *const PsCertificate,
    out: *mut usize,
) -> PsStatus {
    guard(|| {
        *out_ptr(out, "out")? = deref(cert, "cert")?.0.solutions.len();
        Ok(())
    })
}

/// Component `i` of solution `index` as a new p-adic handle.
///
/// # Safety
/// `cert` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_certificate_component(
    cert: *const PsCertificate,
    index: usize,
    i: usize,
    out: *mut *mut PsPadic,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        let cert = &deref(cert, "cert")?.0;
        let z = &cert
            .solutions
            .get(index)
            .ok_or_else(|| Failure(PsStatus::InvalidArgument, format!("no solution {index}")))?
            .z;
        let c = z
            .components()
            .get(i)
            .ok_or_else(|| Failure(PsStatus::InvalidArgument, format!("no component {i}")))?;
        *out = boxed(PsPadic(c.clone()));
        Ok(())
    })
}

/// Full certificate as JSON; release with [`ps_string_free`].
///
/// # Safety
/// `cert` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ps_certificate_to_json(cert: *const PsCertificate) -> *mut c_char {
    match deref(cert, "cert") {
        Ok(c) => c_string(serde_json::to_string(&c.0).expect("certificates serialize")),
        Err(Failure(_, msg)) => {
            set_error(msg);
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `cert` must be null or a handle from this library.
#[no_mangle]
pub unsafe extern "C" fn ps_certificate_free(cert: *mut PsCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Boundedness report at the given levels as JSON, measured on a solved
/// field. Release `*json_out` with [`ps_string_free`].
///
/// # Safety
/// `params` must be a live handle; `levels` must point to `n_levels`
/// values; `json_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_classify_boundedness(
    params: *const PsParams,
    levels: *const u32,
    n_levels: usize,
    cap: u64,
    json_out: *mut *mut c_char,
) -> PsStatus {
    guard(|| {
        let out = out_ptr(json_out, "json_out")?;
        let params = &deref(params, "params")?.0;
        if levels.is_null() && n_levels > 0 {
            return Err(Failure(PsStatus::NullPointer, "levels is null".into()));
        }
        let levels = if n_levels == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(levels, n_levels)
        };
        let report = classify_boundedness(params, None, levels, cap)?;
        *out = c_string(serde_json::to_string(&report).expect("reports serialize"));
        Ok(())
    })
}

/// Brute-force compatibility of the measures at level `n` for a solved
/// field, resolved to the model's working precision.
///
/// # Safety
/// `params` must be a live handle; `passed` and `residual_valuation` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ps_check_compatibility(
    params: *const PsParams,
    n: u32,
    cap: u64,
    passed: *mut bool,
    residual_valuation: *mut i64,
) -> PsStatus {
    guard(|| {
        let passed = out_ptr(passed, "passed")?;
        let residual = out_ptr(residual_valuation, "residual_valuation")?;
        let params = &deref(params, "params")?.0;
        let report = check_compatibility_resolved(params, n, cap, |q| Ok(default_field(q)?.0))?;
        *passed = report.passed;
        *residual = report.residual_valuation;
        Ok(())
    })
}
