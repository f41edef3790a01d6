//! C interface to `leaf-ldp`.
//!
//! Objects cross the boundary as opaque handles created by `ldp_*_new` or
//! `ldp_model_parse` and released by the matching `ldp_*_free`. Every
//! fallible call returns an [`LdpStatus`] and writes results through out
//! pointers; on failure [`ldp_last_error`] describes what went wrong on the
//! calling thread.

use leaf_ldp::chain::simulate_final;
use leaf_ldp::dist::Pmf;
use leaf_ldp::path::euler_solve;
use leaf_ldp::pressure::PressureEval;
use leaf_ldp::{Error, ModelSpec};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidModel = 3,
    Domain = 4,
    Numerical = 5,
    Budget = 6,
    Panic = 7,
}

/// How `ldp_pressure_new` evaluates the pressure.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LdpMethod {
    /// Closed form for alpha in {1/2, 1, 2}, quadrature otherwise.
    Auto = 0,
    Quadrature = 1,
}

/// A chain preset.
pub struct LdpModel(ModelSpec);

/// The exact law of `Z_n`.
pub struct LdpPmf(Pmf);

/// The limiting pressure for one `alpha`.
pub struct LdpPressure(PressureEval);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LdpStatus {
    match e {
        Error::InvalidModel(_)
        | Error::Preset { .. }
        | Error::StateAboveSlope { .. }
        | Error::IrrationalSlope { .. } => LdpStatus::InvalidModel,
        Error::Domain(_) | Error::Config { .. } | Error::Io(_) => LdpStatus::Domain,
        Error::Quadrature { .. }
        | Error::StepSize { .. }
        | Error::Bracket(_)
        | Error::Integration(_) => LdpStatus::Numerical,
        Error::Budget(_) => LdpStatus::Budget,
    }
}

struct Fail(LdpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(LdpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LdpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            LdpStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            LdpStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next `ldp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn ldp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ldp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a preset such as `plane_oriented` or `pa:beta=1/2`.
///
/// # Safety
/// `preset` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_model_parse(
    preset: *const c_char,
    out: *mut *mut LdpModel,
) -> LdpStatus {
    guard(|| {
        if preset.is_null() {
            return Err(null("preset"));
        }
        let text = CStr::from_ptr(preset)
            .to_str()
            .map_err(|_| Fail(LdpStatus::InvalidArgument, "preset is not UTF-8".into()))?;
        let m: ModelSpec = text.parse()?;
        put(out, Box::into_raw(Box::new(LdpModel(m))), "out")
    })
}

/// A copy of `model` started from `k0`.
///
/// # Safety
/// `model` must come from this library; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_model_with_k0(
    model: *const LdpModel,
    k0: u64,
    out: *mut *mut LdpModel,
) -> LdpStatus {
    guard(|| {
        let m = get(model, "model")?;
        let next = ModelSpec::new(m.0.slopes().clone(), k0)?;
        put(out, Box::into_raw(Box::new(LdpModel(next))), "out")
    })
}

/// # Safety
/// `model` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ldp_model_free(model: *mut LdpModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_model_alpha(model: *const LdpModel, out: *mut f64) -> LdpStatus {
    guard(|| put(out, get(model, "model")?.0.alpha().to_f64(), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_model_k0(model: *const LdpModel, out: *mut u64) -> LdpStatus {
    guard(|| put(out, get(model, "model")?.0.k0(), "out"))
}

/// Final state `Z_n` of replicate `replicate` under `seed`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_simulate_final(
    model: *const LdpModel,
    n: u64,
    seed: u64,
    replicate: u64,
    out: *mut u64,
) -> LdpStatus {
    guard(|| {
        let m = &get(model, "model")?.0;
        if n == 0 {
            return Err(Fail(
                LdpStatus::InvalidArgument,
                "n must be at least 1".into(),
            ));
        }
        let slopes = m.slopes().values(n - 1);
        put(out, simulate_final(m, &slopes, n, seed, replicate)?, "out")
    })
}

/// Law of `Z_n`.
///
/// # Safety
/// `model` must be valid; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_new(
    model: *const LdpModel,
    n: u64,
    out: *mut *mut LdpPmf,
) -> LdpStatus {
    guard(|| {
        let p = Pmf::at(&get(model, "model")?.0, n)?;
        put(out, Box::into_raw(Box::new(LdpPmf(p))), "out")
    })
}

/// # Safety
/// `pmf` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_free(pmf: *mut LdpPmf) {
    if !pmf.is_null() {
        drop(Box::from_raw(pmf));
    }
}

/// Smallest and largest `k` with positive probability.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_support(
    pmf: *const LdpPmf,
    lo: *mut u64,
    hi: *mut u64,
) -> LdpStatus {
    guard(|| {
        let (a, b) = get(pmf, "pmf")?.0.attainable();
        put(lo, a, "lo")?;
        put(hi, b, "hi")
    })
}

/// `log P(Z_n = k)`; `-inf` off the support.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_log_prob(pmf: *const LdpPmf, k: u64, out: *mut f64) -> LdpStatus {
    guard(|| put(out, get(pmf, "pmf")?.0.log_prob(k), "out"))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_mean(pmf: *const LdpPmf, out: *mut f64) -> LdpStatus {
    guard(|| put(out, get(pmf, "pmf")?.0.mean(), "out"))
}

/// `log E[e^{λ Z_n}]`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_log_mgf(
    pmf: *const LdpPmf,
    lambda: f64,
    out: *mut f64,
) -> LdpStatus {
    guard(|| put(out, get(pmf, "pmf")?.0.log_mgf(lambda), "out"))
}

/// `(1/n) log P(Z_n >= x n)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ldp_pmf_tail_log_prob(
    pmf: *const LdpPmf,
    x: f64,
    out: *mut f64,
) -> LdpStatus {
    guard(|| put(out, get(pmf, "pmf")?.0.tail_log_prob(x)?, "out"))
}

/// Pressure evaluator for `alpha > 0`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_pressure_new(
    alpha: f64,
    method: LdpMethod,
    out: *mut *mut LdpPressure,
) -> LdpStatus {
    guard(|| {
        let ev = match method {
            LdpMethod::Auto => PressureEval::auto(alpha)?,
            LdpMethod::Quadrature => PressureEval::quadrature(alpha)?,
        };
        put(out, Box::into_raw(Box::new(LdpPressure(ev))), "out")
    })
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ldp_pressure_free(p: *mut LdpPressure) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `Λ(λ)`, `Λ'(λ)` and `Λ''(λ)`. Any of the out pointers may be null.
///
/// # Safety
/// `p` must be valid; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_pressure_eval(
    p: *const LdpPressure,
    lambda: f64,
    value: *mut f64,
    d1: *mut f64,
    d2: *mut f64,
) -> LdpStatus {
    guard(|| {
        let ev = &get(p, "pressure")?.0;
        if !value.is_null() {
            value.write(ev.pressure(lambda)?);
        }
        if !d1.is_null() || !d2.is_null() {
            let (a, b) = ev.derivatives(lambda)?;
            if !d1.is_null() {
                d1.write(a);
            }
            if !d2.is_null() {
                d2.write(b);
            }
        }
        Ok(())
    })
}

/// `I(x)` and the maximizing `λ*` (either out pointer may be null).
///
/// # Safety
/// `p` must be valid; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_rate(
    p: *const LdpPressure,
    x: f64,
    lambda_star: *mut f64,
    rate: *mut f64,
) -> LdpStatus {
    guard(|| {
        let r = get(p, "pressure")?.0.rate(x)?;
        if !lambda_star.is_null() {
            lambda_star.write(r.lambda_star);
        }
        if !rate.is_null() {
            rate.write(r.rate);
        }
        Ok(())
    })
}

/// Cost of the optimal path from 0 to `x` at time 1, for `alpha > 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ldp_euler_cost(alpha: f64, x: f64, tol: f64, out: *mut f64) -> LdpStatus {
    guard(|| put(out, euler_solve(alpha, x, tol)?.cost, "out"))
}
