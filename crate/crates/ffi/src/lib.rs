//! C ABI over the povcal scenario layer.
//!
//! All objects cross the boundary as opaque handles; strings are UTF-8 and
//! NUL-terminated; every function returns a `PovStatus` code, with the
//! detailed message available from `pov_last_error_message`. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with `pov_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use povcal::effects::State;
use povcal::kernels;
use povcal::scenario::{self, Scenario};
use povcal::{divergences, order, PovError, Tolerances};

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PovStatus {
    /// Success.
    Ok = 0,
    /// A pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The input was rejected (parse error, unknown name, domain violation).
    InvalidInput = 3,
    /// The computation could not certify a verdict numerically.
    NumericalFailure = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(e: PovError) -> PovStatus {
    set_error(&e.to_string());
    match e {
        PovError::NumericalFailure(_) | PovError::DegeneracyResolutionFailed { .. } => {
            PovStatus::NumericalFailure
        }
        _ => PovStatus::InvalidInput,
    }
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pov_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Opaque scenario handle.
pub struct PovScenario {
    inner: Scenario,
    tols: Tolerances,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, PovStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(PovStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        PovStatus::InvalidUtf8
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> PovStatus {
    let c = match CString::new(text) {
        Ok(c) => c,
        Err(_) => {
            set_error("output contained an interior NUL");
            return PovStatus::InvalidInput;
        }
    };
    unsafe { *out = c.into_raw() };
    PovStatus::Ok
}

/// Parse a scenario from JSON text. `tol_scale` multiplies the default
/// equality/feasibility tolerances (pass 1.0 for the defaults).
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pov_scenario_parse(
    json: *const c_char,
    tol_scale: f64,
    out: *mut *mut PovScenario,
) -> PovStatus {
    if out.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let text = match read_str(json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    if !tol_scale.is_finite() || tol_scale <= 0.0 {
        set_error("tol_scale must be positive and finite");
        return PovStatus::InvalidInput;
    }
    match Scenario::from_str(text) {
        Ok(inner) => {
            let handle = Box::new(PovScenario { inner, tols: Tolerances::scaled(tol_scale) });
            *out = Box::into_raw(handle);
            PovStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Release a scenario handle. Passing null is a no-op.
///
/// # Safety
/// `sc` must have come from `pov_scenario_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pov_scenario_free(sc: *mut PovScenario) {
    if !sc.is_null() {
        drop(Box::from_raw(sc));
    }
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must have been returned through an out-parameter of this library.
#[no_mangle]
pub unsafe extern "C" fn pov_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn with_scenario<'a>(sc: *const PovScenario) -> Result<&'a PovScenario, PovStatus> {
    if sc.is_null() {
        set_error("null scenario handle");
        return Err(PovStatus::NullPointer);
    }
    Ok(&*sc)
}

/// Decide lhs ⪯ rhs. On success writes 1 (feasible) or 0 into `out_holds`.
///
/// # Safety
/// Pointer arguments must be valid; see `pov_scenario_parse`.
#[no_mangle]
pub unsafe extern "C" fn pov_preorder_leq(
    sc: *const PovScenario,
    lhs: *const c_char,
    rhs: *const c_char,
    out_holds: *mut i32,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let (lhs, rhs) = match (read_str(lhs), read_str(rhs)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out_holds.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = (|| {
        let a = handle.inner.observable(lhs)?;
        let b = handle.inner.observable(rhs)?;
        order::preorder_leq(a, b, &handle.tols)
    })();
    match result {
        Ok(w) => {
            *out_holds = w.holds as i32;
            PovStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Decide two-sided fuzzy equivalence of two named observables.
///
/// # Safety
/// Pointer arguments must be valid; see `pov_scenario_parse`.
#[no_mangle]
pub unsafe extern "C" fn pov_fuzzy_equivalent(
    sc: *const PovScenario,
    lhs: *const c_char,
    rhs: *const c_char,
    out_equivalent: *mut i32,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let (lhs, rhs) = match (read_str(lhs), read_str(rhs)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out_equivalent.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = (|| {
        let a = handle.inner.observable(lhs)?;
        let b = handle.inner.observable(rhs)?;
        order::fuzzy_equivalent(a, b, &handle.tols)
    })();
    match result {
        Ok(eq) => {
            *out_equivalent = eq.equivalent as i32;
            PovStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Decide whether a named observable is clean (every nonzero atom rank one).
///
/// # Safety
/// Pointer arguments must be valid; see `pov_scenario_parse`.
#[no_mangle]
pub unsafe extern "C" fn pov_is_clean(
    sc: *const PovScenario,
    observable: *const c_char,
    out_clean: *mut i32,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let name = match read_str(observable) {
        Ok(n) => n,
        Err(s) => return s,
    };
    if out_clean.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = handle.inner.observable(name).and_then(order::is_clean);
    match result {
        Ok(clean) => {
            *out_clean = clean as i32;
            PovStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Smear a named observable by a named kernel; returns the result as a JSON
/// observable (labels + atoms) through `out_json`.
///
/// # Safety
/// Pointer arguments must be valid; free the string with `pov_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pov_smear(
    sc: *const PovScenario,
    observable: *const c_char,
    kernel: *const c_char,
    out_json: *mut *mut c_char,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let (obs, ker) = match (read_str(observable), read_str(kernel)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    if out_json.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = (|| {
        let xi = handle.inner.observable(obs)?;
        let nu = handle.inner.kernel(ker)?;
        kernels::smear(xi, nu)
    })();
    match result {
        Ok(eta) => give_string(
            out_json,
            serde_json::to_string(&scenario::observable_to_json(&eta))
                .expect("observable serializes"),
        ),
        Err(e) => fail(e),
    }
}

/// Evaluate a built-in f-divergence (`tv`, `kl`, `hellinger`) between two
/// named probability-vector states. Writes the value into `out_value`
/// (+infinity when the divergence diverges).
///
/// # Safety
/// Pointer arguments must be valid; see `pov_scenario_parse`.
#[no_mangle]
pub unsafe extern "C" fn pov_divergence(
    sc: *const PovScenario,
    p: *const c_char,
    q: *const c_char,
    generator: *const c_char,
    out_value: *mut f64,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let (p, q, gen_name) = match (read_str(p), read_str(q), read_str(generator)) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    if out_value.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = (|| {
        let pv = probability(&handle.inner, p)?;
        let qv = probability(&handle.inner, q)?;
        let gen = divergences::builtin(gen_name)?;
        divergences::f_divergence(&gen, pv, qv)
    })();
    match result {
        Ok(value) => {
            *out_value = value.finite().unwrap_or(f64::INFINITY);
            PovStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Run the sufficiency equivalence battery; returns the report as JSON.
///
/// # Safety
/// Pointer arguments must be valid; free the string with `pov_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pov_equivalence_battery(
    sc: *const PovScenario,
    xi: *const c_char,
    eta: *const c_char,
    kernel: *const c_char,
    state: *const c_char,
    samples: usize,
    seed: u64,
    out_json: *mut *mut c_char,
) -> PovStatus {
    let handle = match with_scenario(sc) {
        Ok(h) => h,
        Err(s) => return s,
    };
    let names = (read_str(xi), read_str(eta), read_str(kernel), read_str(state));
    let (xi, eta, kernel, state) = match names {
        (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
        (Err(s), _, _, _) | (_, Err(s), _, _) | (_, _, Err(s), _) | (_, _, _, Err(s)) => {
            return s
        }
    };
    if out_json.is_null() {
        set_error("null output pointer");
        return PovStatus::NullPointer;
    }
    let result = (|| {
        order::equivalence_battery(
            handle.inner.observable(xi)?,
            handle.inner.observable(eta)?,
            handle.inner.kernel(kernel)?,
            handle.inner.state(state)?,
            samples,
            seed,
            &handle.tols,
        )
    })();
    match result {
        Ok(report) => give_string(
            out_json,
            serde_json::to_string(&report).expect("report serializes"),
        ),
        Err(e) => fail(e),
    }
}

fn probability<'a>(sc: &'a Scenario, name: &str) -> Result<&'a Vec<f64>, PovError> {
    match sc.state(name)? {
        State::Tribe(p) => Ok(p),
        State::Hilbert(_) => Err(PovError::InvalidInput(format!(
            "state `{name}` is a density matrix, expected a probability vector"
        ))),
    }
}
