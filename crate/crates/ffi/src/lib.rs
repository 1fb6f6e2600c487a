//! C ABI over the `ddqsl` simulator.
//!
//! A model is created with [`ddqsl_model_new`] and released with
//! [`ddqsl_model_free`]. Every other call returns a [`DdqslStatus`] and writes
//! its result through an out-pointer; on failure the message is available from
//! [`ddqsl_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ddqsl::nonmarkov::{non_markovianity, OptimalPair};
use ddqsl::oracle::verify_kappa;
use ddqsl::speedlimit::qslt;
use ddqsl::{Dynamics, Error, PulseSchedule, Side, SpectralParams};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdqslStatus {
    Ok = 0,
    NullPointer = 1,
    Validation = 2,
    Domain = 3,
    AmbiguousPulseTime = 4,
    DegenerateTarget = 5,
    Capacity = 6,
    DimensionMismatch = 7,
    Panic = 8,
}

/// Which one-sided limit to take at a pulse time.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdqslSide {
    Left = 0,
    Right = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdqslOptimalPair {
    Pole = 0,
    Equator = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdqslQslt {
    pub tau: f64,
    pub tau_qsl: f64,
    pub ratio: f64,
    pub p_tau: f64,
    pub gamma_theta0: f64,
    pub total_var: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdqslNonMarkovianity {
    pub gamma: f64,
    pub gamma_theta0: f64,
    pub gamma_theta_pi4: f64,
    pub optimal: DdqslOptimalPair,
}

/// Opaque handle: spectral parameters plus pulse schedule, with the
/// interval coefficients precomputed.
pub struct DdqslModel {
    dynamics: Dynamics,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn status_of(e: &Error) -> DdqslStatus {
    match e {
        Error::Validation(_) => DdqslStatus::Validation,
        Error::Domain { .. } => DdqslStatus::Domain,
        Error::AmbiguousPulseTime { .. } => DdqslStatus::AmbiguousPulseTime,
        Error::DegenerateTarget { .. } => DdqslStatus::DegenerateTarget,
        Error::Capacity { .. } => DdqslStatus::Capacity,
        Error::DimensionMismatch { .. } => DdqslStatus::DimensionMismatch,
    }
}

/// Runs `f`, writes its value to `out`, and maps errors and panics to a status.
fn guard<T>(out: *mut T, f: impl FnOnce() -> ddqsl::Result<T>) -> DdqslStatus {
    if out.is_null() {
        set_last_error("output pointer is null");
        return DdqslStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(value)) => {
            // SAFETY: checked non-null above; the caller guarantees it is writable.
            unsafe { out.write(value) };
            set_last_error("");
            DdqslStatus::Ok
        }
        Ok(Err(e)) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic");
            DdqslStatus::Panic
        }
    }
}

/// Borrows the model behind `model`, or reports a null handle.
///
/// # Safety
/// `model` must be null or a live pointer from [`ddqsl_model_new`].
unsafe fn with_model<T>(
    model: *const DdqslModel,
    out: *mut T,
    f: impl FnOnce(&Dynamics) -> ddqsl::Result<T>,
) -> DdqslStatus {
    match model.as_ref() {
        Some(m) => guard(out, || f(&m.dynamics)),
        None => {
            set_last_error("model handle is null");
            DdqslStatus::NullPointer
        }
    }
}

fn side(s: DdqslSide) -> Side {
    match s {
        DdqslSide::Left => Side::Left,
        DdqslSide::Right => Side::Right,
    }
}

/// Creates a model for `γ₀`, `λ` and `n_pulses` equally spaced pulses on `[0, τ]`.
///
/// # Safety
/// `out` must be null or point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_model_new(
    gamma0: f64,
    lambda: f64,
    tau: f64,
    n_pulses: usize,
    out: *mut *mut DdqslModel,
) -> DdqslStatus {
    guard(out, || {
        let params = SpectralParams::new(gamma0, lambda)?;
        let schedule = PulseSchedule::new(tau, n_pulses)?;
        let model = DdqslModel {
            dynamics: Dynamics::new(params, schedule),
        };
        Ok(Box::into_raw(Box::new(model)))
    })
}

/// # Safety
/// `model` must be null or a pointer from [`ddqsl_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_model_free(model: *mut DdqslModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// `κ_t`; at a pulse time the value is continuous.
///
/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_kappa(
    model: *const DdqslModel,
    t: f64,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.kappa(t))
}

/// `κ̇_t`; fails with `AmbiguousPulseTime` exactly at a pulse.
///
/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_kappa_dot(
    model: *const DdqslModel,
    t: f64,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.kappa_dot(t))
}

/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_kappa_dot_sided(
    model: *const DdqslModel,
    t: f64,
    which: DdqslSide,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.kappa_dot_sided(t, side(which)))
}

/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_population(
    model: *const DdqslModel,
    t: f64,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.population(t))
}

/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_population_dot(
    model: *const DdqslModel,
    t: f64,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.population_dot(t))
}

/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_population_dot_sided(
    model: *const DdqslModel,
    t: f64,
    which: DdqslSide,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| d.population_dot_sided(t, side(which)))
}

/// Speed-limit time of the W-state evolution over the model's window.
///
/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_qslt(model: *const DdqslModel, out: *mut DdqslQslt) -> DdqslStatus {
    with_model(model, out, |d| {
        let r = qslt(d.params(), d.schedule())?;
        Ok(DdqslQslt {
            tau: r.tau,
            tau_qsl: r.tau_qsl,
            ratio: r.ratio,
            p_tau: r.p_tau,
            gamma_theta0: r.gamma_theta0,
            total_var: r.total_var,
        })
    })
}

/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_non_markovianity(
    model: *const DdqslModel,
    out: *mut DdqslNonMarkovianity,
) -> DdqslStatus {
    with_model(model, out, |d| {
        let r = non_markovianity(d.params(), d.schedule());
        Ok(DdqslNonMarkovianity {
            gamma: r.gamma,
            gamma_theta0: r.gamma_theta0,
            gamma_theta_pi4: r.gamma_theta_pi4,
            optimal: match r.optimal {
                OptimalPair::Pole => DdqslOptimalPair::Pole,
                OptimalPair::Equator => DdqslOptimalPair::Equator,
            },
        })
    })
}

/// Largest gap between the analytic `κ_t` and the pseudomode integration
/// over about `grid_points` samples.
///
/// # Safety
/// `model` must come from [`ddqsl_model_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ddqsl_verify_kappa(
    model: *const DdqslModel,
    grid_points: usize,
    out: *mut f64,
) -> DdqslStatus {
    with_model(model, out, |d| {
        verify_kappa(d.params(), d.schedule(), grid_points)
    })
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ddqsl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn ddqsl_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}
