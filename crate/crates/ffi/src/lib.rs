//! C ABI over `qamp-core`.
//!
//! Every function returns a [`QampStatus`]; results come back through out-pointers.
//! On failure a message is kept per thread and can be read with
//! [`qamp_last_error_message`]. Machines and attack configurations are opaque handles
//! that the caller frees with the matching `*_free` function. Panics never cross the
//! boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qamp_core::attack::{success_rate, AttackConfig, AuxSource, TargetDistribution};
use qamp_core::cloning::{closed_form_weights, CloneMachine};
use qamp_core::measurement::{snr_grows, snr_index, MeasurementMode};
use qamp_core::qubit::{aux_info, parity, reconstruct, AuxiliaryInfo, Parity, Qubit};
use qamp_core::y00::{ciphering_wheel, security_margin, Y00Params};
use qamp_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QampStatus {
    Ok = 0,
    NullPointer = 1,
    AngleOutOfRange = 2,
    InvalidCloneParams = 3,
    InvalidConfig = 4,
    InvalidSplit = 5,
    ParityUndefined = 6,
    InsufficientPhotons = 7,
    DegenerateDirection = 8,
    InvalidState = 9,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QampParity {
    Plus = 0,
    Minus = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QampMode {
    Idealized = 0,
    Partitioned = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QampAuxSource {
    Amplified = 0,
    Exact = 1,
    Random = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QampStokes {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QampMachineConstants {
    pub fidelity: f64,
    pub disturbance: f64,
    pub shrink_factor: f64,
    pub snr_index: f64,
    pub snr_grows: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QampRate {
    pub trials: u64,
    pub successes: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci95: f64,
    pub mean_angular_error: f64,
}

/// Opaque cloning machine.
pub struct QampMachine(CloneMachine);

/// Opaque attack campaign configuration.
pub struct QampAttackConfig(AttackConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> QampStatus {
    match e {
        Error::AngleOutOfRange { .. } => QampStatus::AngleOutOfRange,
        Error::InvalidCloneParams { .. } => QampStatus::InvalidCloneParams,
        Error::InvalidConfig(_) => QampStatus::InvalidConfig,
        Error::InvalidSplit(_) => QampStatus::InvalidSplit,
        Error::ParityUndefined(_) => QampStatus::ParityUndefined,
        Error::InsufficientPhotons { .. } => QampStatus::InsufficientPhotons,
        Error::DegenerateDirection { .. } => QampStatus::DegenerateDirection,
        Error::InvalidDensityMatrix(_) | Error::InvalidWeights { .. } => QampStatus::InvalidState,
    }
}

/// Runs `f` behind the boundary: records errors and converts panics.
fn guard<F: FnOnce() -> Result<(), QampStatus>>(f: F) -> QampStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QampStatus::Ok,
        Ok(Err(s)) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            QampStatus::Panic
        }
    }
}

fn check<T>(r: qamp_core::Result<T>) -> Result<T, QampStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn out<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, QampStatus> {
    // SAFETY: the caller promises `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| {
        set_error(format!("{name} is null"));
        QampStatus::NullPointer
    })
}

fn handle<'a, T>(p: *const T, name: &str) -> Result<&'a T, QampStatus> {
    // SAFETY: the caller promises `p` is null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| {
        set_error(format!("{name} is null"));
        QampStatus::NullPointer
    })
}

fn handle_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, QampStatus> {
    out(p, name)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qamp_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message for the last failing call on this thread, or NULL. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qamp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code, e.g. `"QAMP_STATUS_OK"`.
#[no_mangle]
pub extern "C" fn qamp_status_name(status: QampStatus) -> *const c_char {
    let s: &'static CStr = match status {
        QampStatus::Ok => c"QAMP_STATUS_OK",
        QampStatus::NullPointer => c"QAMP_STATUS_NULL_POINTER",
        QampStatus::AngleOutOfRange => c"QAMP_STATUS_ANGLE_OUT_OF_RANGE",
        QampStatus::InvalidCloneParams => c"QAMP_STATUS_INVALID_CLONE_PARAMS",
        QampStatus::InvalidConfig => c"QAMP_STATUS_INVALID_CONFIG",
        QampStatus::InvalidSplit => c"QAMP_STATUS_INVALID_SPLIT",
        QampStatus::ParityUndefined => c"QAMP_STATUS_PARITY_UNDEFINED",
        QampStatus::InsufficientPhotons => c"QAMP_STATUS_INSUFFICIENT_PHOTONS",
        QampStatus::DegenerateDirection => c"QAMP_STATUS_DEGENERATE_DIRECTION",
        QampStatus::InvalidState => c"QAMP_STATUS_INVALID_STATE",
        QampStatus::Panic => c"QAMP_STATUS_PANIC",
    };
    s.as_ptr()
}

/// Stokes expectation of the pure state `(theta, phi)`.
#[no_mangle]
pub extern "C" fn qamp_stokes(theta: f64, phi: f64, stokes: *mut QampStokes) -> QampStatus {
    guard(|| {
        let dst = out(stokes, "stokes")?;
        let s = check(Qubit::new(theta, phi))?.stokes();
        *dst = QampStokes { s1: s.s1, s2: s.s2, s3: s.s3 };
        Ok(())
    })
}

/// Canonical representative `(theta_c, phi_c)` of the state's auxiliary class.
#[no_mangle]
pub extern "C" fn qamp_aux_info(theta: f64, phi: f64, theta_c: *mut f64, phi_c: *mut f64) -> QampStatus {
    guard(|| {
        let t = out(theta_c, "theta_c")?;
        let p = out(phi_c, "phi_c")?;
        let aux = aux_info(&check(Qubit::new(theta, phi))?);
        *t = aux.theta();
        *p = aux.phi();
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn qamp_parity(theta: f64, phi: f64, parity_out: *mut QampParity) -> QampStatus {
    guard(|| {
        let dst = out(parity_out, "parity_out")?;
        *dst = match check(parity(&check(Qubit::new(theta, phi))?))? {
            Parity::Plus => QampParity::Plus,
            Parity::Minus => QampParity::Minus,
        };
        Ok(())
    })
}

/// Inverse of the parity/auxiliary split. `(theta_c, phi_c)` is canonicalized first.
#[no_mangle]
pub extern "C" fn qamp_reconstruct(
    parity_in: QampParity,
    theta_c: f64,
    phi_c: f64,
    theta: *mut f64,
    phi: *mut f64,
) -> QampStatus {
    guard(|| {
        let t = out(theta, "theta")?;
        let p = out(phi, "phi")?;
        let aux = AuxiliaryInfo::of(&check(Qubit::new(theta_c, phi_c))?);
        let par = match parity_in {
            QampParity::Plus => Parity::Plus,
            QampParity::Minus => Parity::Minus,
        };
        let q = check(reconstruct(par, &aux))?;
        *t = q.theta();
        *p = q.phi();
        Ok(())
    })
}

/// Creates a `p -> q` machine; free it with [`qamp_machine_free`].
#[no_mangle]
pub extern "C" fn qamp_machine_new(p: u64, q: u64, machine: *mut *mut QampMachine) -> QampStatus {
    guard(|| {
        let dst = out(machine, "machine")?;
        *dst = ptr::null_mut();
        let m = check(CloneMachine::new(p, q))?;
        *dst = Box::into_raw(Box::new(QampMachine(m)));
        Ok(())
    })
}

/// Frees a machine. NULL is ignored.
///
/// # Safety
/// `machine` must be NULL or a handle from [`qamp_machine_new`] that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn qamp_machine_free(machine: *mut QampMachine) {
    if !machine.is_null() {
        drop(Box::from_raw(machine));
    }
}

#[no_mangle]
pub extern "C" fn qamp_machine_constants(
    machine: *const QampMachine,
    constants: *mut QampMachineConstants,
) -> QampStatus {
    guard(|| {
        let m = &handle(machine, "machine")?.0;
        let dst = out(constants, "constants")?;
        *dst = QampMachineConstants {
            fidelity: m.fidelity(),
            disturbance: m.disturbance(),
            shrink_factor: m.shrink_factor(),
            snr_index: snr_index(m),
            snr_grows: snr_grows(m),
        };
        Ok(())
    })
}

/// Weights `(a, b)` of `ψ` and `ψ⊥` after `levels` cascade steps from a pure input.
#[no_mangle]
pub extern "C" fn qamp_cascade_weights(
    machine: *const QampMachine,
    levels: u32,
    a: *mut f64,
    b: *mut f64,
) -> QampStatus {
    guard(|| {
        let m = &handle(machine, "machine")?.0;
        let wa = out(a, "a")?;
        let wb = out(b, "b")?;
        (*wa, *wb) = closed_form_weights(m, levels);
        Ok(())
    })
}

/// Ciphering-wheel key bit for `(parity, k)`.
#[no_mangle]
pub extern "C" fn qamp_ciphering_wheel(parity_in: QampParity, k: u64) -> u8 {
    let p = match parity_in {
        QampParity::Plus => Parity::Plus,
        QampParity::Minus => Parity::Minus,
    };
    ciphering_wheel(p, k)
}

/// Y-00 security margin: `secure = M > π|α|`, `ratio = M/(π|α|)`.
#[no_mangle]
pub extern "C" fn qamp_security_margin(m_levels: u64, alpha_sq: f64, secure: *mut bool, ratio: *mut f64) -> QampStatus {
    guard(|| {
        let s = out(secure, "secure")?;
        let r = out(ratio, "ratio")?;
        let margin = security_margin(&check(Y00Params::new(m_levels, alpha_sq))?);
        *s = margin.secure;
        *r = margin.ratio;
        Ok(())
    })
}

/// Attack configuration with defaults: idealized measurement, amplified aux, 1000
/// trials, seed 0. The machine is copied.
#[no_mangle]
pub extern "C" fn qamp_attack_config_new(
    machine: *const QampMachine,
    levels: u32,
    source_photons: u64,
    split: f64,
    config: *mut *mut QampAttackConfig,
) -> QampStatus {
    guard(|| {
        let m = handle(machine, "machine")?.0;
        let dst = out(config, "config")?;
        *dst = ptr::null_mut();
        let cfg = AttackConfig::new(m, levels, source_photons, split);
        check(cfg.validate())?;
        *dst = Box::into_raw(Box::new(QampAttackConfig(cfg)));
        Ok(())
    })
}

/// Frees a configuration. NULL is ignored.
///
/// # Safety
/// `config` must be NULL or a handle from [`qamp_attack_config_new`] that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qamp_attack_config_free(config: *mut QampAttackConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

#[no_mangle]
pub extern "C" fn qamp_attack_config_set_trials(config: *mut QampAttackConfig, trials: u64) -> QampStatus {
    guard(|| {
        let c = handle_mut(config, "config")?;
        if trials == 0 {
            set_error("trials must be at least 1".into());
            return Err(QampStatus::InvalidConfig);
        }
        c.0.trials = trials;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn qamp_attack_config_set_seed(config: *mut QampAttackConfig, seed: u64) -> QampStatus {
    guard(|| {
        handle_mut(config, "config")?.0.seed = seed;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn qamp_attack_config_set_mode(config: *mut QampAttackConfig, mode: QampMode) -> QampStatus {
    guard(|| {
        handle_mut(config, "config")?.0.mode = match mode {
            QampMode::Idealized => MeasurementMode::Idealized,
            QampMode::Partitioned => MeasurementMode::Partitioned,
        };
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn qamp_attack_config_set_aux_source(
    config: *mut QampAttackConfig,
    source: QampAuxSource,
) -> QampStatus {
    guard(|| {
        handle_mut(config, "config")?.0.aux_source = match source {
            QampAuxSource::Amplified => AuxSource::Amplified,
            QampAuxSource::Exact => AuxSource::Exact,
            QampAuxSource::Random => AuxSource::Random,
        };
        Ok(())
    })
}

/// Monte Carlo success rate over targets uniform on the sphere.
#[no_mangle]
pub extern "C" fn qamp_success_rate(config: *const QampAttackConfig, rate: *mut QampRate) -> QampStatus {
    guard(|| {
        let cfg = &handle(config, "config")?.0;
        let dst = out(rate, "rate")?;
        let r = check(success_rate(&TargetDistribution::UniformSphere, cfg))?;
        *dst = QampRate {
            trials: r.trials,
            successes: r.successes,
            failures: r.failures,
            rate: r.rate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            ci95: r.ci95,
            mean_angular_error: r.mean_angular_error,
        };
        Ok(())
    })
}
