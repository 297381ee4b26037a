//! C interface to `qpd-core`.
//!
//! Every fallible function returns a [`QpdStatus`] and writes its result
//! through an out-pointer. Objects are opaque handles released with the
//! matching `*_free` function. After a failure, [`qpd_last_error`] returns
//! a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;

use qpd_core::experiment::{self, ExperimentConfig};
use qpd_core::linalg::{C64, Operator, Tolerances, eigenphases};
use qpd_core::noise::{self, ConfidenceModel};
use qpd_core::protocols::{self, DiscriminationPlan};
use qpd_core::qubit::{self, gates};
use qpd_core::{Error, fock};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotUnitary = 3,
    DimensionMismatch = 4,
    Indistinguishable = 5,
    ConfigError = 6,
    IoError = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QpdConfidenceModel {
    PerHypothesis = 0,
    HalfCredit = 1,
}

/// A square complex matrix.
pub struct QpdOperator(Operator);

/// A discrimination plan for two unitaries.
pub struct QpdPlan(DiscriminationPlan);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> QpdStatus {
    match err {
        Error::NotUnitary { .. } => QpdStatus::NotUnitary,
        Error::DimensionMismatch { .. } => QpdStatus::DimensionMismatch,
        Error::Indistinguishable => QpdStatus::Indistinguishable,
        Error::Config(_) => QpdStatus::ConfigError,
        Error::Io { .. } => QpdStatus::IoError,
        _ => QpdStatus::InvalidArgument,
    }
}

fn fail(status: QpdStatus, msg: impl Into<String>) -> QpdStatus {
    set_error(msg.into());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), QpdStatus>) -> QpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QpdStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(QpdStatus::Internal, "internal panic"),
    }
}

fn check(err: Error) -> QpdStatus {
    let status = status_of(&err);
    fail(status, err.to_string())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, QpdStatus> {
    // SAFETY: caller passes a pointer from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| fail(QpdStatus::NullPointer, "null pointer argument"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), QpdStatus> {
    if out.is_null() {
        return Err(fail(QpdStatus::NullPointer, "null output pointer"));
    }
    // SAFETY: non-null and the caller guarantees it is writable.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, QpdStatus> {
    if p.is_null() {
        return Err(fail(QpdStatus::NullPointer, "null string argument"));
    }
    // SAFETY: caller passes a nul-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(QpdStatus::InvalidArgument, "string is not UTF-8"))
}

/// Message for the last failure on this thread, or null. Valid until the
/// next failing call on the same thread.
#[unsafe(no_mangle)]
pub extern "C" fn qpd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[unsafe(no_mangle)]
pub extern "C" fn qpd_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(s) => s,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}

/// One of `i`, `x`, `y`, `z`, `h`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_operator_named(
    name: *const c_char,
    out: *mut *mut QpdOperator,
) -> QpdStatus {
    guard(|| {
        let name = unsafe { c_str(name)? };
        let op = gates::named(name)
            .ok_or_else(|| fail(QpdStatus::InvalidArgument, format!("unknown gate `{name}`")))?;
        unsafe { write(out, Box::into_raw(Box::new(QpdOperator(op)))) }
    })
}

/// Builds a `dim × dim` operator from row-major real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each point to `dim * dim` doubles.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_operator_from_parts(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QpdOperator,
) -> QpdStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(fail(QpdStatus::NullPointer, "null matrix data"));
        }
        let len = dim
            .checked_mul(dim)
            .ok_or_else(|| fail(QpdStatus::InvalidArgument, "dimension overflow"))?;
        // SAFETY: caller guarantees `len` readable doubles behind each pointer.
        let (re, im) = unsafe {
            (
                std::slice::from_raw_parts(re, len),
                std::slice::from_raw_parts(im, len),
            )
        };
        let entries: Vec<C64> = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
        let op = Operator::from_row_major(dim, &entries).map_err(check)?;
        unsafe { write(out, Box::into_raw(Box::new(QpdOperator(op)))) }
    })
}

/// # Safety
/// `op` must come from this library (or be null) and not be used again.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_operator_free(op: *mut QpdOperator) {
    if !op.is_null() {
        // SAFETY: allocated by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(op) });
    }
}

/// # Safety
/// `op` must be a live handle and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_operator_dim(op: *const QpdOperator, out: *mut usize) -> QpdStatus {
    guard(|| {
        let op = unsafe { deref(op)? };
        unsafe { write(out, op.0.dim()) }
    })
}

/// Writes the eigenphases of a unitary, ascending in `(-π, π]`.
/// `out_len` always receives the dimension; if `capacity` is smaller the
/// call returns `BufferTooSmall` and writes nothing else.
///
/// # Safety
/// `phases` must have room for `capacity` doubles.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_eigenphases(
    op: *const QpdOperator,
    phases: *mut f64,
    capacity: usize,
    out_len: *mut usize,
) -> QpdStatus {
    guard(|| {
        let op = unsafe { deref(op)? };
        let spectrum = eigenphases(&op.0, &Tolerances::DEFAULT).map_err(check)?;
        unsafe { write(out_len, spectrum.len())? };
        if capacity < spectrum.len() {
            return Err(fail(QpdStatus::BufferTooSmall, "phase buffer too small"));
        }
        if phases.is_null() {
            return Err(fail(QpdStatus::NullPointer, "null phase buffer"));
        }
        // SAFETY: capacity checked above.
        unsafe { ptr::copy_nonoverlapping(spectrum.phases().as_ptr(), phases, spectrum.len()) };
        Ok(())
    })
}

/// Plans perfect discrimination of `a` and `b` from parallel uses.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_plan_new(
    a: *const QpdOperator,
    b: *const QpdOperator,
    out: *mut *mut QpdPlan,
) -> QpdStatus {
    guard(|| {
        let (a, b) = unsafe { (deref(a)?, deref(b)?) };
        let plan = protocols::plan_parallel_discrimination(&a.0, &b.0, &Tolerances::DEFAULT)
            .map_err(check)?;
        unsafe { write(out, Box::into_raw(Box::new(QpdPlan(plan)))) }
    })
}

/// # Safety
/// `plan` must be a live handle and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_plan_uses(plan: *const QpdPlan, out: *mut usize) -> QpdStatus {
    guard(|| {
        let plan = unsafe { deref(plan)? };
        unsafe { write(out, plan.0.uses) }
    })
}

/// `|⟨probe|(A†B)^{⊗N}|probe⟩|` for the planned probe.
///
/// # Safety
/// `plan` must be a live handle and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_plan_overlap(plan: *const QpdPlan, out: *mut f64) -> QpdStatus {
    guard(|| {
        let plan = unsafe { deref(plan)? };
        unsafe { write(out, plan.0.achieved_overlap) }
    })
}

/// # Safety
/// `plan` must come from this library (or be null) and not be used again.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_plan_free(plan: *mut QpdPlan) {
    if !plan.is_null() {
        // SAFETY: allocated by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(plan) });
    }
}

/// Angle between the Bloch axes of two traceless Hermitian qubit unitaries.
///
/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_bloch_angle(
    a: *const QpdOperator,
    b: *const QpdOperator,
    out: *mut f64,
) -> QpdStatus {
    guard(|| {
        let (a, b) = unsafe { (deref(a)?, deref(b)?) };
        let angle = protocols::bloch_angle(&a.0, &b.0).map_err(check)?;
        unsafe { write(out, angle) }
    })
}

/// Tilt of `T̂` that makes the W(n) scheme error-free.
///
/// # Safety
/// `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_critical_angle(n: usize, out: *mut f64) -> QpdStatus {
    guard(|| {
        let theta = qubit::critical_angle(n).map_err(check)?;
        unsafe { write(out, theta) }
    })
}

/// # Safety
/// `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_predicted_confidence(
    m: f64,
    model: QpdConfidenceModel,
    out: *mut f64,
) -> QpdStatus {
    guard(|| {
        let model = match model {
            QpdConfidenceModel::PerHypothesis => ConfidenceModel::PerHypothesis,
            QpdConfidenceModel::HalfCredit => ConfidenceModel::HalfCredit,
        };
        let c = noise::predicted_confidence(m, model).map_err(check)?;
        unsafe { write(out, c) }
    })
}

/// Coincidence probability behind a 50/50 beamsplitter at visibility `m`.
///
/// # Safety
/// `out` must be writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_hom_coincidence(m: f64, out: *mut f64) -> QpdStatus {
    guard(|| {
        let p = fock::hom_coincidence(m).map_err(check)?;
        unsafe { write(out, p) }
    })
}

/// Runs a JSON experiment config and returns the JSON report, to be
/// released with [`qpd_string_free`]. `threads == 0` uses all cores.
///
/// # Safety
/// `config_json` must be a nul-terminated string and `out` writable.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_run_config_json(
    config_json: *const c_char,
    threads: usize,
    out: *mut *mut c_char,
) -> QpdStatus {
    guard(|| {
        let text = unsafe { c_str(config_json)? };
        let config = ExperimentConfig::from_json(text).map_err(check)?;
        let report = experiment::run_with_threads(&config, (threads > 0).then_some(threads))
            .map_err(check)?;
        let bytes = report.to_json().map_err(check)?;
        let s =
            CString::new(bytes).map_err(|_| fail(QpdStatus::Internal, "report contains nul"))?;
        unsafe { write(out, s.into_raw()) }
    })
}

/// # Safety
/// `s` must come from this library (or be null) and not be used again.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn qpd_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}
