//! C ABI over `equiweight`.
//!
//! Every fallible call returns an [`EwStatus`]; on failure the message is available from
//! [`ew_last_error`] until the next failing call on the same thread. Handles are created by
//! the `ew_model_from_*` functions and released with [`ew_model_free`].

use equiweight::corpus;
use equiweight::lfunctor::LComplex;
use equiweight::model::VarietyModel;
use equiweight::smithhat::{b_prime_value, smith_first_failure};
use equiweight::verify::verify_corpus;
use equiweight::weights::row_table;
use equiweight::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes. `EW_STATUS_OK` is zero; everything else is an error.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidModel = 5,
    WindowTooSmall = 6,
    Unsupported = 7,
    MissingCompanion = 8,
    SmithViolation = 9,
    Internal = 10,
}

/// Opaque model handle.
pub struct EwModel {
    model: VarietyModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> EwStatus {
    match e {
        Error::Parse(_) => EwStatus::Parse,
        Error::WindowTooSmall { .. } | Error::InsufficientDepth { .. } => EwStatus::WindowTooSmall,
        Error::Unsupported(_) => EwStatus::Unsupported,
        Error::MissingCompanion(_) => EwStatus::MissingCompanion,
        Error::SmithViolation { .. } => EwStatus::SmithViolation,
        _ => EwStatus::InvalidModel,
    }
}

fn fail(status: EwStatus, msg: &str) -> EwStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting library errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), EwStatus>) -> EwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(EwStatus::Internal, "internal panic"),
    }
}

fn lib<T>(r: equiweight::Result<T>) -> Result<T, EwStatus> {
    r.map_err(|e| fail(status_of(&e), &e.to_string()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, EwStatus> {
    if s.is_null() {
        return Err(fail(EwStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(EwStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

unsafe fn model<'a>(m: *const EwModel) -> Result<&'a VarietyModel, EwStatus> {
    m.as_ref().map(|m| &m.model).ok_or_else(|| fail(EwStatus::NullPointer, "null model handle"))
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), EwStatus> {
    if out.is_null() {
        return Err(fail(EwStatus::NullPointer, "null output pointer"));
    }
    out.write(v);
    Ok(())
}

unsafe fn emit(out: *mut *mut EwModel, m: VarietyModel) -> Result<(), EwStatus> {
    put(out, Box::into_raw(Box::new(EwModel { model: m })))
}

/// Message of the last failing call on this thread; empty if none. Owned by the library.
#[no_mangle]
pub extern "C" fn ew_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ew_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a model from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_model_from_json(json: *const c_char, out: *mut *mut EwModel) -> EwStatus {
    guard(|| {
        let m = lib(corpus::parse_str(text(json)?))?.model;
        emit(out, m)
    })
}

/// Loads a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_model_from_path(path: *const c_char, out: *mut *mut EwModel) -> EwStatus {
    guard(|| {
        let path = text(path)?;
        let s = std::fs::read_to_string(path).map_err(|e| fail(EwStatus::Io, &format!("{path}: {e}")))?;
        let m = lib(corpus::parse_str(&s))?.model;
        emit(out, m)
    })
}

/// Loads an embedded corpus entry by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_model_from_corpus(name: *const c_char, out: *mut *mut EwModel) -> EwStatus {
    guard(|| {
        let m = lib(corpus::corpus_entry(text(name)?))?.model;
        emit(out, m)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `m` must come from an `ew_model_from_*` call and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ew_model_free(m: *mut EwModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Real dimension of the model.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_model_dimension(m: *const EwModel, out: *mut i64) -> EwStatus {
    guard(|| put(out, model(m)?.dimension()))
}

/// Order of the acting group.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_model_group_order(m: *const EwModel, out: *mut u64) -> EwStatus {
    guard(|| put(out, model(m)?.fk.group().order() as u64))
}

/// `dim H_k(X; G)` over the model's default window.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_equivariant_homology_dim(m: *const EwModel, k: i64, out: *mut u64) -> EwStatus {
    guard(|| {
        let v = model(m)?;
        let l = lib(LComplex::new(v.complex(), None, v.default_contract()))?;
        put(out, lib(l.homology_dim(k))? as u64)
    })
}

/// `B_k^G` through the row spectral sequences.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_bkg(m: *const EwModel, k: i64, out: *mut i64) -> EwStatus {
    guard(|| {
        let v = model(m)?;
        let t = lib(row_table(&v.fk, None, v.default_contract(), v.flags.nash_faithful))?;
        put(out, lib(t.bkg_value(k))?)
    })
}

/// `^qB_i` from row `q`.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_qb(m: *const EwModel, q: i64, i: i64, out: *mut i64) -> EwStatus {
    guard(|| {
        let v = model(m)?;
        let t = lib(row_table(&v.fk, None, v.default_contract(), v.flags.nash_faithful))?;
        put(out, lib(t.qb_value(q, i))?)
    })
}

/// `B'_k` from the invariant data.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ew_b_prime(m: *const EwModel, k: i64, out: *mut i64) -> EwStatus {
    guard(|| put(out, lib(b_prime_value(model(m)?, k))?))
}

/// Smith exactness over every filtration degree. On failure `*exact` is false and the first
/// failing filtration degree and chain degree are written to `alpha` and `degree`.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ew_smith_check(m: *const EwModel, exact: *mut bool, alpha: *mut i64, degree: *mut i64) -> EwStatus {
    guard(|| {
        let first = lib(smith_first_failure(model(m)?))?;
        let (a, q) = first.unwrap_or((0, 0));
        put(exact, first.is_none())?;
        put(alpha, a)?;
        put(degree, q)
    })
}

/// Evaluates every expected block of the embedded corpus.
///
/// # Safety
/// The output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ew_verify_corpus(total: *mut u64, failed: *mut u64) -> EwStatus {
    guard(|| {
        let r = verify_corpus();
        put(total, r.len() as u64)?;
        put(failed, r.iter().filter(|b| !b.pass).count() as u64)
    })
}
