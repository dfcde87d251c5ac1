//! C ABI over the `tropline` kernel.
//!
//! Objects cross the boundary as opaque handles freed by their `*_free` function; results
//! that are not handles come back as JSON strings owned by the caller and released with
//! `tropline_string_free`. Every function returns a `TroplineStatus`; on failure the message
//! is available from `tropline_last_error` on the same thread. Output pointers are written
//! only on success (and on `VERIFICATION_FAILED`, where the report is still produced).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde::Serialize;
use tropline::dilworth::tilde_dilworth_uniform;
use tropline::linespace::{genericity_report, reduced_w, SubspaceInput};
use tropline::matroid::{matroid_of_lines, Matroid};
use tropline::pipeline::{analyze_lines, identity_suite};
use tropline::polyrel::Fault;
use tropline::tropical::bergman_chart;

/// Outcome of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TroplineStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    VerificationFailed = 4,
    Internal = 5,
}

/// Linear subspace `X` of `K^n` of dimension `d + 1`.
pub struct TroplineSubspace(SubspaceInput);

/// Matroid on labelled elements.
pub struct TroplineMatroid(Matroid);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(TroplineStatus, String);

impl From<tropline::Error> for Failure {
    fn from(e: tropline::Error) -> Self {
        Failure(TroplineStatus::InvalidInput, e.to_string())
    }
}

/// Runs `body`, records any failure or panic as the last error, and returns its status.
fn guard(body: impl FnOnce() -> Result<TroplineStatus, Failure>) -> TroplineStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TroplineStatus::Internal
        }
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(Failure(TroplineStatus::NullPointer, format!("{what} is NULL")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `s` must be NULL or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    non_null(s, what)?;
    CStr::from_ptr(s).to_str().map_err(|_| Failure(TroplineStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c_json<T: Serialize>(value: &T) -> Result<*mut c_char, Failure> {
    let text = serde_json::to_string(value).map_err(|e| Failure(TroplineStatus::Internal, e.to_string()))?;
    Ok(CString::new(text).expect("JSON has no NUL").into_raw())
}

/// # Safety
/// `out` must be NULL or valid for one write.
unsafe fn emit<T>(out: *mut T, value: T) -> Result<(), Failure> {
    non_null(out, "output pointer")?;
    out.write(value);
    Ok(())
}

/// Boxes `value` into a handle only once `out` is known to be writable, so nothing leaks.
///
/// # Safety
/// `out` must be NULL or valid for one write.
unsafe fn emit_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    non_null(out, "output pointer")?;
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn tropline_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropline_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"basis": [[...]]}` or `{"plucker": {...}}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_subspace_from_json(
    json: *const c_char,
    out: *mut *mut TroplineSubspace,
) -> TroplineStatus {
    guard(|| {
        let x = SubspaceInput::from_json(read_str(json, "json")?)?;
        emit_handle(out, TroplineSubspace(x))?;
        Ok(TroplineStatus::Ok)
    })
}

/// # Safety
/// `x` must be NULL or a handle from `tropline_subspace_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropline_subspace_free(x: *mut TroplineSubspace) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Writes `n` and `d` of the subspace.
///
/// # Safety
/// `x` must be a live handle; `n` and `d` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_subspace_shape(
    x: *const TroplineSubspace,
    n: *mut usize,
    d: *mut usize,
) -> TroplineStatus {
    guard(|| {
        non_null(x, "subspace")?;
        emit(n, (*x).0.n())?;
        emit(d, (*x).0.d())?;
        Ok(TroplineStatus::Ok)
    })
}

/// Report on `U`, `V` and the three matroids of lines as JSON. Returns
/// `VERIFICATION_FAILED` (with the report still written) if the routes disagree.
///
/// # Safety
/// `x` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_lines_report_json(
    x: *const TroplineSubspace,
    out: *mut *mut c_char,
) -> TroplineStatus {
    guard(|| {
        non_null(x, "subspace")?;
        non_null(out, "output pointer")?;
        let analysis = analyze_lines(&(*x).0)?;
        emit(out, to_c_json(&analysis.report())?)?;
        if analysis.verified() {
            Ok(TroplineStatus::Ok)
        } else {
            Err(Failure(TroplineStatus::VerificationFailed, "the matroids of lines disagree".into()))
        }
    })
}

/// Whether the arrangement of lines of `x` is generic.
///
/// # Safety
/// `x` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_is_generic(x: *const TroplineSubspace, out: *mut bool) -> TroplineStatus {
    guard(|| {
        non_null(x, "subspace")?;
        emit(out, genericity_report(&(*x).0)?.is_generic)?;
        Ok(TroplineStatus::Ok)
    })
}

/// Matroid of the lines `ℓ_J` of `x`.
///
/// # Safety
/// `x` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_lines_matroid(
    x: *const TroplineSubspace,
    out: *mut *mut TroplineMatroid,
) -> TroplineStatus {
    guard(|| {
        non_null(x, "subspace")?;
        let m = matroid_of_lines(&reduced_w(&(*x).0))?;
        emit_handle(out, TroplineMatroid(m))?;
        Ok(TroplineStatus::Ok)
    })
}

/// Relabeled Dilworth truncation of the free matroid on `n` elements at rank `k`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_dilworth_uniform(
    n: usize,
    k: usize,
    out: *mut *mut TroplineMatroid,
) -> TroplineStatus {
    guard(|| {
        if k == 0 || k > n {
            return Err(Failure(TroplineStatus::InvalidInput, format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
        }
        let m = tilde_dilworth_uniform(n, k)?;
        emit_handle(out, TroplineMatroid(m))?;
        Ok(TroplineStatus::Ok)
    })
}

/// Parses `{"ground": [...], "rank": r, "bases": [[...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_matroid_from_json(
    json: *const c_char,
    out: *mut *mut TroplineMatroid,
) -> TroplineStatus {
    guard(|| {
        let m: Matroid = serde_json::from_str(read_str(json, "json")?)
            .map_err(|e| Failure(TroplineStatus::InvalidInput, format!("invalid matroid JSON: {e}")))?;
        emit_handle(out, TroplineMatroid(m))?;
        Ok(TroplineStatus::Ok)
    })
}

/// # Safety
/// `m` must be NULL or a matroid handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropline_matroid_free(m: *mut TroplineMatroid) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes the ground-set size and the rank.
///
/// # Safety
/// `m` must be a live handle; `size` and `rank` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_matroid_shape(
    m: *const TroplineMatroid,
    size: *mut usize,
    rank: *mut usize,
) -> TroplineStatus {
    guard(|| {
        non_null(m, "matroid")?;
        emit(size, (*m).0.len())?;
        emit(rank, (*m).0.rank())?;
        Ok(TroplineStatus::Ok)
    })
}

/// Matroid JSON.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_matroid_to_json(m: *const TroplineMatroid, out: *mut *mut c_char) -> TroplineStatus {
    guard(|| {
        non_null(m, "matroid")?;
        emit(out, to_c_json(&(*m).0)?)?;
        Ok(TroplineStatus::Ok)
    })
}

/// Whether two matroids have the same labelled bases.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_matroid_equal(
    a: *const TroplineMatroid,
    b: *const TroplineMatroid,
    out: *mut bool,
) -> TroplineStatus {
    guard(|| {
        non_null(a, "first matroid")?;
        non_null(b, "second matroid")?;
        emit(out, tropline::matroid::matroid_equal_by_labels(&(*a).0, &(*b).0))?;
        Ok(TroplineStatus::Ok)
    })
}

/// Bergman fan chart (rays and maximal cones) as JSON.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_bergman_chart_json(
    m: *const TroplineMatroid,
    out: *mut *mut c_char,
) -> TroplineStatus {
    guard(|| {
        non_null(m, "matroid")?;
        emit(out, to_c_json(&bergman_chart(&(*m).0)?)?)?;
        Ok(TroplineStatus::Ok)
    })
}

/// Exchange identities and saturation certificates for one `(n, d)` as JSON. Returns
/// `VERIFICATION_FAILED` (with the report still written) if any check fails.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn tropline_verify_identities_json(n: usize, d: usize, out: *mut *mut c_char) -> TroplineStatus {
    guard(|| {
        non_null(out, "output pointer")?;
        if d == 0 || n <= d {
            return Err(Failure(TroplineStatus::InvalidInput, format!("need 1 ≤ d < n, got n = {n}, d = {d}")));
        }
        let report = identity_suite(n, d, Fault::None)?;
        emit(out, to_c_json(&report)?)?;
        if report.passed() {
            Ok(TroplineStatus::Ok)
        } else {
            Err(Failure(TroplineStatus::VerificationFailed, "an identity or certificate failed".into()))
        }
    })
}
