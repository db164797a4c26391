//! C ABI for the `qperm` engine.
//!
//! Conventions:
//!
//! - Every fallible call returns a [`QpStatus`]; results go through out
//!   pointers, which are written only on success.
//! - Exact values cross the boundary as NUL-terminated `p/q` strings that the
//!   caller releases with [`qp_string_free`].
//! - Matrices and measures are opaque handles released with
//!   [`qp_matrix_free`] and [`qp_measure_free`].
//! - After a failure, [`qp_last_error_message`] describes it. The message
//!   belongs to the calling thread and stays valid until its next call.
//!
//! The header `include/qperm.h` is generated from this file by cbindgen.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qperm::classical::{self, DiscreteMeasure};
use qperm::exactla::{format_rational, parse_rational, RationalMatrix};
use qperm::laws::{self, LawParameter};
use qperm::weingarten::{self, MomentQuery, MonomialSpec};
use qperm::Error;

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QpStatus {
    Ok = 0,
    InvalidArgument = 1,
    DimensionMismatch = 2,
    SingularMatrix = 3,
    Domain = 4,
    Resource = 5,
    Numeric = 6,
    Mismatch = 7,
    Inconsistent = 8,
    Parse = 9,
    NullPointer = 10,
    Panic = 11,
}

impl From<&Error> for QpStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => QpStatus::InvalidArgument,
            Error::DimensionMismatch(_) => QpStatus::DimensionMismatch,
            Error::SingularMatrix { .. } => QpStatus::SingularMatrix,
            Error::Domain(_) => QpStatus::Domain,
            Error::Resource(_) => QpStatus::Resource,
            Error::Numeric { .. } => QpStatus::Numeric,
            Error::Mismatch(_) => QpStatus::Mismatch,
            Error::Inconsistent(_) => QpStatus::Inconsistent,
            Error::Parse(_) => QpStatus::Parse,
        }
    }
}

/// Opaque exact rational matrix.
pub struct QpMatrix(RationalMatrix);

/// Opaque finitely supported measure on the integers.
pub struct QpMeasure(DiscreteMeasure);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

enum Failure {
    Engine(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Runs `body`, converting errors and panics into a status and a message.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            QpStatus::Ok
        }
        Ok(Err(Failure::Engine(e))) => {
            set_last_error(format!("{}: {e}", e.name()));
            QpStatus::from(&e)
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("NullPointer: {what} is null"));
            QpStatus::NullPointer
        }
        Err(_) => {
            set_last_error("Panic: internal error".into());
            QpStatus::Panic
        }
    }
}

/// Checked before any work so nothing is allocated for a null out pointer.
unsafe fn out_slot<'a, T: Copy>(out: *mut T) -> Result<&'a mut T, Failure> {
    out.as_mut().ok_or(Failure::Null("out"))
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::Engine(Error::Parse(e.to_string())))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Engine(Error::Parse(format!("{what} is not UTF-8"))))
}

unsafe fn read_indices(p: *const usize, len: usize, what: &'static str) -> Result<Vec<usize>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len).to_vec())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `qp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn qp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn qp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `qp_*` function and must not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn qp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Gram matrix `G_kn` in canonical `NC(k)` order.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_gram_matrix(k: usize, n: u64, out: *mut *mut QpMatrix) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = weingarten::gram_matrix(k, n)?;
        *slot = Box::into_raw(Box::new(QpMatrix(m)));
        Ok(())
    })
}

/// Weingarten matrix `W_kn = G_kn⁻¹`.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_weingarten_matrix(k: usize, n: u64, out: *mut *mut QpMatrix) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = weingarten::weingarten_matrix(k, n)?;
        *slot = Box::into_raw(Box::new(QpMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qp_matrix_rows(m: *const QpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be null or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn qp_matrix_cols(m: *const QpMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// Entry `(row, col)` (0-based) as a `p/q` string.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_matrix_entry(
    m: *const QpMatrix,
    row: usize,
    col: usize,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = m.as_ref().ok_or(Failure::Null("matrix"))?;
        if row >= m.0.rows() || col >= m.0.cols() {
            return Err(Error::InvalidArgument(format!(
                "entry ({row}, {col}) outside a {}x{} matrix",
                m.0.rows(),
                m.0.cols()
            ))
            .into());
        }
        *slot = into_c_string(format_rational(&m.0[(row, col)]));
        Ok(())
    })
}

/// The matrix as a JSON array of arrays of `p/q` strings.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_matrix_to_json(m: *const QpMatrix, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = m.as_ref().ok_or(Failure::Null("matrix"))?;
        let s = to_json(&m.0)?;
        *slot = into_c_string(s);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_matrix_free(m: *mut QpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// `∫ u_{i1 j1} … u_{ik jk}` with 1-based `rows` and `cols` of length `k`.
///
/// # Safety
/// `rows` and `cols` must point to `k` readable values; `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_monomial_integral(
    n: u64,
    rows: *const usize,
    cols: *const usize,
    k: usize,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let rows = read_indices(rows, k, "rows")?;
        let cols = read_indices(cols, k, "cols")?;
        let v = weingarten::monomial_integral(&MonomialSpec::new(n, rows, cols)?)?;
        *slot = into_c_string(format_rational(&v));
        Ok(())
    })
}

/// `∫ (u_11 + … + u_ss)^k`; the closed forms are used when `closed_form` is
/// nonzero (only `k ≤ 4`).
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_truncated_moment(
    n: u64,
    s: u64,
    k: usize,
    closed_form: bool,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let q = MomentQuery::new(n, s, k)?;
        let v = if closed_form {
            weingarten::closed_form_moment(&q)?
        } else {
            weingarten::truncated_moment(&q)?
        };
        *slot = into_c_string(format_rational(&v));
        Ok(())
    })
}

/// `k`-th moment of the free Poisson law with parameter `t` given as `p/q`.
///
/// # Safety
/// `t` must be a NUL-terminated string; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_free_poisson_moment(
    k: usize,
    t: *const c_char,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let t = LawParameter::new(parse_rational(read_str(t, "t")?)?)?;
        let v = laws::free_poisson_moment(k, &t)?;
        *slot = into_c_string(format_rational(&v));
        Ok(())
    })
}

/// `k`-th moment of the Poisson law with parameter `t` given as `p/q`.
///
/// # Safety
/// `t` must be a NUL-terminated string; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_poisson_moment(k: usize, t: *const c_char, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let t = LawParameter::new(parse_rational(read_str(t, "t")?)?)?;
        let v = laws::poisson_moment(k, &t)?;
        *slot = into_c_string(format_rational(&v));
        Ok(())
    })
}

/// Law of `u_11 + … + u_ss` on `S_n`; `oracle` nonzero enumerates all `n!`
/// permutations instead.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_sn_law(n: u64, s: u64, oracle: bool, out: *mut *mut QpMeasure) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let law = if oracle {
            classical::brute_force_law(n, s)?
        } else {
            classical::sn_law(n, s)?
        };
        *slot = Box::into_raw(Box::new(QpMeasure(law)));
        Ok(())
    })
}

/// Weight at `point` as a `p/q` string (`0` off the support).
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_measure_weight(
    m: *const QpMeasure,
    point: i64,
    out: *mut *mut c_char,
) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = m.as_ref().ok_or(Failure::Null("measure"))?;
        *slot = into_c_string(format_rational(&m.0.weight(point)));
        Ok(())
    })
}

/// The measure as `{"atoms": {"0": "3/4", …}, "signed": false}`.
///
/// # Safety
/// `m` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qp_measure_to_json(m: *const QpMeasure, out: *mut *mut c_char) -> QpStatus {
    guard(|| {
        let slot = out_slot(out)?;
        let m = m.as_ref().ok_or(Failure::Null("measure"))?;
        let s = to_json(&m.0)?;
        *slot = into_c_string(s);
        Ok(())
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qp_measure_free(m: *mut QpMeasure) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}
