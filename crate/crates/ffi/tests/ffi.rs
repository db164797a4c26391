use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use qperm_ffi::*;

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    qp_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(qp_last_error_message()).to_str().unwrap().to_owned()
}

#[test]
fn gram_and_weingarten_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(qp_gram_matrix(2, 4, &mut g), QpStatus::Ok);
        assert_eq!((qp_matrix_rows(g), qp_matrix_cols(g)), (2, 2));
        let mut json = ptr::null_mut();
        assert_eq!(qp_matrix_to_json(g, &mut json), QpStatus::Ok);
        assert_eq!(take_string(json), r#"[["4","4"],["4","16"]]"#);
        qp_matrix_free(g);

        let mut w = ptr::null_mut();
        assert_eq!(qp_weingarten_matrix(2, 4, &mut w), QpStatus::Ok);
        let mut cell = ptr::null_mut();
        assert_eq!(qp_matrix_entry(w, 0, 0, &mut cell), QpStatus::Ok);
        assert_eq!(take_string(cell), "1/3");
        assert_eq!(qp_matrix_entry(w, 0, 1, &mut cell), QpStatus::Ok);
        assert_eq!(take_string(cell), "-1/12");
        assert_eq!(qp_matrix_entry(w, 2, 0, &mut cell), QpStatus::InvalidArgument);
        qp_matrix_free(w);
    }
}

#[test]
fn singular_gram_reports_status_and_message() {
    unsafe {
        let mut w = ptr::null_mut();
        assert_eq!(qp_weingarten_matrix(2, 1, &mut w), QpStatus::SingularMatrix);
        assert!(w.is_null());
        assert!(last_error().starts_with("SingularMatrix"));
    }
}

#[test]
fn scalar_entry_points() {
    unsafe {
        let mut out = ptr::null_mut();
        let rows = [1usize, 2];
        let cols = [1usize, 2];
        assert_eq!(
            qp_monomial_integral(4, rows.as_ptr(), cols.as_ptr(), 2, &mut out),
            QpStatus::Ok
        );
        assert_eq!(take_string(out), "1/12");

        assert_eq!(qp_truncated_moment(4, 4, 3, false, &mut out), QpStatus::Ok);
        assert_eq!(take_string(out), "5");
        assert_eq!(qp_truncated_moment(4, 2, 4, true, &mut out), QpStatus::Ok);
        assert_eq!(take_string(out), "8/5");
        assert_eq!(qp_truncated_moment(4, 5, 1, false, &mut out), QpStatus::Domain);

        let t = CString::new("2").unwrap();
        assert_eq!(qp_free_poisson_moment(3, t.as_ptr(), &mut out), QpStatus::Ok);
        assert_eq!(take_string(out), "22");
        let t = CString::new("1").unwrap();
        assert_eq!(qp_poisson_moment(3, t.as_ptr(), &mut out), QpStatus::Ok);
        assert_eq!(take_string(out), "5");
        let bad = CString::new("1/0").unwrap();
        assert_eq!(qp_poisson_moment(3, bad.as_ptr(), &mut out), QpStatus::Domain);
        assert_eq!(qp_poisson_moment(3, ptr::null(), &mut out), QpStatus::NullPointer);
    }
}

#[test]
fn measures() {
    unsafe {
        let mut law = ptr::null_mut();
        assert_eq!(qp_sn_law(4, 1, false, &mut law), QpStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(qp_measure_to_json(law, &mut json), QpStatus::Ok);
        assert_eq!(
            take_string(json),
            r#"{"atoms":{"0":"3/4","1":"1/4"},"signed":false}"#
        );
        let mut w = ptr::null_mut();
        assert_eq!(qp_measure_weight(law, 7, &mut w), QpStatus::Ok);
        assert_eq!(take_string(w), "0");
        qp_measure_free(law);

        let mut oracle = ptr::null_mut();
        assert_eq!(qp_sn_law(5, 5, true, &mut oracle), QpStatus::Ok);
        assert_eq!(qp_measure_weight(oracle, 5, &mut w), QpStatus::Ok);
        assert_eq!(take_string(w), "1/120");
        qp_measure_free(oracle);
        assert_eq!(qp_sn_law(12, 1, true, &mut oracle), QpStatus::Resource);
    }
}

#[test]
fn null_out_pointers_are_rejected() {
    unsafe {
        assert_eq!(qp_gram_matrix(2, 4, ptr::null_mut()), QpStatus::NullPointer);
        assert_eq!(qp_matrix_to_json(ptr::null(), &mut ptr::null_mut()), QpStatus::NullPointer);
        assert_eq!(qp_matrix_rows(ptr::null()), 0);
        qp_matrix_free(ptr::null_mut());
        qp_measure_free(ptr::null_mut());
        qp_string_free(ptr::null_mut());
        let rows = [1usize];
        assert_eq!(
            qp_monomial_integral(4, rows.as_ptr(), ptr::null(), 1, &mut ptr::null_mut()),
            QpStatus::NullPointer
        );
    }
}

#[test]
fn version_matches_manifest() {
    let v = unsafe { CStr::from_ptr(qp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// The generated header must compile as C and declare every entry point.
#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/qperm.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for f in [
        "qp_gram_matrix",
        "qp_weingarten_matrix",
        "qp_monomial_integral",
        "qp_truncated_moment",
        "qp_sn_law",
        "qp_last_error_message",
        "qp_string_free",
    ] {
        assert!(text.contains(f), "{f} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler on PATH; skipping syntax check");
        return;
    };
    assert!(status.success());
}
