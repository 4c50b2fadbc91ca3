use equiweight_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn corpus_model(name: &str) -> *mut EwModel {
    let name = CString::new(name).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ew_model_from_corpus(name.as_ptr(), &mut m) }, EwStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ew_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn figure_eight_invariants() {
    let m = corpus_model("figure8_flip");
    let (mut d, mut order) = (0i64, 0u64);
    unsafe {
        assert_eq!(ew_model_dimension(m, &mut d), EwStatus::Ok);
        assert_eq!(ew_model_group_order(m, &mut order), EwStatus::Ok);
    }
    assert_eq!((d, order), (1, 2));
    for (k, want) in [(1, 1), (0, 2), (-1, 3), (-2, 3)] {
        let (mut b, mut bp) = (0i64, 0i64);
        unsafe {
            assert_eq!(ew_bkg(m, k, &mut b), EwStatus::Ok);
            assert_eq!(ew_b_prime(m, k, &mut bp), EwStatus::Ok);
        }
        assert_eq!((b, bp), (want, want), "k = {k}");
    }
    let mut qb = 0i64;
    assert_eq!(unsafe { ew_qb(m, 0, -1, &mut qb) }, EwStatus::Ok);
    assert_eq!(qb, 2);
    unsafe { ew_model_free(m) };
}

#[test]
fn equivariant_homology_of_free_circle() {
    let m = corpus_model("circle_antipodal");
    let dims: Vec<u64> = (-2..=2)
        .map(|k| {
            let mut h = 0;
            assert_eq!(unsafe { ew_equivariant_homology_dim(m, k, &mut h) }, EwStatus::Ok);
            h
        })
        .collect();
    assert_eq!(dims, [0, 0, 1, 1, 0]);
    unsafe { ew_model_free(m) };
}

#[test]
fn smith_check_reports_witness() {
    let m = corpus_model("smith_violation");
    let (mut exact, mut a, mut q) = (true, 0i64, 0i64);
    assert_eq!(unsafe { ew_smith_check(m, &mut exact, &mut a, &mut q) }, EwStatus::Ok);
    assert!(!exact);
    assert_eq!((a, q), (-2, 0));
    unsafe { ew_model_free(m) };

    let m = corpus_model("circle_reflection");
    assert_eq!(unsafe { ew_smith_check(m, &mut exact, &mut a, &mut q) }, EwStatus::Ok);
    assert!(exact);
    unsafe { ew_model_free(m) };
}

#[test]
fn json_round_trip_through_handle() {
    let text = CString::new(r#"{"schema_version":1,"name":"pt","tag":"x","cells":{"0":["p"]},"provenance":"single point","expected":[]}"#).unwrap();
    let mut m = ptr::null_mut();
    let s = unsafe { ew_model_from_json(text.as_ptr(), &mut m) };
    if s != EwStatus::Ok {
        panic!("{s:?}: {}", last_error());
    }
    let mut h = 0;
    assert_eq!(unsafe { ew_equivariant_homology_dim(m, 0, &mut h) }, EwStatus::Ok);
    assert_eq!(h, 1);
    unsafe { ew_model_free(m) };
}

#[test]
fn errors_set_codes_and_messages() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ew_model_from_corpus(ptr::null(), &mut m) }, EwStatus::NullPointer);

    let bad = CString::new("bad_boundary").unwrap();
    assert_eq!(unsafe { ew_model_from_corpus(bad.as_ptr(), &mut m) }, EwStatus::InvalidModel);
    assert!(last_error().contains("∂∘∂ ≠ 0"), "{}", last_error());
    assert!(m.is_null());

    let junk = CString::new("{").unwrap();
    assert_eq!(unsafe { ew_model_from_json(junk.as_ptr(), &mut m) }, EwStatus::Parse);

    let missing = CString::new("/nonexistent/model.json").unwrap();
    assert_eq!(unsafe { ew_model_from_path(missing.as_ptr(), &mut m) }, EwStatus::Io);

    let mut d = 0i64;
    assert_eq!(unsafe { ew_model_dimension(ptr::null(), &mut d) }, EwStatus::NullPointer);
    let ok = corpus_model("point_trivial");
    assert_eq!(unsafe { ew_model_dimension(ok, ptr::null_mut()) }, EwStatus::NullPointer);
    unsafe {
        ew_model_free(ok);
        ew_model_free(ptr::null_mut());
    }
}

#[test]
fn path_loading_matches_corpus() {
    let path = CString::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/sphere_antipodal.json")).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { ew_model_from_path(path.as_ptr(), &mut m) }, EwStatus::Ok);
    let mut b = 0i64;
    assert_eq!(unsafe { ew_b_prime(m, 2, &mut b) }, EwStatus::Ok);
    assert_eq!(b, 1);
    unsafe { ew_model_free(m) };
}

#[test]
fn whole_corpus_verifies() {
    let (mut total, mut failed) = (0u64, 0u64);
    assert_eq!(unsafe { ew_verify_corpus(&mut total, &mut failed) }, EwStatus::Ok);
    assert!(total > 100);
    assert_eq!(failed, 0);
}

#[test]
fn header_declares_every_export() {
    let h = include_str!("../include/equiweight.h");
    for f in [
        "ew_last_error", "ew_version", "ew_model_from_json", "ew_model_from_path", "ew_model_from_corpus", "ew_model_free",
        "ew_model_dimension", "ew_model_group_order", "ew_equivariant_homology_dim", "ew_bkg", "ew_qb", "ew_b_prime",
        "ew_smith_check", "ew_verify_corpus",
    ] {
        assert!(h.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(h.contains("typedef struct EwModel EwModel;"));
    let v = unsafe { CStr::from_ptr(ew_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
