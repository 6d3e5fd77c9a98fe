use std::ffi::{CStr, CString};
use std::ptr;

use besselmoments_ffi::*;

fn empty() -> BmResult {
    BmResult {
        value: ptr::null_mut(),
        error_bound: ptr::null_mut(),
        exact: ptr::null_mut(),
        approx: 0.0,
        pass: -1,
    }
}

fn text(p: *const std::ffi::c_char) -> String {
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

struct Ctx(*mut BmContext);

impl Ctx {
    fn new(digits: u32) -> Self {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { bm_context_new(digits, 0, &mut h) }, BmStatus::Ok);
        assert!(!h.is_null());
        Ctx(h)
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { bm_context_free(self.0) };
    }
}

#[test]
fn moment_round_trip() {
    let ctx = Ctx::new(40);
    let mut r = empty();
    let st = unsafe { bm_moment(ctx.0, 0, 2, 0, 0, &mut r) };
    assert_eq!(st, BmStatus::Ok);
    assert!(text(r.value).starts_with("2.467401100272339654708622749969"));
    assert!((r.approx - std::f64::consts::PI.powi(2) / 4.0).abs() < 1e-15);
    assert!(r.exact.is_null());
    assert_eq!(r.pass, -1);
    unsafe { bm_result_free(&mut r) };
    assert!(r.value.is_null() && r.error_bound.is_null());
}

#[test]
fn checks_report_pass() {
    let ctx = Ctx::new(30);
    let mut r = empty();
    assert_eq!(unsafe { bm_verify_sum_rule(ctx.0, BmFamily::Z, 3, 1, 0, &mut r) }, BmStatus::Ok);
    assert_eq!(r.pass, 1);
    unsafe { bm_result_free(&mut r) };

    assert_eq!(unsafe { bm_verify_sum_rule(ctx.0, BmFamily::Y, 4, 1, 1, &mut r) }, BmStatus::Ok);
    assert_eq!(r.pass, 1);
    unsafe { bm_result_free(&mut r) };

    assert_eq!(unsafe { bm_verify_crandall(ctx.0, 4, &mut r) }, BmStatus::Ok);
    assert_eq!((text(r.exact), r.pass), ("15".to_string(), 1));
    unsafe { bm_result_free(&mut r) };

    let f = CString::new("iota_kappa_sgn").unwrap();
    let x = CString::new("-3/2").unwrap();
    assert_eq!(unsafe { bm_hilbert_pv(ctx.0, f.as_ptr(), x.as_ptr(), &mut r) }, BmStatus::Ok);
    assert_eq!(r.pass, 1);
    unsafe { bm_result_free(&mut r) };
}

#[test]
fn sequences_as_strings() {
    let get = |name: &str, m: u32, n: u32| {
        let name = CString::new(name).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(unsafe { bm_sequence(name.as_ptr(), m, n, &mut out) }, BmStatus::Ok);
        let s = text(out);
        unsafe { bm_string_free(out) };
        s
    };
    assert_eq!(get("domb", 0, 3), "256");
    assert_eq!(get("crandall", 0, 5), "302");
    assert_eq!(get("beta_m", 1, 2), "1/2");
    assert_eq!(get("br", 3, 3), "2784");
}

#[test]
fn errors_set_status_and_message() {
    let ctx = Ctx::new(20);
    let mut r = empty();
    assert_eq!(unsafe { bm_moment(ctx.0, 3, 2, 0, 0, &mut r) }, BmStatus::Divergent);
    assert!(text(bm_last_error()).contains("diverges"));

    assert_eq!(unsafe { bm_moment(ptr::null(), 0, 2, 0, 0, &mut r) }, BmStatus::NullPointer);
    assert_eq!(unsafe { bm_moment(ctx.0, 0, 2, 0, 0, ptr::null_mut()) }, BmStatus::NullPointer);

    let f = CString::new("kappa_sq").unwrap();
    let x = CString::new("0").unwrap();
    assert_eq!(unsafe { bm_hilbert_pv(ctx.0, f.as_ptr(), x.as_ptr(), &mut r) }, BmStatus::Domain);
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { bm_hilbert_pv(ctx.0, bad.as_ptr(), x.as_ptr(), &mut r) }, BmStatus::InvalidInput);
    assert_eq!(unsafe { bm_verify_sum_rule(ctx.0, BmFamily::Y, 2, 1, 0, &mut r) }, BmStatus::InvalidInput);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { bm_sequence(bad.as_ptr(), 1, 1, &mut out) }, BmStatus::InvalidInput);
    assert!(out.is_null());

    let mut h = ptr::null_mut();
    assert_eq!(unsafe { bm_context_new(3, 0, &mut h) }, BmStatus::InvalidInput);
    assert!(h.is_null());

    // a successful call clears the message
    assert_eq!(unsafe { bm_moment(ctx.0, 0, 2, 0, 0, &mut r) }, BmStatus::Ok);
    assert!(bm_last_error().is_null());
    unsafe { bm_result_free(&mut r) };
}

#[test]
fn low_refinement_cap_is_a_precision_failure() {
    let ctx = Ctx::new(50);
    assert_eq!(unsafe { bm_context_set_max_level(ctx.0, 2) }, BmStatus::Ok);
    let mut r = empty();
    assert_eq!(unsafe { bm_moment(ctx.0, 0, 2, 0, 0, &mut r) }, BmStatus::Precision);
}

#[test]
fn freeing_null_is_a_no_op() {
    unsafe {
        bm_context_free(ptr::null_mut());
        bm_string_free(ptr::null_mut());
        bm_result_free(ptr::null_mut());
    }
    assert_eq!(text(bm_version()), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let header = include_str!("../include/besselmoments.h");
    for name in [
        "bm_context_new",
        "bm_context_free",
        "bm_moment",
        "bm_verify_sum_rule",
        "bm_verify_crandall",
        "bm_hilbert_pv",
        "bm_sequence",
        "bm_last_error",
        "bm_string_free",
        "bm_result_free",
        "typedef struct BmContext BmContext",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
