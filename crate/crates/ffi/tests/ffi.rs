use std::ffi::{CStr, CString};
use std::ptr;

use padic_sos_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = ps_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take_json(s: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!s.is_null());
    let v = serde_json::from_slice(CStr::from_ptr(s).to_bytes()).unwrap();
    ps_string_free(s);
    v
}

fn params(p: u64, k: u32, m: u32, theta: &str, precision: u32) -> *mut PsParams {
    let mut out = ptr::null_mut();
    let theta = c(theta);
    assert_eq!(
        unsafe { ps_params_new(p, k, m, theta.as_ptr(), precision, &mut out) },
        PsStatus::Ok
    );
    out
}

#[test]
fn certify_theta_28() {
    unsafe {
        let params = params(3, 2, 2, "28", 32);
        let mut cert = ptr::null_mut();
        assert_eq!(ps_certify(params, &mut cert), PsStatus::Ok);
        let mut verdict = PsVerdict::Inconclusive;
        assert_eq!(ps_certificate_verdict(cert, &mut verdict), PsStatus::Ok);
        assert_eq!(verdict, PsVerdict::TransitionCertified);
        let mut count = 0usize;
        assert_eq!(
            ps_certificate_solution_count(cert, &mut count),
            PsStatus::Ok
        );
        assert!(count >= 2);

        let mut z0 = ptr::null_mut();
        assert_eq!(ps_certificate_component(cert, 0, 2, &mut z0), PsStatus::Ok);
        let mut r = 0u64;
        assert_eq!(ps_padic_residue(z0, 4, &mut r), PsStatus::Ok);
        assert_eq!(r, 1, "last component is normalized to one");
        ps_padic_free(z0);
        let mut missing = ptr::null_mut();
        assert_eq!(
            ps_certificate_component(cert, count, 0, &mut missing),
            PsStatus::InvalidArgument
        );

        let json = take_json(ps_certificate_to_json(cert));
        assert_eq!(json["verdict"], "transition_certified");
        ps_certificate_free(cert);
        ps_params_free(params);
    }
}

#[test]
fn arithmetic_and_functions() {
    unsafe {
        let expr = c("sqrt(7)");
        let mut r = ptr::null_mut();
        assert_eq!(
            ps_padic_from_literal(3, expr.as_ptr(), 16, &mut r),
            PsStatus::Ok
        );
        let mut sq = ptr::null_mut();
        assert_eq!(ps_padic_binary(PsOp::Mul, r, r, &mut sq), PsStatus::Ok);
        let mut seven = ptr::null_mut();
        assert_eq!(ps_padic_from_i64(3, 7, 16, &mut seven), PsStatus::Ok);
        let mut diff = ptr::null_mut();
        assert_eq!(
            ps_padic_binary(PsOp::Sub, sq, seven, &mut diff),
            PsStatus::Ok
        );
        let mut v = 0i64;
        assert_eq!(ps_padic_valuation(diff, &mut v), PsStatus::Ok);
        assert!(v >= 16);

        let mut three = ptr::null_mut();
        assert_eq!(ps_padic_from_i64(3, 3, 16, &mut three), PsStatus::Ok);
        let mut e = ptr::null_mut();
        assert_eq!(ps_padic_apply(PsFunction::Exp, three, &mut e), PsStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(ps_padic_apply(PsFunction::Log, e, &mut back), PsStatus::Ok);
        let mut d = ptr::null_mut();
        assert_eq!(
            ps_padic_binary(PsOp::Sub, back, three, &mut d),
            PsStatus::Ok
        );
        assert_eq!(ps_padic_valuation(d, &mut v), PsStatus::Ok);
        assert!(v >= 14, "log(exp(3)) - 3 has valuation {v}");

        let json = take_json(ps_padic_to_json(seven));
        assert_eq!(json["prime"], 3);

        let mut zero = ptr::null_mut();
        assert_eq!(ps_padic_from_i64(3, 0, 16, &mut zero), PsStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(
            ps_padic_binary(PsOp::Div, seven, zero, &mut q),
            PsStatus::InvalidArgument
        );
        assert!(q.is_null());
        assert!(!last_error().is_empty());

        for x in [r, sq, seven, diff, three, e, back, d, zero] {
            ps_padic_free(x);
        }
    }
}

#[test]
fn invalid_inputs_report_errors() {
    unsafe {
        let mut out = ptr::null_mut();
        let two = c("2");
        assert_eq!(
            ps_params_new(3, 2, 2, two.as_ptr(), 16, &mut out),
            PsStatus::InvalidArgument
        );
        assert!(last_error().contains("E_3"), "{}", last_error());
        assert_eq!(
            ps_params_new(4, 2, 2, two.as_ptr(), 16, &mut out),
            PsStatus::InvalidArgument
        );
        assert!(last_error().contains("prime"));
        assert_eq!(
            ps_params_new(3, 2, 2, ptr::null(), 16, &mut out),
            PsStatus::NullPointer
        );
        assert_eq!(
            ps_certify(ptr::null(), &mut ptr::null_mut()),
            PsStatus::NullPointer
        );
        assert!(last_error().contains("params"));

        let bad = [0xffu8, 0];
        assert_eq!(
            ps_padic_from_literal(3, bad.as_ptr().cast(), 8, &mut ptr::null_mut()),
            PsStatus::InvalidUtf8
        );
        assert!(ps_padic_to_json(ptr::null()).is_null());
        ps_string_free(ptr::null_mut());
        ps_padic_free(ptr::null_mut());
        ps_params_free(ptr::null_mut());
        ps_certificate_free(ptr::null_mut());
    }
}

#[test]
fn coupling_constructor() {
    unsafe {
        let j = c("3");
        let mut params = ptr::null_mut();
        assert_eq!(
            ps_params_from_coupling(3, 2, 1, j.as_ptr(), 20, &mut params),
            PsStatus::Ok
        );
        let mut cert = ptr::null_mut();
        assert_eq!(ps_certify(params, &mut cert), PsStatus::Ok);
        let mut verdict = PsVerdict::Inconclusive;
        ps_certificate_verdict(cert, &mut verdict);
        assert_eq!(verdict, PsVerdict::UniqueNoTransition);
        ps_certificate_free(cert);
        ps_params_free(params);
    }
}

#[test]
fn measures_through_the_c_interface() {
    unsafe {
        let params = params(3, 2, 2, "28", 24);
        let mut passed = false;
        let mut residual = 0i64;
        assert_eq!(
            ps_check_compatibility(params, 2, 1 << 20, &mut passed, &mut residual),
            PsStatus::Ok
        );
        assert!(passed);
        assert!(residual >= 16);

        let levels = [1u32, 2];
        let mut json = ptr::null_mut();
        assert_eq!(
            ps_classify_boundedness(params, levels.as_ptr(), 2, 1 << 20, &mut json),
            PsStatus::Ok
        );
        let report = take_json(json);
        assert_eq!(report["class"], "unbounded");

        assert_eq!(
            ps_check_compatibility(params, 3, 10, &mut passed, &mut residual),
            PsStatus::Limit
        );
        assert!(last_error().contains("cap"));
        ps_params_free(params);
    }
}

#[test]
fn header_is_generated() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/padic_sos.h"))
            .unwrap();
    for name in [
        "ps_certify",
        "ps_last_error",
        "PS_STATUS_LIMIT",
        "typedef struct PsPadic PsPadic",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
