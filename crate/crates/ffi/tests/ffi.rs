use leaf_ldp_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn last_error() -> String {
    let p = ldp_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn model(preset: &str) -> *mut LdpModel {
    let s = CString::new(preset).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { ldp_model_parse(s.as_ptr(), &mut m) },
        LdpStatus::Ok
    );
    assert!(!m.is_null());
    m
}

#[test]
fn model_round_trip() {
    let m = model("pa:beta=1/2");
    let (mut alpha, mut k0) = (0.0, 0u64);
    unsafe {
        assert_eq!(ldp_model_alpha(m, &mut alpha), LdpStatus::Ok);
        assert_eq!(ldp_model_k0(m, &mut k0), LdpStatus::Ok);
    }
    assert!((alpha - 5.0 / 3.0).abs() < 1e-15);
    assert_eq!(k0, 2);
    let mut m1 = ptr::null_mut();
    unsafe {
        assert_eq!(ldp_model_with_k0(m, 1, &mut m1), LdpStatus::Ok);
        assert_eq!(ldp_model_k0(m1, &mut k0), LdpStatus::Ok);
        ldp_model_free(m1);
        ldp_model_free(m);
    }
    assert_eq!(k0, 1);
    assert!(ldp_last_error().is_null());
}

#[test]
fn errors_are_reported() {
    let bad = CString::new("frobnicate").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { ldp_model_parse(bad.as_ptr(), &mut m) },
        LdpStatus::InvalidModel
    );
    assert!(m.is_null());
    assert!(last_error().contains("frobnicate"));
    assert_eq!(
        unsafe { ldp_model_parse(ptr::null(), &mut m) },
        LdpStatus::NullPointer
    );
    let good = CString::new("yule").unwrap();
    assert_eq!(
        unsafe { ldp_model_parse(good.as_ptr(), ptr::null_mut()) },
        LdpStatus::NullPointer
    );
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { ldp_pressure_new(-1.0, LdpMethod::Auto, &mut p) },
        LdpStatus::Domain
    );
    assert_eq!(
        unsafe { ldp_euler_cost(0.5, 0.2, 1e-10, &mut 0.0) },
        LdpStatus::Domain
    );
    unsafe {
        ldp_model_free(ptr::null_mut());
        ldp_pmf_free(ptr::null_mut());
        ldp_pressure_free(ptr::null_mut());
    }
}

#[test]
fn pmf_queries() {
    let m = model("plane_oriented");
    let mut p = ptr::null_mut();
    let (mut lo, mut hi, mut mean, mut lp, mut tail) = (0u64, 0u64, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(ldp_pmf_new(m, 4, &mut p), LdpStatus::Ok);
        assert_eq!(ldp_pmf_support(p, &mut lo, &mut hi), LdpStatus::Ok);
        assert_eq!(ldp_pmf_mean(p, &mut mean), LdpStatus::Ok);
        assert_eq!(ldp_pmf_log_prob(p, 3, &mut lp), LdpStatus::Ok);
        assert_eq!(ldp_pmf_tail_log_prob(p, 0.75, &mut tail), LdpStatus::Ok);
        assert_eq!(ldp_pmf_tail_log_prob(p, 2.0, &mut tail), LdpStatus::Domain);
        let mut mgf = 1.0;
        assert_eq!(ldp_pmf_log_mgf(p, 0.0, &mut mgf), LdpStatus::Ok);
        assert_eq!(mgf, 0.0);
        ldp_pmf_free(p);
        ldp_model_free(m);
    }
    // Plane-oriented trees on 4 vertices: 1, 8 and 6 of the 15 have 1, 2 and 3 leaves.
    assert_eq!((lo, hi), (1, 3));
    assert!((lp.exp() - 6.0 / 15.0).abs() < 1e-14);
    assert!((mean - 35.0 / 15.0).abs() < 1e-14);
}

#[test]
fn pressure_rate_and_paths() {
    let mut p = ptr::null_mut();
    let (mut v, mut d1, mut d2, mut ls, mut rate) = (0.0, 0.0, 0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(
            ldp_pressure_new(2.0, LdpMethod::Auto, &mut p),
            LdpStatus::Ok
        );
        assert_eq!(
            ldp_pressure_eval(p, 0.0, &mut v, &mut d1, &mut d2),
            LdpStatus::Ok
        );
        assert_eq!(
            ldp_pressure_eval(p, 1.0, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()),
            LdpStatus::Ok
        );
        assert_eq!(ldp_rate(p, 1.0, &mut ls, &mut rate), LdpStatus::Ok);
        ldp_pressure_free(p);
    }
    assert_eq!((v, d1, d2), (0.0, 2.0 / 3.0, 1.0 / 9.0));
    assert!(ls.is_infinite());
    assert!((rate - 2f64.ln()).abs() < 1e-15);
    let mut cost = 0.0;
    assert_eq!(
        unsafe { ldp_euler_cost(2.0, 0.5, 1e-10, &mut cost) },
        LdpStatus::Ok
    );
    let mut q = ptr::null_mut();
    unsafe {
        assert_eq!(
            ldp_pressure_new(2.0, LdpMethod::Quadrature, &mut q),
            LdpStatus::Ok
        );
        assert_eq!(ldp_rate(q, 0.5, ptr::null_mut(), &mut rate), LdpStatus::Ok);
        ldp_pressure_free(q);
    }
    assert!((cost - rate).abs() < 1e-6);
}

#[test]
fn simulation_is_seeded() {
    let m = model("uniform");
    let (mut a, mut b, mut c) = (0u64, 0u64, 0u64);
    unsafe {
        assert_eq!(ldp_simulate_final(m, 1000, 7, 0, &mut a), LdpStatus::Ok);
        assert_eq!(ldp_simulate_final(m, 1000, 7, 0, &mut b), LdpStatus::Ok);
        assert_eq!(ldp_simulate_final(m, 1000, 7, 1, &mut c), LdpStatus::Ok);
        assert_eq!(
            ldp_simulate_final(m, 0, 7, 0, &mut c),
            LdpStatus::InvalidArgument
        );
        ldp_model_free(m);
    }
    assert_eq!(a, b);
    assert!((1..=1000).contains(&a));
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/leaf_ldp.h"))
        .unwrap();
    for name in [
        "typedef struct LdpModel LdpModel;",
        "LDP_STATUS_NULL_POINTER = 1",
        "ldp_model_parse(const char *preset, struct LdpModel **out)",
        "ldp_pressure_eval",
        "ldp_last_error(void)",
    ] {
        assert!(h.contains(name), "missing {name}");
    }
    let v = unsafe { CStr::from_ptr(ldp_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
