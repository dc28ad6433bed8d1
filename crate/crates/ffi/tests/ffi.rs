use std::ffi::{CStr, CString};
use std::ptr;

use jcgrav_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as std::ffi::c_char; 512];
    unsafe { jcg_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn preset(name: &str) -> *mut JcgScenario {
    let name = CString::new(name).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { jcg_scenario_from_preset(name.as_ptr(), &mut s) },
        JcgStatus::Ok
    );
    assert!(!s.is_null());
    s
}

fn read_series(r: *const JcgResult, kind: JcgObservable) -> Vec<f64> {
    let mut len = 0;
    assert_eq!(
        unsafe { jcg_result_observable(r, kind as i32, ptr::null_mut(), 0, &mut len) },
        JcgStatus::Ok
    );
    let mut buf = vec![0.0; len];
    assert_eq!(
        unsafe { jcg_result_observable(r, kind as i32, buf.as_mut_ptr(), buf.len(), &mut len) },
        JcgStatus::Ok
    );
    buf
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(jcg_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn preset_compute_and_read_back() {
    let s = preset("fig1a");
    assert_eq!(unsafe { jcg_scenario_set_steps(s, 200) }, JcgStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jcg_scenario_compute(s, &mut r) }, JcgStatus::Ok);

    let mut len = 0;
    assert_eq!(
        unsafe { jcg_result_time_grid(r, ptr::null_mut(), 0, &mut len) },
        JcgStatus::Ok
    );
    assert_eq!(len, 201);

    let inversion = read_series(r, JcgObservable::Inversion);
    assert_eq!(inversion.len(), 201);
    // c_e = c_g = 1/√2 starts with zero inversion
    assert!(inversion[0].abs() < 1e-12);
    let q = read_series(r, JcgObservable::MandelQ);
    assert!(q[0].abs() < 1e-9);

    let mut drift = f64::NAN;
    assert_eq!(unsafe { jcg_result_norm_drift(r, &mut drift) }, JcgStatus::Ok);
    assert!(drift < 1e-8);

    let mut n = 0;
    assert_eq!(
        unsafe { jcg_result_photon_distribution(r, 0, ptr::null_mut(), 0, &mut n) },
        JcgStatus::Ok
    );
    let mut p = vec![0.0; n];
    assert_eq!(
        unsafe { jcg_result_photon_distribution(r, 0, p.as_mut_ptr(), n, &mut n) },
        JcgStatus::Ok
    );
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);

    let mut jl = 0;
    assert_eq!(
        unsafe { jcg_result_summary_json(r, ptr::null_mut(), 0, &mut jl) },
        JcgStatus::Ok
    );
    let mut jbuf = vec![0 as std::ffi::c_char; jl];
    assert_eq!(
        unsafe { jcg_result_summary_json(r, jbuf.as_mut_ptr(), jl, &mut jl) },
        JcgStatus::Ok
    );
    let json = unsafe { CStr::from_ptr(jbuf.as_ptr()) }.to_str().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["grid_points"], 201);

    unsafe {
        jcg_result_free(r);
        jcg_scenario_free(s);
    }
}

#[test]
fn buffer_too_small_reports_requirement() {
    let s = preset("fig2b");
    unsafe { jcg_scenario_set_steps(s, 10) };
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jcg_scenario_compute(s, &mut r) }, JcgStatus::Ok);
    let mut buf = [0.0; 4];
    let mut len = 0;
    let st = unsafe { jcg_result_time_grid(r, buf.as_mut_ptr(), buf.len(), &mut len) };
    assert_eq!(st, JcgStatus::BufferTooSmall);
    assert_eq!(len, 11);
    assert_eq!(buf, [0.0; 4]);
    assert!(last_error().contains("11 required"));
    unsafe {
        jcg_result_free(r);
        jcg_scenario_free(s);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut s = ptr::null_mut();
    let bad = CString::new("fig9z").unwrap();
    assert_eq!(
        unsafe { jcg_scenario_from_preset(bad.as_ptr(), &mut s) },
        JcgStatus::InvalidArgument
    );
    assert!(s.is_null());

    assert_eq!(
        unsafe { jcg_scenario_from_preset(ptr::null(), &mut s) },
        JcgStatus::NullPointer
    );

    let cfg = CString::new("steps = 10\nlambda = nope\n").unwrap();
    assert_eq!(
        unsafe { jcg_scenario_from_config(cfg.as_ptr(), &mut s) },
        JcgStatus::InvalidArgument
    );
    assert!(last_error().contains("line 2"));

    // analytic engine without gravity is refused; with gravity it overflows
    let s = preset("fig1b");
    let analytic = CString::new("analytic").unwrap();
    assert_eq!(unsafe { jcg_scenario_set_engine(s, analytic.as_ptr()) }, JcgStatus::Ok);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jcg_scenario_compute(s, &mut r) }, JcgStatus::InvalidArgument);
    assert_eq!(
        unsafe { jcg_scenario_set_theta(s, std::f64::consts::FRAC_PI_2) },
        JcgStatus::Ok
    );
    unsafe { jcg_scenario_set_steps(s, 4) };
    assert_eq!(unsafe { jcg_scenario_compute(s, &mut r) }, JcgStatus::Numeric);
    assert!(r.is_null());

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f"), "").unwrap();
    let out = CString::new(dir.path().join("f/sub").to_str().unwrap()).unwrap();
    let ode = CString::new("ode").unwrap();
    unsafe {
        jcg_scenario_set_engine(s, ode.as_ptr());
        jcg_scenario_set_output_dir(s, out.as_ptr());
    }
    assert_eq!(unsafe { jcg_scenario_run(s, &mut r) }, JcgStatus::Io);

    assert_eq!(unsafe { jcg_scenario_set_steps(s, 0) }, JcgStatus::InvalidArgument);
    assert_eq!(
        unsafe { jcg_scenario_set_tmax_scaled(s, f64::NAN) },
        JcgStatus::InvalidArgument
    );
    unsafe { jcg_scenario_free(s) };
}

#[test]
fn unknown_observable_is_rejected() {
    let s = preset("fig1b");
    unsafe { jcg_scenario_set_steps(s, 4) };
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jcg_scenario_compute(s, &mut r) }, JcgStatus::Ok);
    let mut len = 0;
    assert_eq!(
        unsafe { jcg_result_observable(r, 42, ptr::null_mut(), 0, &mut len) },
        JcgStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { jcg_result_photon_distribution(r, 5, ptr::null_mut(), 0, &mut len) },
        JcgStatus::InvalidArgument
    );
    unsafe {
        jcg_result_free(r);
        jcg_scenario_free(s);
    }
}

#[test]
fn run_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = preset("fig3a");
    let out = CString::new(dir.path().to_str().unwrap()).unwrap();
    unsafe {
        jcg_scenario_set_output_dir(s, out.as_ptr());
        jcg_scenario_set_steps(s, 100);
    }
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { jcg_scenario_run(s, &mut r) }, JcgStatus::Ok);
    assert!(dir.path().join("photon_distribution.csv").exists());
    assert!(dir.path().join("summary.json").exists());
    unsafe {
        jcg_result_free(r);
        jcg_scenario_free(s);
    }
}

#[test]
fn estimator_matches_closed_form() {
    let s = preset("fig1b");
    let zero = CString::new("delta0 = 0\ntheta = 0\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { jcg_scenario_from_config(zero.as_ptr(), &mut cfg) },
        JcgStatus::Ok
    );
    let (mut tc, mut tr) = (0.0, 0.0);
    assert_eq!(
        unsafe { jcg_scenario_collapse_revival(cfg, 4.0, 1, &mut tc, &mut tr) },
        JcgStatus::Ok
    );
    assert!((tc - 1.0 / (7f64.sqrt() - 3f64.sqrt())).abs() < 1e-9);
    assert!((tr - 2.0 * std::f64::consts::PI / (5f64.sqrt() - 2.0)).abs() < 1e-8);
    assert_eq!(
        unsafe { jcg_scenario_collapse_revival(cfg, 0.0, 1, &mut tc, &mut tr) },
        JcgStatus::InvalidArgument
    );
    unsafe {
        jcg_scenario_free(cfg);
        jcg_scenario_free(s);
    }
}

#[test]
fn special_functions() {
    let c = |re, im| JcgComplex { re, im };
    let mut out = c(0.0, 0.0);
    assert_eq!(unsafe { jcg_gamma(c(0.5, 0.0), &mut out) }, JcgStatus::Ok);
    assert!((out.re - std::f64::consts::PI.sqrt()).abs() < 1e-13 && out.im.abs() < 1e-15);
    assert_eq!(unsafe { jcg_gamma(c(-2.0, 0.0), &mut out) }, JcgStatus::InvalidArgument);

    assert_eq!(
        unsafe { jcg_kummer_1f1(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 2.0), &mut out) },
        JcgStatus::Ok
    );
    let e = num_complex::Complex64::new(1.0, 2.0).exp();
    assert!((out.re - e.re).abs() < 1e-12 && (out.im - e.im).abs() < 1e-12);

    assert_eq!(
        unsafe { jcg_hermite(c(2.0, 0.0), c(1.0, 1.0), &mut out) },
        JcgStatus::Ok
    );
    assert!((out.re + 2.0).abs() < 1e-12 && (out.im - 8.0).abs() < 1e-12);
    assert_eq!(
        unsafe { jcg_hermite(c(2.0, 0.0), c(1.0, 1.0), ptr::null_mut()) },
        JcgStatus::NullPointer
    );
}

#[test]
fn free_accepts_null() {
    unsafe {
        jcg_scenario_free(ptr::null_mut());
        jcg_result_free(ptr::null_mut());
    }
}
