//! C interface to `jcgrav`.
//!
//! Conventions:
//! - every fallible call returns a [`JcgStatus`]; on failure a message is kept
//!   per thread and can be read with [`jcg_last_error`];
//! - handles are opaque and owned by the caller, released with the matching
//!   `_free` function (passing NULL is a no-op);
//! - array outputs take `(buf, cap, len)`: `*len` always receives the required
//!   element count, a NULL `buf` is a size query, and a `cap` smaller than the
//!   requirement yields `JCG_STATUS_BUFFER_TOO_SMALL` without writing.
//!   String outputs count the terminating NUL.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use num_complex::Complex64;

use jcgrav::model::MomentumDistribution;
use jcgrav::observables::{
    atomic_inversion, collapse_revival_times, dipole_moment, mandel_q, momentum_diffusion, photon_distribution_at,
    quadrature_squeezing,
};
use jcgrav::scenario::{compute_scenario, run_scenario, Engine, Preset, ScenarioConfig, ScenarioOutput};
use jcgrav::special::{complex_gamma, hermite_complex, kummer_1f1, SeriesControl};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcgStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad parameter, configuration or argument (CLI exit code 2).
    InvalidArgument = 2,
    /// Numerical failure: series, integrator or degenerate estimate (CLI exit code 3).
    Numeric = 3,
    /// File system error (CLI exit code 4).
    Io = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcgComplex {
    pub re: f64,
    pub im: f64,
}

impl From<JcgComplex> for Complex64 {
    fn from(z: JcgComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for JcgComplex {
    fn from(z: Complex64) -> Self {
        JcgComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcgObservable {
    Dipole = 0,
    Inversion = 1,
    MandelQ = 2,
    S1 = 3,
    S2 = 4,
    DeltaP = 5,
}

impl JcgObservable {
    const ALL: [JcgObservable; 6] = [
        JcgObservable::Dipole,
        JcgObservable::Inversion,
        JcgObservable::MandelQ,
        JcgObservable::S1,
        JcgObservable::S2,
        JcgObservable::DeltaP,
    ];

    fn from_raw(v: i32) -> Option<Self> {
        Self::ALL.into_iter().find(|k| *k as i32 == v)
    }
}

/// Scenario configuration handle.
pub struct JcgScenario {
    cfg: ScenarioConfig,
}

/// Result of one evolution: trajectory plus the derived outputs.
pub struct JcgResult {
    out: ScenarioOutput,
    dipole_mag: f64,
    dipole_phase: f64,
}

enum Fail {
    Null(&'static str),
    Arg(String),
    Core(jcgrav::Error),
    Buffer { needed: usize, cap: usize },
}

impl From<jcgrav::Error> for Fail {
    fn from(e: jcgrav::Error) -> Self {
        Fail::Core(e)
    }
}

impl From<jcgrav::SpecialFnError> for Fail {
    fn from(e: jcgrav::SpecialFnError) -> Self {
        Fail::Core(e.into())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> JcgStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => return JcgStatus::Ok,
        Ok(Err(Fail::Null(what))) => (JcgStatus::NullPointer, format!("null pointer: {what}")),
        Ok(Err(Fail::Arg(msg))) => (JcgStatus::InvalidArgument, msg),
        Ok(Err(Fail::Buffer { needed, cap })) => (
            JcgStatus::BufferTooSmall,
            format!("buffer holds {cap} elements, {needed} required"),
        ),
        Ok(Err(Fail::Core(e))) => {
            let status = match e.exit_code() {
                2 => JcgStatus::InvalidArgument,
                4 => JcgStatus::Io,
                _ => JcgStatus::Numeric,
            };
            (status, e.to_string())
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            (JcgStatus::Panic, format!("internal panic: {msg}"))
        }
    };
    set_error(msg);
    status
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Arg(format!("{what} is not valid UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn mut_arg<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn copy_out<T: Copy>(src: &[T], buf: *mut T, cap: usize, len: *mut usize) -> Result<(), Fail> {
    *mut_arg(len, "len")? = src.len();
    if buf.is_null() {
        return Ok(());
    }
    if cap < src.len() {
        return Err(Fail::Buffer { needed: src.len(), cap });
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

unsafe fn copy_str(s: &str, buf: *mut c_char, cap: usize, len: *mut usize) -> Result<(), Fail> {
    let mut bytes: Vec<c_char> = s.bytes().map(|b| b as c_char).collect();
    bytes.push(0);
    copy_out(&bytes, buf, cap, len)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn jcg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy the calling thread's last error message into `buf` (truncated to
/// `cap` bytes, always NUL-terminated when `cap > 0`). Returns the size
/// needed for the full message including the NUL.
///
/// # Safety
/// `buf` must be NULL or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn jcg_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// New scenario from a preset name (`fig1a` … `fig5b`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_from_preset(name: *const c_char, out: *mut *mut JcgScenario) -> JcgStatus {
    guard(|| {
        let out = mut_arg(out, "out")?;
        let preset: Preset = str_arg(name, "name")?.parse().map_err(Fail::Arg)?;
        *out = Box::into_raw(Box::new(JcgScenario {
            cfg: ScenarioConfig::preset(preset),
        }));
        Ok(())
    })
}

/// New scenario from `key=value` configuration text, as read by `jcgrav run`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_from_config(text: *const c_char, out: *mut *mut JcgScenario) -> JcgStatus {
    guard(|| {
        let out = mut_arg(out, "out")?;
        let cfg = ScenarioConfig::parse(str_arg(text, "text")?)?;
        *out = Box::into_raw(Box::new(JcgScenario { cfg }));
        Ok(())
    })
}

/// # Safety
/// `scenario` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_free(scenario: *mut JcgScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Engine: `ode`, `analytic` or `both`.
///
/// # Safety
/// `scenario` must be a live handle; `engine` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_set_engine(scenario: *mut JcgScenario, engine: *const c_char) -> JcgStatus {
    guard(|| {
        let s = mut_arg(scenario, "scenario")?;
        let engine: Engine = str_arg(engine, "engine")?.parse().map_err(Fail::Arg)?;
        s.cfg.engine = engine;
        Ok(())
    })
}

/// Number of time steps (the grid has `steps + 1` points).
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_set_steps(scenario: *mut JcgScenario, steps: usize) -> JcgStatus {
    guard(|| {
        if steps == 0 {
            return Err(Fail::Arg("steps must be >= 1".into()));
        }
        mut_arg(scenario, "scenario")?.cfg.n_time_steps = steps;
        Ok(())
    })
}

/// End of the time grid in units of λt.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_set_tmax_scaled(scenario: *mut JcgScenario, tmax: f64) -> JcgStatus {
    guard(|| {
        if !(tmax > 0.0 && tmax.is_finite()) {
            return Err(Fail::Arg(format!("tmax must be positive and finite, got {tmax}")));
        }
        let s = mut_arg(scenario, "scenario")?;
        s.cfg.t_max_scaled = tmax;
        s.cfg.t_end_seconds = None;
        Ok(())
    })
}

/// Angle between wave vector and momentum (rad); 0 switches gravity off.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_set_theta(scenario: *mut JcgScenario, theta: f64) -> JcgStatus {
    guard(|| {
        mut_arg(scenario, "scenario")?.cfg.params.theta = theta;
        Ok(())
    })
}

/// Directory used by [`jcg_scenario_run`].
///
/// # Safety
/// `scenario` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_set_output_dir(scenario: *mut JcgScenario, dir: *const c_char) -> JcgStatus {
    guard(|| {
        let s = mut_arg(scenario, "scenario")?;
        s.cfg.output_path = PathBuf::from(str_arg(dir, "dir")?);
        Ok(())
    })
}

/// Collapse and revival estimate in units of λt for the scenario's parameters.
///
/// # Safety
/// `scenario` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_collapse_revival(
    scenario: *const JcgScenario,
    n_mean: f64,
    m: u32,
    lambda_t_c: *mut f64,
    lambda_t_r: *mut f64,
) -> JcgStatus {
    guard(|| {
        let s = ref_arg(scenario, "scenario")?;
        let (tc, tr) = (mut_arg(lambda_t_c, "lambda_t_c")?, mut_arg(lambda_t_r, "lambda_t_r")?);
        let p = match s.cfg.init.momentum {
            MomentumDistribution::Sharp { p0 } => p0,
            MomentumDistribution::Gaussian { center, .. } => center,
        };
        let est = collapse_revival_times(&s.cfg.params, p, n_mean, m)?;
        *tc = est.lambda_t_c();
        *tr = est.lambda_t_r();
        Ok(())
    })
}

unsafe fn evolve(scenario: *const JcgScenario, out: *mut *mut JcgResult, write: bool) -> JcgStatus {
    guard(|| {
        let s = ref_arg(scenario, "scenario")?;
        let out = mut_arg(out, "out")?;
        let result = if write {
            run_scenario(&s.cfg)?
        } else {
            compute_scenario(&s.cfg)?
        };
        *out = Box::into_raw(Box::new(JcgResult {
            out: result,
            dipole_mag: s.cfg.dipole_mag,
            dipole_phase: s.cfg.dipole_phase,
        }));
        Ok(())
    })
}

/// Evolve the scenario in memory.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_compute(scenario: *const JcgScenario, out: *mut *mut JcgResult) -> JcgStatus {
    evolve(scenario, out, false)
}

/// Evolve and write CSV files, reports and `summary.json` to the output directory.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_scenario_run(scenario: *const JcgScenario, out: *mut *mut JcgResult) -> JcgStatus {
    evolve(scenario, out, true)
}

/// # Safety
/// `result` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_free(result: *mut JcgResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Time grid in seconds.
///
/// # Safety
/// `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_time_grid(
    result: *const JcgResult,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> JcgStatus {
    guard(|| copy_out(ref_arg(result, "result")?.out.trajectory.t_grid(), buf, cap, len))
}

/// Any observable series on the result's grid, whether or not it was requested.
/// `kind` is a `JcgObservable` value; anything else is an invalid argument.
///
/// # Safety
/// `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_observable(
    result: *const JcgResult,
    kind: i32,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> JcgStatus {
    guard(|| {
        let r = ref_arg(result, "result")?;
        let traj = &r.out.trajectory;
        let kind = JcgObservable::from_raw(kind).ok_or_else(|| Fail::Arg(format!("unknown observable {kind}")))?;
        let series = match kind {
            JcgObservable::Dipole => dipole_moment(traj, r.dipole_mag, r.dipole_phase)?,
            JcgObservable::Inversion => atomic_inversion(traj)?,
            JcgObservable::MandelQ => mandel_q(traj)?,
            JcgObservable::S1 => quadrature_squeezing(traj)?.0,
            JcgObservable::S2 => quadrature_squeezing(traj)?.1,
            JcgObservable::DeltaP => momentum_diffusion(traj)?,
        };
        copy_out(&series.values, buf, cap, len)
    })
}

/// Photon-number distribution P(n), n = 0..=n_max+1, at grid index `index`.
///
/// # Safety
/// `result` must be a live handle; `buf` NULL or `cap` writable doubles; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_photon_distribution(
    result: *const JcgResult,
    index: usize,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> JcgStatus {
    guard(|| {
        let traj = &ref_arg(result, "result")?.out.trajectory;
        if index >= traj.len() {
            return Err(Fail::Arg(format!(
                "grid index {index} out of range (grid has {} points)",
                traj.len()
            )));
        }
        copy_out(&photon_distribution_at(traj, index), buf, cap, len)
    })
}

/// max_t |norm(t) − norm(0)|.
///
/// # Safety
/// `result` must be a live handle; `drift` writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_norm_drift(result: *const JcgResult, drift: *mut f64) -> JcgStatus {
    guard(|| {
        let r = ref_arg(result, "result")?;
        *mut_arg(drift, "drift")? = r.out.trajectory.max_norm_drift();
        Ok(())
    })
}

/// Run summary as JSON (the same document the CLI prints).
///
/// # Safety
/// `result` must be a live handle; `buf` NULL or `cap` writable bytes; `len` writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_result_summary_json(
    result: *const JcgResult,
    buf: *mut c_char,
    cap: usize,
    len: *mut usize,
) -> JcgStatus {
    guard(|| {
        let r = ref_arg(result, "result")?;
        let json = serde_json::to_string(&r.out.summary).map_err(|e| Fail::Arg(e.to_string()))?;
        copy_str(&json, buf, cap, len)
    })
}

/// Γ(z).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_gamma(z: JcgComplex, out: *mut JcgComplex) -> JcgStatus {
    guard(|| {
        *mut_arg(out, "out")? = complex_gamma(z.into())?.into();
        Ok(())
    })
}

/// ₁F₁(a; b; z) with the default series control.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_kummer_1f1(
    a: JcgComplex,
    b: JcgComplex,
    z: JcgComplex,
    out: *mut JcgComplex,
) -> JcgStatus {
    guard(|| {
        *mut_arg(out, "out")? = kummer_1f1(a.into(), b.into(), z.into(), &SeriesControl::default())?.into();
        Ok(())
    })
}

/// Hermite function H_ν(z) of complex order.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcg_hermite(nu: JcgComplex, z: JcgComplex, out: *mut JcgComplex) -> JcgStatus {
    guard(|| {
        *mut_arg(out, "out")? = hermite_complex(nu.into(), z.into(), &SeriesControl::default())?.into();
        Ok(())
    })
}
