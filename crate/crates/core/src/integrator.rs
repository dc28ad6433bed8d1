//! Adaptive Dormand–Prince 5(4) integrator for small complex-valued systems.
//!
//! Steps are clamped so that every requested output time is hit exactly;
//! there is no interpolation between steps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on |h| in seconds; `None` leaves the step unbounded.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_step: None,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter("integrator tolerances must be positive".into()));
        }
        if matches!(self.max_step, Some(h) if !(h > 0.0)) {
            return Err(Error::InvalidParameter("max_step must be positive".into()));
        }
        Ok(())
    }

    /// Same configuration with both tolerances divided by `factor`.
    pub fn tightened(self, factor: f64) -> Self {
        IntegratorConfig {
            abs_tol: self.abs_tol / factor,
            rel_tol: self.rel_tol / factor,
            ..self
        }
    }
}

/// Work counters of one integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

// Dormand–Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (fifth minus embedded fourth order)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

type State<const N: usize> = [Complex64; N];

#[inline]
fn combine<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(c, k) in terms {
            acc += k[i] * c;
        }
        *o += acc * h;
    }
    out
}

fn error_norm<const N: usize>(y: &State<N>, y_new: &State<N>, err: &State<N>, cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let sc = cfg.abs_tol + cfg.rel_tol * y[i].norm().max(y_new[i].norm());
        acc += (err[i].norm() / sc).powi(2);
    }
    (acc / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(
    rhs: &F,
    t0: f64,
    y0: &State<N>,
    f0: &State<N>,
    span: f64,
    cfg: &IntegratorConfig,
) -> f64
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let norm = |v: &State<N>| -> f64 {
        let s: f64 = v
            .iter()
            .zip(y0.iter())
            .map(|(x, y)| (x.norm() / (cfg.abs_tol + cfg.rel_tol * y.norm())).powi(2))
            .sum();
        (s / N as f64).sqrt()
    };
    let d0 = norm(y0);
    let d1 = norm(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let y1 = combine(y0, h0, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let diff: State<N> = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / d1.max(d2)).powf(1.0 / 5.0)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrate `y' = rhs(t, y)` from `t0` through every entry of `times`
/// (monotone in either direction), returning the state at each time.
pub fn integrate<const N: usize, F>(
    rhs: F,
    t0: f64,
    y0: State<N>,
    times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(Vec<State<N>>, IntegrationStats)>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    cfg.validate()?;
    let mut out = Vec::with_capacity(times.len());
    let mut stats = IntegrationStats::default();
    let Some(&t_last) = times.last() else {
        return Ok((out, stats));
    };
    let direction = if t_last >= t0 { 1.0 } else { -1.0 };
    if times
        .iter()
        .try_fold(t0, |prev, &t| ((t - prev) * direction >= 0.0).then_some(t))
        .is_none()
    {
        return Err(Error::InvalidGrid("output times are not monotone".into()));
    }

    let span = (t_last - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    stats.evaluations += 1;
    let mut h = if span > 0.0 {
        initial_step(&rhs, t0, &y0, &k1, span, cfg)
    } else {
        0.0
    };
    stats.evaluations += 1;
    if let Some(hmax) = cfg.max_step {
        h = h.min(hmax);
    }

    for &target in times {
        while (target - t) * direction > 0.0 {
            let remaining = (target - t).abs();
            // a step that would land within a hair of the target is stretched onto it
            let clamped = h >= remaining * (1.0 - 1e-12);
            let step = if clamped { remaining } else { h };
            if step < 16.0 * f64::EPSILON * t.abs().max(span) {
                return Err(Error::StepUnderflow { t, h: step });
            }
            if stats.accepted + stats.rejected >= cfg.max_steps {
                return Err(Error::TooManySteps {
                    t,
                    max_steps: cfg.max_steps,
                });
            }
            let hs = step * direction;

            let k2 = rhs(t + C2 * hs, &combine(&y, hs, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * hs, &combine(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(t + C4 * hs, &combine(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(
                t + C5 * hs,
                &combine(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + hs,
                &combine(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = combine(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let t_new = if clamped { target } else { t + hs };
            let k7 = rhs(t_new, &y_new);
            stats.evaluations += 6;

            let zero = [Complex64::new(0.0, 0.0); N];
            let err_vec = combine(
                &zero,
                hs,
                &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
            );
            let err = error_norm(&y, &y_new, &err_vec, cfg);
            if !err.is_finite() {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let factor = if err == 0.0 {
                FAC_MAX
            } else {
                (SAFETY * err.powf(-0.2)).clamp(FAC_MIN, FAC_MAX)
            };

            if err <= 1.0 {
                stats.accepted += 1;
                t = t_new;
                y = y_new;
                k1 = k7;
                // a clamped step says nothing about the natural step length
                let proposal = step * factor;
                h = if clamped { h.max(proposal) } else { proposal };
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
            }
            if let Some(hmax) = cfg.max_step {
                h = h.min(hmax);
            }
        }
        out.push(y);
    }
    Ok((out, stats))
}
