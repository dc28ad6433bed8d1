//! Closed-form amplitudes in terms of Hermite functions of complex order and
//! Kummer functions along the path B_t = (γt − η)(1+i), and their comparison
//! with direct integration.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_system, AmplitudePair, NodeTrack, Trajectory};
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::model::{
    accumulated_phase, detuning_delta0, initial_amplitudes, rabi_frequency, InitialState, PhaseConvention,
    PhysicalParams,
};
use crate::special::{hermite_complex, kummer_1f1, SeriesControl};

/// Reading of β used to build A_n = −(2 + iβ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticVariant {
    /// β = (Ω_n − Δ₀²)/(2q·g), literally.
    AsPrinted,
    /// β = (Ω_n² − Δ₀²)/(2q·g), dimensionally consistent.
    #[default]
    CorrectedBeta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyticConstants {
    /// C(1) = C₁/C
    pub c1_norm: Complex64,
    /// C(2) = C₂/C, with C₂ fixed by the t = 0 conditions.
    pub c2_norm: Complex64,
    /// C(2) with the opposite-sign C₂ = ψ₁(0)H(A+1,−D) − ψ₂(0)H(A,−D); diagnostic only.
    pub c2_norm_alt_sign: Complex64,
    /// The determinant C.
    pub c_det: Complex64,
    pub a_n: Complex64,
    /// Complex for the as-printed variant.
    pub beta: Complex64,
    pub gamma_rate: f64,
    pub eta: f64,
    pub d_const: Complex64,
    pub delta0: f64,
    pub variant: AnalyticVariant,
}

fn one_plus_i() -> Complex64 {
    Complex64::new(1.0, 1.0)
}

/// The four special-function values entering ψ₁, ψ₂ at argument `b`.
struct Basis {
    h0: Complex64,
    h1: Complex64,
    f0: Complex64,
    f1: Complex64,
}

fn basis(a_n: Complex64, b: Complex64, ctrl: &SeriesControl) -> Result<Basis> {
    let half = Complex64::new(0.5, 0.0);
    let b2 = b * b;
    Ok(Basis {
        h0: hermite_complex(a_n, b, ctrl)?,
        h1: hermite_complex(a_n + 1.0, b, ctrl)?,
        f0: kummer_1f1(-a_n, half, b2, ctrl)?,
        f1: kummer_1f1(-0.5 * (a_n + 1.0), half, b2, ctrl)?,
    })
}

pub fn analytic_constants(
    psi0: AmplitudePair,
    params: &PhysicalParams,
    p: f64,
    n: usize,
    variant: AnalyticVariant,
) -> Result<AnalyticConstants> {
    analytic_constants_with(psi0, params, p, n, variant, &SeriesControl::default())
}

pub fn analytic_constants_with(
    psi0: AmplitudePair,
    params: &PhysicalParams,
    p: f64,
    n: usize,
    variant: AnalyticVariant,
    ctrl: &SeriesControl,
) -> Result<AnalyticConstants> {
    params.validate()?;
    let qg = params.qg_scalar();
    if !(qg > 0.0) {
        return Err(Error::SingularParametrization { qg });
    }
    let delta0 = detuning_delta0(params, p)?;
    let omega = rabi_frequency(params, p, n)?;
    let beta = match variant {
        AnalyticVariant::AsPrinted => (omega - delta0 * delta0) / (2.0 * qg),
        AnalyticVariant::CorrectedBeta => (omega * omega - delta0 * delta0) / (2.0 * qg),
    };
    let a_n = -(Complex64::new(2.0, 0.0) + Complex64::i() * beta);
    let gamma_rate = std::f64::consts::FRAC_1_SQRT_2 * qg;
    let eta = std::f64::consts::SQRT_2 * delta0 / (4.0 * qg.sqrt());
    let d_const = eta * one_plus_i();

    let Basis { h0, h1, f0, f1 } = basis(a_n, -d_const, ctrl)?;
    let c_det = h0 * f1 - h1 * f0;
    let magnitude = c_det.norm();
    if !(magnitude > 0.0) || !magnitude.is_finite() {
        return Err(Error::DegenerateConstants { magnitude });
    }
    let (x1, x2) = (psi0.psi1, psi0.psi2);
    let c1 = x1 * f1 - x2 * f0;
    let c2 = x2 * h0 - x1 * h1;
    Ok(AnalyticConstants {
        c1_norm: c1 / c_det,
        c2_norm: c2 / c_det,
        c2_norm_alt_sign: -c2 / c_det,
        c_det,
        a_n,
        beta,
        gamma_rate,
        eta,
        d_const,
        delta0,
        variant,
    })
}

/// B_t = (γt − η)(1+i)
pub fn b_path(consts: &AnalyticConstants, t: f64) -> Complex64 {
    (consts.gamma_rate * t - consts.eta) * one_plus_i()
}

#[allow(clippy::too_many_arguments)]
fn amplitudes_from(
    c1: Complex64,
    c2: Complex64,
    consts: &AnalyticConstants,
    convention: PhaseConvention,
    qg: f64,
    n: usize,
    t: f64,
    ctrl: &SeriesControl,
) -> Result<AmplitudePair> {
    let Basis { h0, h1, f0, f1 } = basis(consts.a_n, b_path(consts, t), ctrl)?;
    let phase = Complex64::cis(accumulated_phase(convention, consts.delta0, qg, t));
    Ok(AmplitudePair {
        n,
        psi1: phase * (c1 * h0 + c2 * f0),
        psi2: c1 * h1 + c2 * f1,
    })
}

/// ψ₁ = e^{iΦ(t)}[C(1)H(A_n,B_t) + C(2)₁F₁(−A_n,½;B_t²)],
/// ψ₂ = C(1)H(A_n+1,B_t) + C(2)₁F₁(−½(A_n+1),½;B_t²).
pub fn analytic_amplitudes(
    consts: &AnalyticConstants,
    params: &PhysicalParams,
    n: usize,
    t: f64,
) -> Result<AmplitudePair> {
    analytic_amplitudes_with(consts, params, n, t, &SeriesControl::default())
}

pub fn analytic_amplitudes_with(
    consts: &AnalyticConstants,
    params: &PhysicalParams,
    n: usize,
    t: f64,
    ctrl: &SeriesControl,
) -> Result<AmplitudePair> {
    amplitudes_from(
        consts.c1_norm,
        consts.c2_norm,
        consts,
        params.phase_convention,
        params.qg_scalar(),
        n,
        t,
        ctrl,
    )
}

/// Trajectory assembled entirely from the closed form.
pub fn analytic_trajectory(
    params: &PhysicalParams,
    init: &InitialState,
    t_grid: &[f64],
    variant: AnalyticVariant,
) -> Result<Trajectory> {
    let ctrl = SeriesControl::default();
    let mut tracks = Vec::new();
    for (node_idx, node) in initial_amplitudes(init)?.into_iter().enumerate() {
        let annotate = |n: usize| {
            move |e: Error| Error::Manifold {
                n,
                node: node_idx,
                source: Box::new(e),
            }
        };
        let mut manifolds = Vec::with_capacity(node.pairs.len());
        for pair in &node.pairs {
            let n = pair.n;
            let consts = analytic_constants_with(*pair, params, node.node.p, n, variant, &ctrl).map_err(annotate(n))?;
            let series = t_grid
                .iter()
                .map(|&t| analytic_amplitudes_with(&consts, params, n, t, &ctrl))
                .collect::<Result<Vec<_>>>()
                .map_err(annotate(n))?;
            manifolds.push(series);
        }
        tracks.push(NodeTrack {
            momentum: node.node,
            delta0: detuning_delta0(params, node.node.p)?,
            psi_g0: node.psi_g0,
            manifolds,
        });
    }
    Trajectory::from_parts(t_grid.to_vec(), tracks, *params, init.clone())
}

/// Which second-order equation a residual is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondOrderForm {
    /// ψ₁″ − iΦ′ψ₁′ + κ²ψ₁ = 0, ψ₂″ + iΦ′ψ₂′ + κ²ψ₂ = 0, from the first-order system.
    Derived,
    /// ψ₁″ ± i(2q·g·t − Δ₀)ψ′ + κ²ψ = 0 with + for ψ₁ and − for ψ₂.
    AsPrinted,
}

/// Largest relative residual of (ψ₁, ψ₂) in the chosen second-order form, sampled
/// at `times` with five-point finite differences.
pub fn second_order_residual<F>(
    eval: F,
    params: &PhysicalParams,
    delta0: f64,
    n: usize,
    times: &[f64],
    form: SecondOrderForm,
) -> Result<f64>
where
    F: Fn(f64) -> Result<AmplitudePair>,
{
    let kappa2 = params.lambda_coupling.powi(2) * (n + 1) as f64;
    let qg = params.qg_scalar();
    let chirp = match params.phase_convention {
        PhaseConvention::HalfChirp => qg,
        PhaseConvention::FullChirp => 2.0 * qg,
    };
    let mut worst = 0.0f64;
    for &t in times {
        let dphi = delta0 - chirp * t;
        let (c1, c2) = match form {
            SecondOrderForm::Derived => (-dphi, dphi),
            SecondOrderForm::AsPrinted => {
                let k = 2.0 * qg * t - delta0;
                (k, -k)
            }
        };
        let scale = kappa2.sqrt().max(dphi.abs()).max(qg.sqrt()).max(c1.abs());
        let h = 1e-2 / scale;
        let f: Vec<AmplitudePair> = (-2..=2).map(|k| eval(t + k as f64 * h)).collect::<Result<_>>()?;
        for (which, coef) in [(0, c1), (1, c2)] {
            let y: Vec<Complex64> = f.iter().map(|p| if which == 0 { p.psi1 } else { p.psi2 }).collect();
            let d1 = (-y[4] + 8.0 * y[3] - 8.0 * y[1] + y[0]) / (12.0 * h);
            let d2 = (-y[4] + 16.0 * y[3] - 30.0 * y[2] + 16.0 * y[1] - y[0]) / (12.0 * h * h);
            let term1 = Complex64::new(0.0, coef) * d1;
            let term0 = kappa2 * y[2];
            let norm = d2.norm().max(term1.norm()).max(term0.norm());
            if norm > 0.0 {
                worst = worst.max((d2 + term1 + term0).norm() / norm);
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationRow {
    pub node: usize,
    pub n: usize,
    /// max_t max(|Δψ₁|, |Δψ₂|) against the ODE trajectory.
    pub max_deviation: Option<f64>,
    pub residual_derived: Option<f64>,
    pub residual_as_printed: Option<f64>,
    /// max(|Δψ₁|, |Δψ₂|) at t = 0.
    pub roundtrip: Option<f64>,
    /// Same, with the opposite sign of C₂.
    pub roundtrip_alt_sign: Option<f64>,
    pub c_det_abs: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossValidationReport {
    pub variant: AnalyticVariant,
    pub rows: Vec<CrossValidationRow>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"))
}

impl CrossValidationReport {
    /// Plain-text table, one row per (node, n).
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# variant = {:?}", self.variant);
        let _ = writeln!(
            out,
            "{:>4} {:>4} {:>12} {:>14} {:>16} {:>12} {:>14} {:>12}  note",
            "node", "n", "max_dev", "resid_derived", "resid_as_printed", "roundtrip", "roundtrip_alt", "|C|"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:>4} {:>4} {:>12} {:>14} {:>16} {:>12} {:>14} {:>12}  {}",
                r.node,
                r.n,
                fmt_opt(r.max_deviation),
                fmt_opt(r.residual_derived),
                fmt_opt(r.residual_as_printed),
                fmt_opt(r.roundtrip),
                fmt_opt(r.roundtrip_alt_sign),
                fmt_opt(r.c_det_abs),
                r.note
            );
        }
        out
    }

    /// Largest t = 0 round-trip error, or `None` if any row could not be evaluated.
    pub fn max_roundtrip(&self) -> Option<f64> {
        self.rows
            .iter()
            .try_fold(0.0f64, |acc, r| r.roundtrip.map(|x| acc.max(x)))
    }
}

/// Residuals are sampled at no more than this many grid times per manifold.
const RESIDUAL_SAMPLES: usize = 32;

/// Compare the closed form with the ODE engine manifold by manifold. Failures of
/// the closed form are recorded in the row's note, never raised.
pub fn cross_validate(
    params: &PhysicalParams,
    init: &InitialState,
    t_grid: &[f64],
    variant: AnalyticVariant,
) -> Result<CrossValidationReport> {
    let qg = params.qg_scalar();
    if !(qg > 0.0) {
        return Err(Error::SingularParametrization { qg });
    }
    let ode = evolve_system(params, init, t_grid, &IntegratorConfig::default())?;
    let ctrl = SeriesControl::default();
    let stride = (t_grid.len() / RESIDUAL_SAMPLES).max(1);
    let samples: Vec<f64> = t_grid.iter().copied().step_by(stride).collect();

    let mut rows = Vec::new();
    for (node_idx, node) in initial_amplitudes(init)?.into_iter().enumerate() {
        let track = &ode.nodes()[node_idx];
        for pair in &node.pairs {
            let n = pair.n;
            let mut row = CrossValidationRow {
                node: node_idx,
                n,
                max_deviation: None,
                residual_derived: None,
                residual_as_printed: None,
                roundtrip: None,
                roundtrip_alt_sign: None,
                c_det_abs: None,
                note: String::new(),
            };
            let consts = match analytic_constants_with(*pair, params, node.node.p, n, variant, &ctrl) {
                Ok(c) => c,
                Err(e) => {
                    row.note = format!("constants: {e}");
                    rows.push(row);
                    continue;
                }
            };
            row.c_det_abs = Some(consts.c_det.norm());
            let pair_err =
                |a: &AmplitudePair, b: &AmplitudePair| (a.psi1 - b.psi1).norm().max((a.psi2 - b.psi2).norm());
            let eval = |t: f64| analytic_amplitudes_with(&consts, params, n, t, &ctrl);
            let result = (|| -> Result<()> {
                row.roundtrip = Some(pair_err(&eval(0.0)?, pair));
                let alt = amplitudes_from(
                    consts.c1_norm,
                    consts.c2_norm_alt_sign,
                    &consts,
                    params.phase_convention,
                    qg,
                    n,
                    0.0,
                    &ctrl,
                )?;
                row.roundtrip_alt_sign = Some(pair_err(&alt, pair));
                let mut dev = 0.0f64;
                for (k, &t) in t_grid.iter().enumerate() {
                    dev = dev.max(pair_err(&eval(t)?, &track.manifolds[n][k]));
                }
                row.max_deviation = Some(dev);
                row.residual_derived = Some(second_order_residual(
                    eval,
                    params,
                    consts.delta0,
                    n,
                    &samples,
                    SecondOrderForm::Derived,
                )?);
                row.residual_as_printed = Some(second_order_residual(
                    eval,
                    params,
                    consts.delta0,
                    n,
                    &samples,
                    SecondOrderForm::AsPrinted,
                )?);
                Ok(())
            })();
            if let Err(e) = result {
                row.note = e.to_string();
            }
            rows.push(row);
        }
    }
    Ok(CrossValidationReport { variant, rows })
}
