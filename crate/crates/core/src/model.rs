//! Physical parameters, Doppler/gravity detunings and initial-state construction.
//!
//! Frequencies are angular (rad/s), times are seconds, momenta are kg·m/s.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::AmplitudePair;
use crate::error::{Error, Result};
use crate::quadrature::gauss_hermite;

/// Reduced Planck constant (J·s), CODATA 2018 exact value.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Default tail-mass bound for coherent-state truncation.
pub const COHERENT_TAIL_BOUND: f64 = 1e-12;

/// How the time-dependent detuning enters the accumulated interaction phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// Δ₁(t)·t = Δ₀t − (q·g)t²/2
    #[default]
    HalfChirp,
    /// Δ₀t − (q·g)t², for sensitivity studies.
    FullChirp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Atom-field coupling λ (rad/s).
    pub lambda_coupling: f64,
    /// Cavity mode frequency ω_c (rad/s). Unused when `delta0_override` is set.
    pub omega_c: f64,
    /// Atomic transition frequency ω_eg (rad/s). Unused when `delta0_override` is set.
    pub omega_eg: f64,
    /// Wave number q (1/m).
    pub q_wavenumber: f64,
    /// Recoil frequency ħq²/(2M) (rad/s).
    pub recoil_freq: f64,
    /// Gravitational acceleration (m/s²).
    pub g_accel: f64,
    /// Angle between the wave vector and the atomic momentum (rad).
    pub theta: f64,
    /// Central atomic momentum (kg·m/s).
    pub p0: f64,
    /// Fixed Δ₀ (rad/s); when set the momentum dependence of Δ₀ is dropped.
    pub delta0_override: Option<f64>,
    #[serde(default)]
    pub phase_convention: PhaseConvention,
}

impl PhysicalParams {
    /// The parameter set used for every figure of the reference study, with
    /// maximal gravitational coupling (θ = π/2).
    pub fn reference() -> Self {
        PhysicalParams {
            lambda_coupling: 9.7e6,
            omega_c: 0.0,
            omega_eg: 0.0,
            q_wavenumber: 1e7,
            recoil_freq: 0.5e6,
            g_accel: 9.8,
            theta: std::f64::consts::FRAC_PI_2,
            p0: 1e-26,
            delta0_override: Some(8.5e7),
            phase_convention: PhaseConvention::HalfChirp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("lambda_coupling", self.lambda_coupling),
            ("omega_c", self.omega_c),
            ("omega_eg", self.omega_eg),
            ("q_wavenumber", self.q_wavenumber),
            ("recoil_freq", self.recoil_freq),
            ("g_accel", self.g_accel),
            ("theta", self.theta),
            ("p0", self.p0),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if let Some(d) = self.delta0_override {
            if !d.is_finite() {
                return Err(Error::InvalidParameter("delta0 override is not finite".into()));
            }
        }
        if self.lambda_coupling <= 0.0 {
            return Err(Error::InvalidParameter("lambda_coupling must be > 0".into()));
        }
        if self.q_wavenumber <= 0.0 {
            return Err(Error::InvalidParameter("q_wavenumber must be > 0".into()));
        }
        if self.recoil_freq < 0.0 {
            return Err(Error::InvalidParameter("recoil_freq must be >= 0".into()));
        }
        if self.g_accel < 0.0 {
            return Err(Error::InvalidParameter("g_accel must be >= 0".into()));
        }
        Ok(())
    }

    /// Effective atomic mass M = ħq²/(2ω_rec); `None` when the recoil frequency is zero.
    pub fn effective_mass(&self) -> Option<f64> {
        (self.recoil_freq > 0.0).then(|| HBAR * self.q_wavenumber.powi(2) / (2.0 * self.recoil_freq))
    }

    /// The scalar q·g = q g sinθ (1/s²).
    pub fn qg_scalar(&self) -> f64 {
        self.q_wavenumber * self.g_accel * self.theta.sin()
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn derived(&self, p: f64) -> Result<DerivedDetunings> {
        let qg = self.qg_scalar();
        Ok(DerivedDetunings {
            delta0: detuning_delta0(self, p)?,
            qg_scalar: qg,
            chirp_rate: qg / 2.0,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedDetunings {
    pub delta0: f64,
    pub qg_scalar: f64,
    pub chirp_rate: f64,
}

/// Time-independent detuning Δ₀(p) = ½[ω_c − (ω_eg + q·p cosθ/M + 3ħq²/(2M))].
pub fn detuning_delta0(params: &PhysicalParams, p: f64) -> Result<f64> {
    if let Some(d) = params.delta0_override {
        return Ok(d);
    }
    let doppler = match params.effective_mass() {
        Some(m) => params.q_wavenumber * p * params.theta.cos() / m,
        None if p == 0.0 || params.theta.cos() == 0.0 => 0.0,
        None => return Err(Error::UndefinedMass { p }),
    };
    Ok(0.5 * (params.omega_c - (params.omega_eg + doppler + 3.0 * params.recoil_freq)))
}

/// Instantaneous detuning Δ₁(p, g, t) = Δ₀(p) − (q·g) t / 2.
pub fn detuning_delta1(params: &PhysicalParams, p: f64, t: f64) -> Result<f64> {
    Ok(detuning_delta0(params, p)? - params.qg_scalar() * t / 2.0)
}

/// Phase Φ(t) appearing as e^{±iΦ} in the amplitude equations.
#[inline]
pub fn accumulated_phase(convention: PhaseConvention, delta0: f64, qg: f64, t: f64) -> f64 {
    match convention {
        PhaseConvention::HalfChirp => delta0 * t - 0.5 * qg * t * t,
        PhaseConvention::FullChirp => delta0 * t - qg * t * t,
    }
}

/// Gravity-dependent Rabi frequency Ω_n(p,g) = sqrt(λ²(n+1) + Δ₀² + 2i q·g), principal branch.
pub fn rabi_frequency(params: &PhysicalParams, p: f64, n: usize) -> Result<Complex64> {
    let delta0 = detuning_delta0(params, p)?;
    let lambda = params.lambda_coupling;
    let real = lambda * lambda * (n as f64 + 1.0) + delta0 * delta0;
    Ok(Complex64::new(real, 2.0 * params.qg_scalar()).sqrt())
}

/// Poisson tail mass Σ_{n > n_max} e^{-μ} μⁿ/n!.
pub fn poisson_tail(mean: f64, n_max: usize) -> f64 {
    if mean == 0.0 {
        return 0.0;
    }
    // log p_{n_max+1}
    let k0 = n_max + 1;
    let ln_fact: f64 = (2..=k0).map(|k| (k as f64).ln()).sum();
    let mut term = (-mean + k0 as f64 * mean.ln() - ln_fact).exp();
    let mut sum = 0.0;
    let mut k = k0;
    loop {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if (k as f64 > mean && term < 1e-18 * sum) || term == 0.0 {
            break;
        }
    }
    sum
}

/// Smallest Fock cutoff satisfying both the tail bound and the n̄ + 8√n̄ + 10 floor.
pub fn coherent_cutoff(alpha: Complex64) -> usize {
    let a = alpha.norm();
    let mut n_max = (a * a + 8.0 * a + 10.0).ceil() as usize;
    while poisson_tail(a * a, n_max) >= COHERENT_TAIL_BOUND {
        n_max += 1;
    }
    n_max
}

/// Coherent-state weights w_n = e^{−|α|²/2} αⁿ/√(n!), n = 0..=n_max, renormalised after truncation.
pub fn coherent_weights(alpha: Complex64, n_max: usize) -> Result<Vec<Complex64>> {
    coherent_weights_with_bound(alpha, n_max, COHERENT_TAIL_BOUND)
}

pub fn coherent_weights_with_bound(alpha: Complex64, n_max: usize, tail_bound: f64) -> Result<Vec<Complex64>> {
    if !alpha.re.is_finite() || !alpha.im.is_finite() {
        return Err(Error::InvalidParameter("coherent amplitude is not finite".into()));
    }
    let mean = alpha.norm_sqr();
    let tail = poisson_tail(mean, n_max);
    if tail >= tail_bound {
        return Err(Error::Truncation {
            n_max,
            tail,
            bound: tail_bound,
        });
    }
    let mut w = Vec::with_capacity(n_max + 1);
    let mut cur = Complex64::new((-mean / 2.0).exp(), 0.0);
    for n in 0..=n_max {
        w.push(cur);
        cur = cur * alpha / ((n + 1) as f64).sqrt();
    }
    let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in &mut w {
        *x /= norm;
    }
    Ok(w)
}

/// Fock state |n⟩ expressed as field weights over 0..=n_max.
pub fn fock_weights(n: usize, n_max: usize) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); n_max.max(n) + 1];
    w[n] = Complex64::new(1.0, 0.0);
    w
}

/// Centre-of-mass momentum distribution |φ(p)|².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentumDistribution {
    Sharp { p0: f64 },
    Gaussian { center: f64, sigma: f64, nodes: usize },
}

/// One quadrature node of the momentum distribution; `weight` is the probability |φ|² mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumNode {
    pub p: f64,
    pub weight: f64,
}

impl MomentumDistribution {
    pub fn nodes(&self) -> Result<Vec<MomentumNode>> {
        match *self {
            MomentumDistribution::Sharp { p0 } => Ok(vec![MomentumNode { p: p0, weight: 1.0 }]),
            MomentumDistribution::Gaussian { center, sigma, nodes } => {
                if nodes == 0 {
                    return Err(Error::InvalidParameter(
                        "Gaussian momentum needs at least one node".into(),
                    ));
                }
                if !(sigma > 0.0) || !sigma.is_finite() {
                    return Err(Error::InvalidParameter("Gaussian momentum width must be > 0".into()));
                }
                // ∫ f(p) N(center, σ²) dp = π^{-1/2} Σ w_k f(center + √2 σ x_k)
                let rule = gauss_hermite(nodes);
                let scale = std::f64::consts::PI.sqrt().recip();
                Ok(rule
                    .into_iter()
                    .map(|(x, w)| MomentumNode {
                        p: center + std::f64::consts::SQRT_2 * sigma * x,
                        weight: w * scale,
                    })
                    .collect())
            }
        }
    }

    /// Same distribution with the quadrature refined by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        match *self {
            MomentumDistribution::Gaussian { center, sigma, nodes } => MomentumDistribution::Gaussian {
                center,
                sigma,
                nodes: nodes * factor,
            },
            sharp => sharp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub c_e: Complex64,
    pub c_g: Complex64,
    /// w_n for n = 0..=n_max.
    pub field_weights: Vec<Complex64>,
    pub momentum: MomentumDistribution,
}

impl InitialState {
    /// Atom in c_e|e⟩ + c_g|g⟩, field coherent with amplitude α.
    pub fn coherent(
        c_e: Complex64,
        c_g: Complex64,
        alpha: Complex64,
        n_max: Option<usize>,
        momentum: MomentumDistribution,
    ) -> Result<Self> {
        let n_max = n_max.unwrap_or_else(|| coherent_cutoff(alpha));
        let state = InitialState {
            c_e,
            c_g,
            field_weights: coherent_weights(alpha, n_max)?,
            momentum,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn n_max(&self) -> usize {
        self.field_weights.len().saturating_sub(1)
    }

    pub fn validate(&self) -> Result<()> {
        let atom = self.c_e.norm_sqr() + self.c_g.norm_sqr();
        if (atom - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "atomic amplitudes not normalised: |c_e|²+|c_g|² = {atom}"
            )));
        }
        if self.field_weights.is_empty() {
            return Err(Error::InvalidParameter("field weights are empty".into()));
        }
        let field: f64 = self.field_weights.iter().map(|w| w.norm_sqr()).sum();
        if (field - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "field weights not normalised: Σ|w_n|² = {field}"
            )));
        }
        Ok(())
    }
}

/// Initial amplitudes of one momentum node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeAmplitudes {
    pub node: MomentumNode,
    /// One pair per manifold n = 0..=n_max.
    pub pairs: Vec<AmplitudePair>,
    pub psi_g0: Complex64,
}

/// ψ₁ₙ(0) = w_n c_e φ(p), ψ₂ₙ(0) = w_{n+1} c_g φ(p), ψ_{g,0}(0) = w_0 c_g φ(p),
/// with φ(p) = √weight at each quadrature node. Weights beyond n_max are zero.
pub fn initial_amplitudes(init: &InitialState) -> Result<Vec<NodeAmplitudes>> {
    init.validate()?;
    let w = &init.field_weights;
    let zero = Complex64::new(0.0, 0.0);
    let nodes = init.momentum.nodes()?;
    Ok(nodes
        .into_iter()
        .map(|node| {
            let phi = node.weight.sqrt();
            let pairs = (0..w.len())
                .map(|n| AmplitudePair {
                    n,
                    psi1: w[n] * init.c_e * phi,
                    psi2: w.get(n + 1).copied().unwrap_or(zero) * init.c_g * phi,
                })
                .collect();
            NodeAmplitudes {
                node,
                pairs,
                psi_g0: w[0] * init.c_g * phi,
            }
        })
        .collect())
}
