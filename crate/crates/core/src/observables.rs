//! Reductions of a [`Trajectory`] to physical observables.
//!
//! Sums run in ascending photon number, then momentum node, so results are
//! bit-stable for a given trajectory.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::{detuning_delta0, PhysicalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Dipole,
    Inversion,
    MandelQ,
    S1,
    S2,
    DeltaP,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 6] = [
        ObservableKind::Dipole,
        ObservableKind::Inversion,
        ObservableKind::MandelQ,
        ObservableKind::S1,
        ObservableKind::S2,
        ObservableKind::DeltaP,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObservableKind::Dipole => "dipole",
            ObservableKind::Inversion => "inversion",
            ObservableKind::MandelQ => "mandel_q",
            ObservableKind::S1 => "s1",
            ObservableKind::S2 => "s2",
            ObservableKind::DeltaP => "delta_p",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for ObservableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableSeries {
    pub name: ObservableKind,
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// λt
    pub scaled_time: Vec<f64>,
    pub params: PhysicalParams,
}

impl ObservableSeries {
    pub fn new(name: ObservableKind, t_grid: Vec<f64>, values: Vec<f64>, params: PhysicalParams) -> Result<Self> {
        if t_grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{name}: {} values for {} grid times",
                values.len(),
                t_grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name}: non-finite value at t = {:e}",
                t_grid[k]
            )));
        }
        let scaled_time = t_grid.iter().map(|t| params.lambda_coupling * t).collect();
        Ok(ObservableSeries {
            name,
            t_grid,
            values,
            scaled_time,
            params,
        })
    }

    fn from_traj(name: ObservableKind, traj: &Trajectory, values: Vec<f64>) -> Result<Self> {
        Self::new(name, traj.t_grid().to_vec(), values, *traj.params())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// (λt, value) of the smallest interior local minimum, if any.
    pub fn first_local_minimum(&self) -> Option<(f64, f64)> {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .find(|&k| v[k] < v[k - 1] && v[k] <= v[k + 1])
            .map(|k| (self.scaled_time[k], v[k]))
    }

    /// (λt, value) of the global minimum.
    pub fn global_minimum(&self) -> Option<(f64, f64)> {
        self.values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, &v)| (self.scaled_time[k], v))
    }
}

/// P(t) = 2|℘| Σ Re[ψ₁* ψ₂ e^{iφ}] with interaction-picture amplitudes.
pub fn dipole_moment(traj: &Trajectory, dipole_mag: f64, phase: f64) -> Result<ObservableSeries> {
    let rot = Complex64::cis(phase);
    let values = (0..traj.len())
        .map(|k| {
            let mut acc = 0.0;
            for node in traj.nodes() {
                for m in &node.manifolds {
                    acc += (m[k].psi1.conj() * m[k].psi2 * rot).re;
                }
            }
            2.0 * dipole_mag * acc
        })
        .collect();
    ObservableSeries::from_traj(ObservableKind::Dipole, traj, values)
}

/// W(t) = Σ (|ψ₁|² − |ψ₂|²) − |ψ_{g,0}|².
pub fn atomic_inversion(traj: &Trajectory) -> Result<ObservableSeries> {
    let values = (0..traj.len())
        .map(|k| {
            let mut acc = 0.0;
            for node in traj.nodes() {
                for m in &node.manifolds {
                    acc += m[k].psi1.norm_sqr() - m[k].psi2.norm_sqr();
                }
                acc -= node.psi_g0.norm_sqr();
            }
            acc
        })
        .collect();
    ObservableSeries::from_traj(ObservableKind::Inversion, traj, values)
}

/// Δp(t) from centred momentum moments over the quadrature nodes, normalised by total population.
pub fn momentum_diffusion(traj: &Trajectory) -> Result<ObservableSeries> {
    let values = (0..traj.len())
        .map(|k| {
            let pops: Vec<(f64, f64)> = traj
                .nodes()
                .iter()
                .map(|node| (node.momentum.p, node.population(k)))
                .collect();
            let total: f64 = pops.iter().map(|(_, w)| w).sum();
            if total <= 0.0 {
                return 0.0;
            }
            let mean = pops.iter().map(|(p, w)| p * w).sum::<f64>() / total;
            let var = pops.iter().map(|(p, w)| (p - mean).powi(2) * w).sum::<f64>() / total;
            var.max(0.0).sqrt()
        })
        .collect();
    ObservableSeries::from_traj(ObservableKind::DeltaP, traj, values)
}

/// P(n), n = 0..=n_max+1, at grid index `k`.
pub fn photon_distribution_at(traj: &Trajectory, k: usize) -> Vec<f64> {
    let mut probs = vec![0.0; traj.manifold_count() + 1];
    for node in traj.nodes() {
        probs[0] += node.psi_g0.norm_sqr();
        for (n, m) in node.manifolds.iter().enumerate() {
            probs[n] += m[k].psi1.norm_sqr();
            probs[n + 1] += m[k].psi2.norm_sqr();
        }
    }
    probs
}

/// P(n) at an exact grid time; other times are refused.
pub fn photon_distribution(traj: &Trajectory, t: f64) -> Result<Vec<f64>> {
    Ok(photon_distribution_at(traj, traj.time_index(t)?))
}

/// (⟨n⟩, ⟨n²⟩) from a photon-number distribution.
pub fn photon_moments(probs: &[f64]) -> (f64, f64) {
    probs.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (n, p)| {
        let n = n as f64;
        (m1 + n * p, m2 + n * n * p)
    })
}

/// Q(t) = (⟨n²⟩ − ⟨n⟩²)/⟨n⟩ − 1.
pub fn mandel_q(traj: &Trajectory) -> Result<ObservableSeries> {
    let values = (0..traj.len())
        .map(|k| {
            let (m1, m2) = photon_moments(&photon_distribution_at(traj, k));
            if m1 <= 0.0 {
                return Err(Error::UndefinedMandelQ { t: traj.t_grid()[k] });
            }
            Ok((m2 - m1 * m1) / m1 - 1.0)
        })
        .collect::<Result<_>>()?;
    ObservableSeries::from_traj(ObservableKind::MandelQ, traj, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldMoments {
    pub m_a: Complex64,
    pub m_adag: Complex64,
    pub m_a2: Complex64,
    pub m_adag2: Complex64,
    /// ⟨a†a⟩; real for the exact moments, complex for the as-printed sums.
    pub m_n: Complex64,
}

impl FieldMoments {
    /// (S₁, S₂)
    pub fn squeezing(&self) -> (f64, f64) {
        let var_a2 = self.m_a2 - self.m_a * self.m_a;
        let var_adag2 = self.m_adag2 - self.m_adag * self.m_adag;
        let normal = 2.0 * (self.m_n - self.m_adag * self.m_a);
        let s1 = var_a2 + var_adag2 + normal;
        let s2 = -var_a2 - var_adag2 + normal;
        (s1.re, s2.re)
    }
}

/// Moments over the full photon-number expansion at grid index `k`.
pub fn field_moments_at(traj: &Trajectory, k: usize) -> FieldMoments {
    let zero = Complex64::new(0.0, 0.0);
    let (mut a, mut a2, mut num) = (zero, zero, 0.0);
    for node in traj.nodes() {
        let (excited, ground) = node.photon_amplitudes(k);
        for amps in [&excited, &ground] {
            for n in 1..amps.len() {
                let nf = n as f64;
                a += nf.sqrt() * amps[n - 1].conj() * amps[n];
                num += nf * amps[n].norm_sqr();
                if n >= 2 {
                    a2 += (nf * (nf - 1.0)).sqrt() * amps[n - 2].conj() * amps[n];
                }
            }
        }
    }
    FieldMoments {
        m_a: a,
        m_adag: a.conj(),
        m_a2: a2,
        m_adag2: a2.conj(),
        m_n: Complex64::new(num, 0.0),
    }
}

pub fn field_moments(traj: &Trajectory, t: f64) -> Result<FieldMoments> {
    Ok(field_moments_at(traj, traj.time_index(t)?))
}

/// The literal manifold-index sums, with out-of-range amplitudes taken as zero.
/// These break ⟨a†⟩ = conj⟨a⟩ in general; kept for comparison only.
pub fn field_moments_as_printed(traj: &Trajectory, t: f64) -> Result<FieldMoments> {
    let k = traj.time_index(t)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = FieldMoments {
        m_a: zero,
        m_adag: zero,
        m_a2: zero,
        m_adag2: zero,
        m_n: zero,
    };
    for node in traj.nodes() {
        let len = node.manifolds.len() as isize;
        let p1 = |i: isize| {
            if (0..len).contains(&i) {
                node.manifolds[i as usize][k].psi1
            } else {
                zero
            }
        };
        let p2 = |i: isize| {
            if (0..len).contains(&i) {
                node.manifolds[i as usize][k].psi2
            } else {
                zero
            }
        };
        for n in 0..len {
            let nf = n as f64;
            out.m_a += nf.sqrt() * p1(n) * p1(n - 1).conj() + (nf + 1.0).sqrt() * p2(n) * p2(n - 1).conj();
            out.m_adag += (nf + 1.0).sqrt() * p1(n) * p1(n + 1).conj() + (nf + 2.0).sqrt() * p2(n) * p2(n + 1).conj();
            out.m_a2 += (nf * (nf - 1.0)).max(0.0).sqrt() * p1(n) * p1(n - 2).conj()
                + (nf * (nf + 1.0)).sqrt() * p2(n) * p2(n - 2).conj();
            out.m_adag2 += ((nf + 1.0) * (nf + 2.0)).sqrt() * p1(n) * p1(n + 2).conj()
                + ((nf + 2.0) * (nf + 3.0)).sqrt() * p2(n) * p2(n + 3).conj();
            out.m_n += nf * p1(n).norm_sqr() + (nf + 1.0) * p2(n) * p2(n - 1).conj();
        }
    }
    Ok(out)
}

/// (S₁, S₂) series from the exact field moments.
pub fn quadrature_squeezing(traj: &Trajectory) -> Result<(ObservableSeries, ObservableSeries)> {
    let (s1, s2): (Vec<f64>, Vec<f64>) = (0..traj.len()).map(|k| field_moments_at(traj, k).squeezing()).unzip();
    Ok((
        ObservableSeries::from_traj(ObservableKind::S1, traj, s1)?,
        ObservableSeries::from_traj(ObservableKind::S2, traj, s2)?,
    ))
}

/// Magnitude r = (c² + d²)^{1/4} and angle φ = atan2(d, c) of one Rabi frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RabiPolar {
    /// photon index at which c is evaluated (may be fractional)
    pub n: f64,
    pub c: f64,
    pub r: f64,
    pub phi: f64,
}

impl RabiPolar {
    fn new(delta0: f64, lambda: f64, d: f64, n: f64) -> Self {
        let c = delta0 * delta0 + lambda * lambda * (n + 1.0);
        RabiPolar {
            n,
            c,
            r: (c * c + d * d).powf(0.25),
            phi: d.atan2(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapseRevivalEstimate {
    /// seconds
    pub t_c: f64,
    /// seconds, for revival order `m`
    pub t_r: f64,
    pub m: u32,
    pub n_mean: f64,
    pub lambda: f64,
    pub delta0: f64,
    pub d: f64,
    pub collapse_hi: RabiPolar,
    pub collapse_lo: RabiPolar,
    pub revival_hi: RabiPolar,
    pub revival_lo: RabiPolar,
}

impl CollapseRevivalEstimate {
    pub fn lambda_t_c(&self) -> f64 {
        self.lambda * self.t_c
    }

    pub fn lambda_t_r(&self) -> f64 {
        self.lambda * self.t_r
    }

    /// Multi-line listing of inputs, intermediates and outputs.
    pub fn report(&self) -> String {
        let row = |label: &str, p: &RabiPolar| {
            format!(
                "  {label}: n={:.6} c={:.6e} r={:.6e} phi={:.6e}\n",
                p.n, p.c, p.r, p.phi
            )
        };
        let mut s = format!(
            "  inputs: n_mean={} m={} lambda={:e} delta0={:e} d=2qg={:e}\n",
            self.n_mean, self.m, self.lambda, self.delta0, self.d
        );
        s += &row("collapse r1/phi1", &self.collapse_hi);
        s += &row("collapse r2/phi2", &self.collapse_lo);
        s += &row("revival  r1/phi1", &self.revival_hi);
        s += &row("revival  r2/phi2", &self.revival_lo);
        s += &format!(
            "  outputs: t_c={:.6e} s (lambda*t_c={:.6}), t_r={:.6e} s (lambda*t_r={:.6})\n",
            self.t_c,
            self.lambda_t_c(),
            self.t_r,
            self.lambda_t_r()
        );
        s
    }
}

/// Real part of 1/(Ω₁ − Ω₂) with Ω = r e^{iφ}: X/(X² + Y²).
fn real_inverse_difference(a: &RabiPolar, b: &RabiPolar) -> Result<f64> {
    let x = a.r * a.phi.cos() - b.r * b.phi.cos();
    let y = a.r * a.phi.sin() - b.r * b.phi.sin();
    let den = x * x + y * y;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::DegenerateEstimate(format!(
            "Rabi-frequency difference vanishes between n={} and n={}",
            a.n, b.n
        )));
    }
    Ok(x / den)
}

/// Collapse and revival times from n̄ ± √n̄ and (n̄, n̄ − 1), with
/// c_n = Δ₀² + λ²(n+1) continuous in n and d = 2q·g.
pub fn collapse_revival_times(params: &PhysicalParams, p: f64, n_mean: f64, m: u32) -> Result<CollapseRevivalEstimate> {
    if !(n_mean > 0.0) || !n_mean.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be > 0, got {n_mean}"
        )));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("revival order m must be >= 1".into()));
    }
    params.validate()?;
    let delta0 = detuning_delta0(params, p)?;
    let lambda = params.lambda_coupling;
    let d = 2.0 * params.qg_scalar();
    let polar = |n: f64| RabiPolar::new(delta0, lambda, d, n);
    let spread = n_mean.sqrt();
    let collapse_hi = polar(n_mean + spread);
    let collapse_lo = polar(n_mean - spread);
    let revival_hi = polar(n_mean);
    let revival_lo = polar(n_mean - 1.0);
    let t_c = real_inverse_difference(&collapse_hi, &collapse_lo)?;
    let t_r = 2.0 * m as f64 * std::f64::consts::PI * real_inverse_difference(&revival_hi, &revival_lo)?;
    if !(t_c > 0.0 && t_r > 0.0) {
        return Err(Error::DegenerateEstimate(format!(
            "non-positive estimate: t_c = {t_c:e}, t_r = {t_r:e}"
        )));
    }
    Ok(CollapseRevivalEstimate {
        t_c,
        t_r,
        m,
        n_mean,
        lambda,
        delta0,
        d,
        collapse_hi,
        collapse_lo,
        revival_hi,
        revival_lo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve_system, uniform_grid};
    use crate::integrator::IntegratorConfig;
    use crate::model::{coherent_weights, fock_weights, InitialState, MomentumDistribution};
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn resonant() -> PhysicalParams {
        PhysicalParams {
            g_accel: 0.0,
            delta0_override: Some(0.0),
            ..PhysicalParams::reference()
        }
    }

    fn run(params: &PhysicalParams, init: &InitialState, lt_max: f64, steps: usize) -> Trajectory {
        let grid = uniform_grid(lt_max / params.lambda_coupling, steps).unwrap();
        evolve_system(params, init, &grid, &IntegratorConfig::default()).unwrap()
    }

    fn reference_init(n_max: Option<usize>) -> InitialState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        InitialState::coherent(
            c(h, 0.0),
            c(h, 0.0),
            c(2.0, 0.0),
            n_max,
            MomentumDistribution::Sharp { p0: 1e-26 },
        )
        .unwrap()
    }

    fn vacuum_ground() -> InitialState {
        InitialState {
            c_e: c(0.0, 0.0),
            c_g: c(1.0, 0.0),
            field_weights: fock_weights(0, 3),
            momentum: MomentumDistribution::Sharp { p0: 1e-26 },
        }
    }

    #[test]
    fn resonant_inversion_is_rabi_flopping() {
        let params = resonant();
        for n in [0usize, 1, 4] {
            let init = InitialState {
                c_e: c(1.0, 0.0),
                c_g: c(0.0, 0.0),
                field_weights: fock_weights(n, n + 1),
                momentum: MomentumDistribution::Sharp { p0: 0.0 },
            };
            let traj = run(&params, &init, 20.0, 400);
            let w = atomic_inversion(&traj).unwrap();
            for (t, v) in traj.t_grid().iter().zip(&w.values) {
                let expect = (2.0 * params.lambda_coupling * ((n + 1) as f64).sqrt() * t).cos();
                assert!((v - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn vacuum_ground_is_static() {
        let params = PhysicalParams::reference();
        let traj = run(&params, &vacuum_ground(), 5.0, 20);
        assert!(dipole_moment(&traj, 1.0, 0.0).unwrap().values.iter().all(|&v| v == 0.0));
        assert!(atomic_inversion(&traj).unwrap().values.iter().all(|&v| v == -1.0));
        let (s1, s2) = quadrature_squeezing(&traj).unwrap();
        assert!(s1.values.iter().chain(&s2.values).all(|&v| v == 0.0));
        let p = photon_distribution(&traj, traj.t_grid()[7]).unwrap();
        assert_eq!(p[0], 1.0);
        assert!(matches!(mandel_q(&traj), Err(Error::UndefinedMandelQ { .. })));
        let m = field_moments(&traj, 0.0).unwrap();
        assert_eq!(m.m_a, c(0.0, 0.0));
        assert_eq!(m.m_n, c(0.0, 0.0));
    }

    #[test]
    fn initial_statistics_of_coherent_state() {
        let params = PhysicalParams::reference();
        let init = reference_init(Some(32));
        let traj = run(&params, &init, 1.0, 10);
        let p = photon_distribution(&traj, 0.0).unwrap();
        let mut pois = (-4.0f64).exp();
        for (n, pn) in p.iter().enumerate() {
            if n > 0 {
                pois *= 4.0 / n as f64;
            }
            assert!((pn - pois).abs() < 1e-10, "n={n}");
        }
        assert!(mandel_q(&traj).unwrap().values[0].abs() < 1e-9);
        let m = field_moments(&traj, 0.0).unwrap();
        assert!((m.m_a - c(2.0, 0.0)).norm() < 1e-10);
        assert!((m.m_a2 - c(4.0, 0.0)).norm() < 1e-9);
        assert!((m.m_n.re - 4.0).abs() < 1e-9);
        let (s1, s2) = m.squeezing();
        assert!(s1.abs() < 1e-9 && s2.abs() < 1e-9);
        let w = atomic_inversion(&traj).unwrap();
        assert!(w.values[0].abs() < 1e-12);
        let dip = dipole_moment(&traj, 1.0, 0.0).unwrap();
        let w = &init.field_weights;
        let expect: f64 = (0..w.len() - 1).map(|n| (w[n] * w[n + 1]).re).sum();
        assert!((dip.values[0] - expect).abs() < 1e-12);
    }

    #[test]
    fn complex_alpha_moments() {
        let params = PhysicalParams::reference();
        let alpha = c(1.2, -0.7);
        let init = InitialState {
            c_e: c(0.6, 0.0),
            c_g: c(0.0, 0.8),
            field_weights: coherent_weights(alpha, 30).unwrap(),
            momentum: MomentumDistribution::Sharp { p0: 0.0 },
        };
        let traj = run(&params, &init, 1.0, 4);
        let m = field_moments(&traj, 0.0).unwrap();
        assert!((m.m_a - alpha).norm() < 1e-10);
        assert!((m.m_a2 - alpha * alpha).norm() < 1e-10);
        assert!((m.m_n.re - alpha.norm_sqr()).abs() < 1e-10);
    }

    #[test]
    fn fock_state_has_q_minus_one() {
        let params = PhysicalParams::reference();
        let init = InitialState {
            c_e: c(1.0, 0.0),
            c_g: c(0.0, 0.0),
            field_weights: fock_weights(3, 5),
            momentum: MomentumDistribution::Sharp { p0: 0.0 },
        };
        let traj = run(&params, &init, 1.0, 4);
        assert!((mandel_q(&traj).unwrap().values[0] + 1.0).abs() < 1e-12);
    }

    /// ρ_field = Tr_atom Σ_nodes |ψ⟩⟨ψ| built explicitly, then Tr(ρ O) by matrix products.
    fn density_matrix_moments(traj: &Trajectory, k: usize) -> (Complex64, Complex64, f64, f64) {
        let dim = traj.manifold_count() + 1;
        let zero = c(0.0, 0.0);
        let mut rho = vec![vec![zero; dim]; dim];
        for node in traj.nodes() {
            let (e, g) = node.photon_amplitudes(k);
            for i in 0..dim {
                for j in 0..dim {
                    rho[i][j] += e[i] * e[j].conj() + g[i] * g[j].conj();
                }
            }
        }
        let mut a = vec![vec![zero; dim]; dim];
        for n in 1..dim {
            a[n - 1][n] = c((n as f64).sqrt(), 0.0);
        }
        let mul = |x: &Vec<Vec<Complex64>>, y: &Vec<Vec<Complex64>>| {
            let mut z = vec![vec![zero; dim]; dim];
            for i in 0..dim {
                for l in 0..dim {
                    for j in 0..dim {
                        z[i][j] += x[i][l] * y[l][j];
                    }
                }
            }
            z
        };
        let adag: Vec<Vec<Complex64>> = (0..dim).map(|i| (0..dim).map(|j| a[j][i].conj()).collect()).collect();
        let trace = |op: &Vec<Vec<Complex64>>| {
            let prod = mul(&rho, op);
            (0..dim).map(|i| prod[i][i]).sum::<Complex64>()
        };
        let n_op = mul(&adag, &a);
        let n2_op = mul(&n_op, &n_op);
        (trace(&a), trace(&mul(&a, &a)), trace(&n_op).re, trace(&n2_op).re)
    }

    #[test]
    fn moments_match_density_matrix_oracle() {
        let params = PhysicalParams::reference();
        let init = reference_init(Some(32));
        let traj = run(&params, &init, 1.0, 10);
        let k = traj.len() - 1;
        let (a, a2, n1, n2) = density_matrix_moments(&traj, k);
        let m = field_moments_at(&traj, k);
        assert!((m.m_a - a).norm() < 1e-8);
        assert!((m.m_a2 - a2).norm() < 1e-8);
        assert!((m.m_n.re - n1).abs() < 1e-8);
        let (p1, p2) = photon_moments(&photon_distribution_at(&traj, k));
        assert!((p1 - n1).abs() < 1e-8 && (p2 - n2).abs() < 1e-8);
        assert_eq!(m.m_adag, m.m_a.conj());
        assert_eq!(m.m_adag2, m.m_a2.conj());
    }

    #[test]
    fn as_printed_moments_differ_from_exact() {
        let params = PhysicalParams::reference();
        let traj = run(&params, &reference_init(Some(32)), 1.0, 4);
        let printed = field_moments_as_printed(&traj, 0.0).unwrap();
        let exact = field_moments(&traj, 0.0).unwrap();
        assert!((printed.m_adag2 - printed.m_a2.conj()).norm() > 1e-6);
        assert!(printed.m_n.im.abs() > 1e-6 || (printed.m_n - exact.m_n).norm() > 1e-6);
        // ⟨a⟩ misses only the |g,0⟩–|g,1⟩ coherence
        let missing = traj.nodes()[0].psi_g0.conj() * traj.nodes()[0].manifolds[0][0].psi2;
        assert!((printed.m_a + missing - exact.m_a).norm() < 1e-12);
    }

    #[test]
    fn reference_run_properties() {
        let params = PhysicalParams::reference();
        let traj = run(&params, &reference_init(None), 25.0, 500);
        let w = atomic_inversion(&traj).unwrap();
        assert!(w.values.iter().all(|v| v.abs() <= 1.0 + 1e-12));
        let q = mandel_q(&traj).unwrap();
        assert!(q.values.iter().all(|&v| v >= -1.0));
        let (s1, s2) = quadrature_squeezing(&traj).unwrap();
        for (a, b) in s1.values.iter().zip(&s2.values) {
            assert!((a + 1.0) * (b + 1.0) >= 1.0 - 1e-8);
        }
        for k in 0..traj.len() {
            let total: f64 = photon_distribution_at(&traj, k).iter().sum();
            assert!((total - 1.0).abs() < 1e-8);
        }
        let dip = dipole_moment(&traj, 1.0, 0.0).unwrap();
        let w0 = &traj.init().field_weights;
        let bound = 2.0 * (0..w0.len() - 1).map(|n| w0[n].norm() * w0[n + 1].norm()).sum::<f64>();
        assert!(dip.values.iter().all(|v| v.abs() <= bound.max(1.0) + 1e-12));
    }

    #[test]
    fn sharp_momentum_has_no_spread() {
        let params = PhysicalParams::reference();
        let traj = run(&params, &reference_init(Some(32)), 5.0, 50);
        assert!(momentum_diffusion(&traj).unwrap().values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn uncoupled_gaussian_keeps_its_width() {
        let params = PhysicalParams {
            lambda_coupling: 1e-30,
            ..PhysicalParams::reference()
        };
        let sigma = 1e-27;
        let init = InitialState::coherent(
            c(0.6, 0.0),
            c(0.8, 0.0),
            c(1.0, 0.0),
            None,
            MomentumDistribution::Gaussian {
                center: 1e-26,
                sigma,
                nodes: 12,
            },
        )
        .unwrap();
        let grid = uniform_grid(1e-6, 10).unwrap();
        let traj = evolve_system(&params, &init, &grid, &IntegratorConfig::default()).unwrap();
        for v in momentum_diffusion(&traj).unwrap().values {
            assert!((v - sigma).abs() < 1e-10 * sigma);
        }
    }

    #[test]
    fn estimator_gravity_free_closed_form() {
        let params = resonant();
        let est = collapse_revival_times(&params, 0.0, 4.0, 1).unwrap();
        let tc = 1.0 / (7f64.sqrt() - 3f64.sqrt());
        let tr = 2.0 * std::f64::consts::PI / (5f64.sqrt() - 2.0);
        assert!((est.lambda_t_c() - tc).abs() < 1e-9 * tc);
        assert!((est.lambda_t_r() - tr).abs() < 1e-9 * tr);
        let est2 = collapse_revival_times(&params, 0.0, 4.0, 2).unwrap();
        assert!((est2.t_r - 2.0 * est.t_r).abs() < 1e-9 * est.t_r);
    }

    #[test]
    fn estimator_grows_with_detuning() {
        let mut last = (0.0, 0.0);
        for delta0 in [1e7, 3e7, 1e8, 3e8, 1e9] {
            let params = PhysicalParams {
                g_accel: 0.0,
                delta0_override: Some(delta0),
                ..PhysicalParams::reference()
            };
            let est = collapse_revival_times(&params, 0.0, 4.0, 1).unwrap();
            assert!(est.t_c > last.0 && est.t_r > last.1);
            last = (est.t_c, est.t_r);
        }
    }

    #[test]
    fn estimator_rejects_bad_input() {
        let params = PhysicalParams::reference();
        assert!(collapse_revival_times(&params, 0.0, 0.0, 1).is_err());
        assert!(collapse_revival_times(&params, 0.0, 4.0, 0).is_err());
    }

    #[test]
    fn series_helpers() {
        let params = resonant();
        let s = ObservableSeries::new(
            ObservableKind::MandelQ,
            vec![0.0, 1.0, 2.0, 3.0],
            vec![0.0, -1.0, 0.5, -2.0],
            params,
        )
        .unwrap();
        assert_eq!(s.first_local_minimum(), Some((params.lambda_coupling, -1.0)));
        assert_eq!(s.global_minimum(), Some((3.0 * params.lambda_coupling, -2.0)));
        assert!(ObservableSeries::new(ObservableKind::S1, vec![0.0], vec![f64::NAN], params).is_err());
        assert!(ObservableSeries::new(ObservableKind::S1, vec![0.0], vec![], params).is_err());
        for k in ObservableKind::ALL {
            assert_eq!(ObservableKind::from_name(k.name()), Some(k));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_states_respect_bounds(
            theta in 0.0f64..std::f64::consts::PI,
            ar in -1.5f64..1.5, ai in -1.5f64..1.5,
            delta0 in -5e7f64..5e7,
        ) {
            let params = PhysicalParams { delta0_override: Some(delta0), ..PhysicalParams::reference() };
            let init = InitialState::coherent(
                c(theta.cos(), 0.0), c(0.0, theta.sin()), c(ar, ai), None,
                MomentumDistribution::Sharp { p0: 0.0 },
            ).unwrap();
            let traj = run(&params, &init, 3.0, 30);
            let w = atomic_inversion(&traj).unwrap();
            prop_assert!(w.values.iter().all(|v| v.abs() <= 1.0 + 1e-10));
            let (s1, s2) = quadrature_squeezing(&traj).unwrap();
            for (a, b) in s1.values.iter().zip(&s2.values) {
                prop_assert!((a + 1.0) * (b + 1.0) >= 1.0 - 1e-8);
            }
            if ar.hypot(ai) > 0.1 {
                prop_assert!(mandel_q(&traj).unwrap().values.iter().all(|&v| v >= -1.0 - 1e-12));
            }
            for k in 0..traj.len() {
                let m = field_moments_at(&traj, k);
                prop_assert_eq!(m.m_adag, m.m_a.conj());
                let total: f64 = photon_distribution_at(&traj, k).iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-8);
            }
        }
    }
}
