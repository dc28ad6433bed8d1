//! Direct integration of the coupled amplitude equations of each manifold
//!
//!   ψ̇₁ = −iλ√(n+1) e^{+iΦ(t)} ψ₂,   ψ̇₂ = −iλ√(n+1) e^{−iΦ(t)} ψ₁,
//!
//! where Φ(t) is the accumulated detuning phase of [`accumulated_phase`].

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{integrate, IntegratorConfig};
use crate::model::{
    accumulated_phase, detuning_delta0, initial_amplitudes, InitialState, MomentumDistribution, MomentumNode,
    PhysicalParams,
};

/// Amplitudes of |e,n⟩ (`psi1`) and |g,n+1⟩ (`psi2`) at one momentum and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudePair {
    pub n: usize,
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl AmplitudePair {
    pub fn new(n: usize, psi1: Complex64, psi2: Complex64) -> Self {
        AmplitudePair { n, psi1, psi2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }

    pub fn scaled(self, s: Complex64) -> Self {
        AmplitudePair {
            psi1: self.psi1 * s,
            psi2: self.psi2 * s,
            ..self
        }
    }
}

/// `steps + 1` uniformly spaced times on [0, t_end], with the endpoint exact.
pub fn uniform_grid(t_end: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidGrid(format!("end time must be positive, got {t_end}")));
    }
    if steps == 0 {
        return Err(Error::InvalidGrid("need at least one step".into()));
    }
    Ok((0..=steps)
        .map(|k| {
            if k == steps {
                t_end
            } else {
                t_end * k as f64 / steps as f64
            }
        })
        .collect())
}

/// A trajectory grid must start at 0 and be strictly increasing.
pub fn validate_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        None => return Err(Error::InvalidGrid("grid is empty".into())),
        Some(&t0) if t0 != 0.0 => return Err(Error::InvalidGrid(format!("grid must start at 0, starts at {t0}"))),
        _ => {}
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidGrid("grid contains non-finite times".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid is not strictly increasing".into()));
    }
    Ok(())
}

/// Evolve one manifold from `psi0` given at `t_grid[0]`; returns the pair at every grid time.
///
/// The grid may run backwards in time, which is how time-reversal checks are done.
pub fn evolve_manifold(
    params: &PhysicalParams,
    p: f64,
    n: usize,
    psi0: AmplitudePair,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<AmplitudePair>> {
    let delta0 = detuning_delta0(params, p)?;
    evolve_with_detuning(params, delta0, n, psi0, t_grid, cfg)
}

fn evolve_with_detuning(
    params: &PhysicalParams,
    delta0: f64,
    n: usize,
    psi0: AmplitudePair,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<AmplitudePair>> {
    let Some(&t0) = t_grid.first() else {
        return Ok(Vec::new());
    };
    if ![psi0.psi1, psi0.psi2]
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        return Err(Error::InvalidParameter("initial amplitudes are not finite".into()));
    }
    if psi0.norm_sqr() == 0.0 {
        return Ok(vec![psi0; t_grid.len()]);
    }
    let kappa = params.lambda_coupling * ((n + 1) as f64).sqrt();
    let qg = params.qg_scalar();
    let convention = params.phase_convention;
    let minus_i_kappa = Complex64::new(0.0, -kappa);
    let rhs = move |t: f64, y: &[Complex64; 2]| {
        let phase = Complex64::cis(accumulated_phase(convention, delta0, qg, t));
        [minus_i_kappa * phase * y[1], minus_i_kappa * phase.conj() * y[0]]
    };
    let (states, _) = integrate(rhs, t0, [psi0.psi1, psi0.psi2], t_grid, cfg)?;
    Ok(states
        .into_iter()
        .map(|[psi1, psi2]| AmplitudePair { n, psi1, psi2 })
        .collect())
}

/// Amplitudes of one momentum node over the time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeTrack {
    pub momentum: MomentumNode,
    pub delta0: f64,
    /// Decoupled |g,0⟩ amplitude, constant in time.
    pub psi_g0: Complex64,
    /// `manifolds[n][k]` is manifold n at grid time k.
    pub manifolds: Vec<Vec<AmplitudePair>>,
}

impl NodeTrack {
    /// Population of this node at grid time `k`.
    pub fn population(&self, k: usize) -> f64 {
        self.manifolds.iter().map(|m| m[k].norm_sqr()).sum::<f64>() + self.psi_g0.norm_sqr()
    }

    /// Photon-number basis amplitudes at grid time `k`: (excited, ground), both of
    /// length n_max + 2, where `excited[n]` ↔ |e,n⟩ and `ground[n]` ↔ |g,n⟩.
    pub fn photon_amplitudes(&self, k: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let len = self.manifolds.len() + 1;
        let mut excited = vec![Complex64::new(0.0, 0.0); len];
        let mut ground = vec![Complex64::new(0.0, 0.0); len];
        ground[0] = self.psi_g0;
        for (n, m) in self.manifolds.iter().enumerate() {
            excited[n] = m[k].psi1;
            ground[n + 1] = m[k].psi2;
        }
        (excited, ground)
    }
}

/// Immutable record of an evolution: grid × momentum nodes × manifolds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    t_grid: Vec<f64>,
    nodes: Vec<NodeTrack>,
    params: PhysicalParams,
    init: InitialState,
}

impl Trajectory {
    /// Assemble a trajectory from precomputed node tracks, checking shapes and the grid.
    pub fn from_parts(
        t_grid: Vec<f64>,
        nodes: Vec<NodeTrack>,
        params: PhysicalParams,
        init: InitialState,
    ) -> Result<Self> {
        validate_grid(&t_grid)?;
        for node in &nodes {
            for (n, m) in node.manifolds.iter().enumerate() {
                if m.len() != t_grid.len() {
                    return Err(Error::InvalidGrid(format!(
                        "manifold {n} has {} samples for {} grid times",
                        m.len(),
                        t_grid.len()
                    )));
                }
            }
        }
        Ok(Trajectory {
            t_grid,
            nodes,
            params,
            init,
        })
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn nodes(&self) -> &[NodeTrack] {
        &self.nodes
    }

    pub fn params(&self) -> &PhysicalParams {
        &self.params
    }

    pub fn init(&self) -> &InitialState {
        &self.init
    }

    pub fn len(&self) -> usize {
        self.t_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_grid.is_empty()
    }

    /// Number of manifolds per node (n_max + 1).
    pub fn manifold_count(&self) -> usize {
        self.nodes.first().map_or(0, |n| n.manifolds.len())
    }

    /// Index of an exact grid time.
    pub fn time_index(&self, t: f64) -> Result<usize> {
        self.t_grid
            .binary_search_by(|x| x.total_cmp(&t))
            .map_err(|_| Error::OffGrid { t })
    }

    /// Total norm Σ_nodes Σ_n (|ψ₁|²+|ψ₂|²) + |ψ_{g,0}|² at grid time `k`.
    pub fn norm_at(&self, k: usize) -> f64 {
        self.nodes.iter().map(|node| node.population(k)).sum()
    }

    /// max_k |norm(k) − 1|
    pub fn max_norm_error(&self) -> f64 {
        (0..self.len())
            .map(|k| (self.norm_at(k) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// max_k |norm(k) − norm(0)|
    pub fn max_norm_drift(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let n0 = self.norm_at(0);
        (0..self.len())
            .map(|k| (self.norm_at(k) - n0).abs())
            .fold(0.0, f64::max)
    }

    /// Largest per-manifold norm change over the grid.
    pub fn max_manifold_drift(&self) -> f64 {
        self.nodes
            .iter()
            .flat_map(|node| node.manifolds.iter())
            .map(|m| {
                let n0 = m[0].norm_sqr();
                m.iter().map(|p| (p.norm_sqr() - n0).abs()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// Evolve every manifold at every momentum node.
///
/// Nodes that share a bit-identical Δ₀ are integrated once with unit momentum
/// amplitude and rescaled. Results are assembled in (node, n) order, so output
/// is independent of thread scheduling.
pub fn evolve_system(
    params: &PhysicalParams,
    init: &InitialState,
    t_grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    params.validate()?;
    init.validate()?;
    cfg.validate()?;
    validate_grid(t_grid)?;

    let nodes = init.momentum.nodes()?;
    let unit = {
        let sharp = InitialState {
            momentum: MomentumDistribution::Sharp { p0: 0.0 },
            ..init.clone()
        };
        initial_amplitudes(&sharp)?.remove(0)
    };

    let detunings: Vec<f64> = nodes
        .iter()
        .map(|node| detuning_delta0(params, node.p))
        .collect::<Result<_>>()?;
    // distinct Δ₀ values, keyed by bit pattern, each remembering its first node
    let mut distinct: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, d) in detunings.iter().enumerate() {
        distinct.entry(d.to_bits()).or_insert(i);
    }
    let distinct: Vec<(u64, usize)> = distinct.into_iter().collect();

    let jobs: Vec<(usize, usize)> = (0..distinct.len())
        .flat_map(|d| (0..unit.pairs.len()).map(move |n| (d, n)))
        .collect();
    let evolved: Vec<Vec<AmplitudePair>> = jobs
        .par_iter()
        .map(|&(d, n)| {
            let (bits, node_idx) = distinct[d];
            evolve_with_detuning(params, f64::from_bits(bits), n, unit.pairs[n], t_grid, cfg).map_err(|e| {
                Error::Manifold {
                    n,
                    node: node_idx,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<_>>()?;

    let per_detuning = unit.pairs.len();
    let tracks = nodes
        .iter()
        .zip(&detunings)
        .map(|(node, &delta0)| {
            let d = distinct
                .binary_search_by_key(&delta0.to_bits(), |&(bits, _)| bits)
                .expect("every detuning was registered");
            let phi = Complex64::new(node.weight.sqrt(), 0.0);
            let manifolds = evolved[d * per_detuning..(d + 1) * per_detuning]
                .iter()
                .map(|series| series.iter().map(|pair| pair.scaled(phi)).collect())
                .collect();
            NodeTrack {
                momentum: *node,
                delta0,
                psi_g0: unit.psi_g0 * phi,
                manifolds,
            }
        })
        .collect();

    Trajectory::from_parts(t_grid.to_vec(), tracks, *params, init.clone())
}
