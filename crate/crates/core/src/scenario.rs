//! Scenario configuration, figure presets and run orchestration.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{analytic_trajectory, cross_validate, AnalyticVariant, CrossValidationReport};
use crate::csv::{export_csv_with, export_distribution};
use crate::dynamics::{evolve_system, uniform_grid, Trajectory};
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::model::{
    coherent_cutoff, coherent_weights, fock_weights, InitialState, MomentumDistribution, PhaseConvention,
    PhysicalParams,
};
use crate::observables::{
    atomic_inversion, collapse_revival_times, dipole_moment, mandel_q, momentum_diffusion, photon_distribution_at,
    quadrature_squeezing, CollapseRevivalEstimate, ObservableKind, ObservableSeries,
};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "JCGRAV_OUTPUT_DIR";
const DEFAULT_OUTPUT_DIR: &str = "jcgrav-out";

/// Evaluation time of the photon-distribution figures (s).
pub const DISTRIBUTION_TIME: f64 = 1.4e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
}

impl Preset {
    pub const ALL: [Preset; 10] = [
        Preset::Fig1a,
        Preset::Fig1b,
        Preset::Fig2a,
        Preset::Fig2b,
        Preset::Fig3a,
        Preset::Fig3b,
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig5a,
        Preset::Fig5b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1a => "fig1a",
            Preset::Fig1b => "fig1b",
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
            Preset::Fig4a => "fig4a",
            Preset::Fig4b => "fig4b",
            Preset::Fig5a => "fig5a",
            Preset::Fig5b => "fig5b",
        }
    }

    /// The `b` variants switch gravity off through θ = 0.
    pub fn with_gravity(self) -> bool {
        matches!(
            self,
            Preset::Fig1a | Preset::Fig2a | Preset::Fig3a | Preset::Fig4a | Preset::Fig5a
        )
    }

    pub fn description(self) -> &'static str {
        match self {
            Preset::Fig1a | Preset::Fig1b => "atomic dipole moment",
            Preset::Fig2a | Preset::Fig2b => "atomic inversion with collapse/revival estimate",
            Preset::Fig3a | Preset::Fig3b => "photon-number distribution at t = 1.4e-6 s",
            Preset::Fig4a | Preset::Fig4b => "Mandel Q parameter",
            Preset::Fig5a | Preset::Fig5b => "quadrature squeezing S1, S2",
        }
    }

    pub fn outputs(self) -> BTreeSet<Output> {
        use ObservableKind::*;
        let list: &[Output] = match self {
            Preset::Fig1a | Preset::Fig1b => &[Output::Series(Dipole)],
            Preset::Fig2a | Preset::Fig2b => &[Output::Series(Inversion), Output::CollapseRevival],
            Preset::Fig3a | Preset::Fig3b => &[Output::PhotonDistribution],
            Preset::Fig4a | Preset::Fig4b => &[Output::Series(MandelQ)],
            Preset::Fig5a | Preset::Fig5b => &[Output::Series(S1), Output::Series(S2)],
        };
        list.iter().copied().collect()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown preset `{s}` (expected fig1a..fig5b)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Ode,
    Analytic,
    /// Observables from the ODE engine plus an analytic cross-validation table.
    Both,
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ode" => Ok(Engine::Ode),
            "analytic" => Ok(Engine::Analytic),
            "both" => Ok(Engine::Both),
            _ => Err(format!("unknown engine `{s}` (expected ode, analytic or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Series(ObservableKind),
    PhotonDistribution,
    CollapseRevival,
}

impl FromStr for Output {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "photon_distribution" => Ok(Output::PhotonDistribution),
            "collapse_revival" => Ok(Output::CollapseRevival),
            other => ObservableKind::from_name(other)
                .map(Output::Series)
                .ok_or_else(|| format!("unknown output `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub preset: Option<Preset>,
    pub params: PhysicalParams,
    pub init: InitialState,
    /// End of the grid in λt.
    pub t_max_scaled: f64,
    /// End of the grid in seconds; takes precedence over `t_max_scaled`.
    pub t_end_seconds: Option<f64>,
    pub n_time_steps: usize,
    pub engine: Engine,
    pub variant: AnalyticVariant,
    pub outputs: BTreeSet<Output>,
    pub output_path: PathBuf,
    pub dipole_mag: f64,
    pub dipole_phase: f64,
    pub revival_order: u32,
    pub integrator: IntegratorConfig,
}

/// Output directory from the environment, or the built-in default.
pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

fn reference_init(p0: f64, n_max: usize) -> InitialState {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    InitialState {
        c_e: h,
        c_g: h,
        field_weights: coherent_weights(Complex64::new(2.0, 0.0), n_max)
            .expect("n_max = 32 holds a mean-4 Poisson tail"),
        momentum: MomentumDistribution::Sharp { p0 },
    }
}

impl ScenarioConfig {
    /// Reference parameters, α = 2, c_e = c_g = 1/√2, n_max = 32, λt ∈ [0, 25] in 2000 steps.
    pub fn base() -> Self {
        let params = PhysicalParams::reference();
        ScenarioConfig {
            preset: None,
            init: reference_init(params.p0, 32),
            params,
            t_max_scaled: 25.0,
            t_end_seconds: None,
            n_time_steps: 2000,
            engine: Engine::Ode,
            variant: AnalyticVariant::CorrectedBeta,
            outputs: [
                ObservableKind::Dipole,
                ObservableKind::Inversion,
                ObservableKind::MandelQ,
                ObservableKind::S1,
                ObservableKind::S2,
            ]
            .into_iter()
            .map(Output::Series)
            .collect(),
            output_path: default_output_dir(),
            dipole_mag: 1.0,
            dipole_phase: 0.0,
            revival_order: 1,
            integrator: IntegratorConfig::default(),
        }
    }

    pub fn preset(preset: Preset) -> Self {
        let mut cfg = Self::base();
        cfg.preset = Some(preset);
        if !preset.with_gravity() {
            cfg.params.theta = 0.0;
        }
        cfg.outputs = preset.outputs();
        if matches!(preset, Preset::Fig3a | Preset::Fig3b) {
            cfg.t_end_seconds = Some(DISTRIBUTION_TIME);
        }
        cfg
    }

    pub fn t_grid(&self) -> Result<Vec<f64>> {
        let t_end = match self.t_end_seconds {
            Some(t) => t,
            None => self.t_max_scaled / self.params.lambda_coupling,
        };
        uniform_grid(t_end, self.n_time_steps)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.init.validate()?;
        self.integrator.validate()?;
        if self.n_time_steps == 0 {
            return Err(Error::InvalidParameter("steps must be >= 1".into()));
        }
        if self.t_end_seconds.is_none() && !(self.t_max_scaled > 0.0 && self.t_max_scaled.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_max_scaled must be > 0, got {}",
                self.t_max_scaled
            )));
        }
        if self.engine == Engine::Analytic && !(self.params.qg_scalar() > 0.0) {
            return Err(Error::SingularParametrization {
                qg: self.params.qg_scalar(),
            });
        }
        if self.revival_order < 1 {
            return Err(Error::InvalidParameter("revival_order must be >= 1".into()));
        }
        Ok(())
    }

    /// Parse a `key=value` config. Blank lines and `#` comments are skipped; a
    /// `preset` key is applied first wherever it appears, other keys override it.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                key: None,
                msg: format!("expected key=value, found `{content}`"),
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if let Some((first, ..)) = entries.iter().find(|(_, key, _)| *key == k) {
                return Err(Error::config(
                    line,
                    k,
                    format!("duplicate key (first set on line {first})"),
                ));
            }
            entries.push((line, k, v));
        }

        let mut cfg = match entries.iter().find(|(_, k, _)| k == "preset") {
            Some((line, k, v)) => Self::preset(v.parse().map_err(|e: String| Error::config(*line, k.as_str(), e))?),
            None => Self::base(),
        };
        let mut field = FieldSpec::default();
        let mut atom: (Option<Complex64>, Option<Complex64>) = (None, None);
        let mut momentum = MomentumSpec::default();

        for (line, key, value) in &entries {
            let line = *line;
            let err = |msg: String| Error::config(line, key.as_str(), msg);
            let num = || parse_f64(value).map_err(err);
            match key.as_str() {
                "preset" => {}
                "engine" => cfg.engine = value.parse().map_err(err)?,
                "variant" => {
                    cfg.variant = match value.as_str() {
                        "as_printed" => AnalyticVariant::AsPrinted,
                        "corrected_beta" => AnalyticVariant::CorrectedBeta,
                        _ => return Err(err(format!("unknown variant `{value}`"))),
                    }
                }
                "lambda" => cfg.params.lambda_coupling = num()?,
                "omega_c" => cfg.params.omega_c = num()?,
                "omega_eg" => cfg.params.omega_eg = num()?,
                "q" => cfg.params.q_wavenumber = num()?,
                "recoil_freq" => cfg.params.recoil_freq = num()?,
                "g" => cfg.params.g_accel = num()?,
                "theta" => cfg.params.theta = num()?,
                "p0" => cfg.params.p0 = num()?,
                "delta0" => cfg.params.delta0_override = if value == "none" { None } else { Some(num()?) },
                "phase_convention" => {
                    cfg.params.phase_convention = match value.as_str() {
                        "half_chirp" => PhaseConvention::HalfChirp,
                        "full_chirp" => PhaseConvention::FullChirp,
                        _ => return Err(err(format!("unknown phase convention `{value}`"))),
                    }
                }
                "c_e" => atom.0 = Some(parse_complex(value).map_err(err)?),
                "c_g" => atom.1 = Some(parse_complex(value).map_err(err)?),
                "alpha" => field.alpha = Some(parse_complex(value).map_err(err)?),
                "fock" => field.fock = Some(parse_usize(value).map_err(err)?),
                "n_max" => field.n_max = Some(parse_usize(value).map_err(err)?),
                "momentum" => {
                    momentum.gaussian = match value.as_str() {
                        "sharp" => false,
                        "gaussian" => true,
                        _ => return Err(err(format!("unknown momentum distribution `{value}`"))),
                    }
                }
                "sigma_p" => momentum.sigma = Some(num()?),
                "momentum_nodes" => momentum.nodes = Some(parse_usize(value).map_err(err)?),
                "t_max_scaled" => {
                    cfg.t_max_scaled = num()?;
                    cfg.t_end_seconds = None;
                }
                "t_end" => cfg.t_end_seconds = Some(num()?),
                "steps" => cfg.n_time_steps = parse_usize(value).map_err(err)?,
                "outputs" => {
                    cfg.outputs = value
                        .split(',')
                        .map(|s| s.trim())
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<Output>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(err)?
                }
                "out" => cfg.output_path = PathBuf::from(value),
                "dipole_mag" => cfg.dipole_mag = num()?,
                "dipole_phase" => cfg.dipole_phase = num()?,
                "revival_order" => cfg.revival_order = parse_usize(value).map_err(err)? as u32,
                "abs_tol" => cfg.integrator.abs_tol = num()?,
                "rel_tol" => cfg.integrator.rel_tol = num()?,
                "max_steps" => cfg.integrator.max_steps = parse_usize(value).map_err(err)?,
                _ => return Err(err("unknown key".to_string())),
            }
        }

        let line_of = |key: &str| entries.iter().find(|(_, k, _)| k == key).map_or(0, |(l, ..)| *l);
        if field.alpha.is_some() && field.fock.is_some() {
            return Err(Error::config(
                line_of("fock"),
                "fock",
                "`alpha` and `fock` are mutually exclusive",
            ));
        }
        if let (Some(c_e), Some(c_g)) = atom {
            cfg.init.c_e = c_e;
            cfg.init.c_g = c_g;
        } else if atom.0.is_some() || atom.1.is_some() {
            let key = if atom.0.is_some() { "c_e" } else { "c_g" };
            return Err(Error::config(line_of(key), key, "c_e and c_g must be given together"));
        }
        if let Some(n) = field.fock {
            let n_max = field.n_max.unwrap_or(n + 1);
            if n > n_max {
                return Err(Error::config(
                    line_of("n_max"),
                    "n_max",
                    format!("n_max must be >= fock = {n}"),
                ));
            }
            cfg.init.field_weights = fock_weights(n, n_max);
        } else if field.alpha.is_some() || field.n_max.is_some() {
            let alpha = field.alpha.unwrap_or(Complex64::new(2.0, 0.0));
            let n_max = field.n_max.unwrap_or_else(|| coherent_cutoff(alpha).max(32));
            cfg.init.field_weights = coherent_weights(alpha, n_max)
                .map_err(|e| Error::config(line_of("n_max").max(line_of("alpha")), "n_max", e.to_string()))?;
        }
        cfg.init.momentum = if momentum.gaussian {
            let sigma = momentum.sigma.unwrap_or(0.1 * cfg.params.p0.abs());
            MomentumDistribution::Gaussian {
                center: cfg.params.p0,
                sigma,
                nodes: momentum.nodes.unwrap_or(16),
            }
        } else {
            if momentum.sigma.is_some() || momentum.nodes.is_some() {
                return Err(Error::Conflict(
                    "sigma_p/momentum_nodes given without momentum=gaussian".into(),
                ));
            }
            MomentumDistribution::Sharp { p0: cfg.params.p0 }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

#[derive(Default)]
struct FieldSpec {
    alpha: Option<Complex64>,
    fock: Option<usize>,
    n_max: Option<usize>,
}

#[derive(Default)]
struct MomentumSpec {
    gaussian: bool,
    sigma: Option<f64>,
    nodes: Option<usize>,
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("expected a number, found `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("value must be finite, found `{s}`"))
    }
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    s.parse()
        .map_err(|_| format!("expected a non-negative integer, found `{s}`"))
}

/// `re` or `re,im`
fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_f64(re.trim())?, parse_f64(im.trim())?)),
        None => Ok(Complex64::new(parse_f64(s)?, 0.0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimumLocation {
    pub lambda_t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub preset: Option<Preset>,
    pub engine: Engine,
    pub n_max: usize,
    pub momentum_nodes: usize,
    pub grid_points: usize,
    pub t_end: f64,
    pub lambda_t_end: f64,
    /// max_t |norm(t) − norm(0)|
    pub norm_drift: f64,
    /// max_t |norm(t) − 1|
    pub norm_error: f64,
    pub wall_time_s: f64,
    pub mandel_q_first_minimum: Option<MinimumLocation>,
    pub mandel_q_global_minimum: Option<MinimumLocation>,
    pub collapse_revival: Option<CollapseRevivalEstimate>,
    pub cross_validation_max_roundtrip: Option<f64>,
    pub notes: Vec<String>,
    pub files: Vec<String>,
    pub params: PhysicalParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub trajectory: Trajectory,
    pub series: Vec<ObservableSeries>,
    /// (t, P(n)) at the last grid time.
    pub distribution: Option<(f64, Vec<f64>)>,
    pub estimate: Option<CollapseRevivalEstimate>,
    pub cross_validation: Option<CrossValidationReport>,
    pub summary: RunSummary,
}

/// Evolve once and derive every requested output; nothing is written.
pub fn compute_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let start = Instant::now();
    cfg.validate()?;
    let grid = cfg.t_grid()?;
    let mut notes = Vec::new();
    let traj = match cfg.engine {
        Engine::Analytic => analytic_trajectory(&cfg.params, &cfg.init, &grid, cfg.variant)?,
        Engine::Ode | Engine::Both => evolve_system(&cfg.params, &cfg.init, &grid, &cfg.integrator)?,
    };

    let mut series = Vec::new();
    let wants = |k: ObservableKind| cfg.outputs.contains(&Output::Series(k));
    if wants(ObservableKind::Dipole) {
        series.push(dipole_moment(&traj, cfg.dipole_mag, cfg.dipole_phase)?);
    }
    if wants(ObservableKind::Inversion) {
        series.push(atomic_inversion(&traj)?);
    }
    if wants(ObservableKind::MandelQ) {
        series.push(mandel_q(&traj)?);
    }
    if wants(ObservableKind::S1) || wants(ObservableKind::S2) {
        let (s1, s2) = quadrature_squeezing(&traj)?;
        for s in [s1, s2] {
            if wants(s.name) {
                series.push(s);
            }
        }
    }
    if wants(ObservableKind::DeltaP) {
        series.push(momentum_diffusion(&traj)?);
    }

    let distribution = cfg.outputs.contains(&Output::PhotonDistribution).then(|| {
        let k = traj.len() - 1;
        (traj.t_grid()[k], photon_distribution_at(&traj, k))
    });

    let estimate = if cfg.outputs.contains(&Output::CollapseRevival) {
        let n_mean: f64 = cfg
            .init
            .field_weights
            .iter()
            .enumerate()
            .map(|(n, w)| n as f64 * w.norm_sqr())
            .sum();
        let p = match cfg.init.momentum {
            MomentumDistribution::Sharp { p0 } => p0,
            MomentumDistribution::Gaussian { center, .. } => center,
        };
        Some(collapse_revival_times(&cfg.params, p, n_mean, cfg.revival_order)?)
    } else {
        None
    };

    let cross_validation = if cfg.engine == Engine::Both {
        if cfg.params.qg_scalar() > 0.0 {
            Some(cross_validate(&cfg.params, &cfg.init, &grid, cfg.variant)?)
        } else {
            notes.push("q·g = 0: analytic cross-validation skipped, ODE engine only".into());
            None
        }
    } else {
        None
    };

    let q = series.iter().find(|s| s.name == ObservableKind::MandelQ);
    let loc = |(lambda_t, value): (f64, f64)| MinimumLocation { lambda_t, value };
    let t_end = *grid.last().expect("grid is non-empty");
    let summary = RunSummary {
        preset: cfg.preset,
        engine: cfg.engine,
        n_max: cfg.init.n_max(),
        momentum_nodes: traj.nodes().len(),
        grid_points: grid.len(),
        t_end,
        lambda_t_end: cfg.params.lambda_coupling * t_end,
        norm_drift: traj.max_norm_drift(),
        norm_error: traj.max_norm_error(),
        wall_time_s: start.elapsed().as_secs_f64(),
        mandel_q_first_minimum: q.and_then(|s| s.first_local_minimum()).map(loc),
        mandel_q_global_minimum: q.and_then(|s| s.global_minimum()).map(loc),
        collapse_revival: estimate,
        cross_validation_max_roundtrip: cross_validation.as_ref().and_then(|r| r.max_roundtrip()),
        notes,
        files: Vec::new(),
        params: cfg.params,
    };
    Ok(ScenarioOutput {
        trajectory: traj,
        series,
        distribution,
        estimate,
        cross_validation,
        summary,
    })
}

/// Compute and write CSVs, reports and `summary.json` into `cfg.output_path`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput> {
    let mut out = compute_scenario(cfg)?;
    let dir = &cfg.output_path;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut extra = vec![
        ("n_max".to_string(), cfg.init.n_max().to_string()),
        ("engine".to_string(), format!("{:?}", cfg.engine).to_lowercase()),
        ("dipole_mag".to_string(), format!("{:e}", cfg.dipole_mag)),
        ("dipole_phase".to_string(), format!("{:e}", cfg.dipole_phase)),
    ];
    if let Some(p) = cfg.preset {
        extra.insert(0, ("preset".to_string(), p.to_string()));
    }
    let mut files = Vec::new();
    for s in &out.series {
        let path = dir.join(format!("{}.csv", s.name));
        export_csv_with(s, &extra, &path)?;
        files.push(path);
    }
    if let Some((t, probs)) = &out.distribution {
        let path = dir.join("photon_distribution.csv");
        export_distribution(*t, probs, &cfg.params, &extra, &path)?;
        files.push(path);
    }
    if let Some(est) = &out.estimate {
        let path = dir.join("collapse_revival.txt");
        std::fs::write(&path, est.report()).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    if let Some(report) = &out.cross_validation {
        let path = dir.join("cross_validation.txt");
        std::fs::write(&path, report.to_table()).map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    out.summary.files = files.iter().map(|p| p.display().to_string()).collect();
    let path = dir.join("summary.json");
    let json = serde_json::to_string_pretty(&out.summary).expect("summary serialises");
    std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(out)
}
