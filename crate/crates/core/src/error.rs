use num_complex::Complex64;
use thiserror::Error;

/// Failures of the special-function evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("gamma function pole at z = {0}")]
    Pole(Complex64),
    #[error("series did not converge within {terms} terms (last term magnitude {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },
    #[error("series overflowed after {terms} terms")]
    Overflow { terms: usize },
    #[error("series lost precision: largest term {max_term:e} against sum {sum:e}")]
    PrecisionLoss { max_term: f64, sum: f64 },
    #[error("parameter b = {0} is a non-positive integer")]
    InvalidDenominator(Complex64),
    #[error("invalid series control: {0}")]
    InvalidControl(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("effective mass undefined: recoil frequency is zero, no detuning override, and p = {p:e}")]
    UndefinedMass { p: f64 },

    #[error("coherent truncation at n_max = {n_max} leaves tail mass {tail:e} (bound {bound:e})")]
    Truncation { n_max: usize, tail: f64, bound: f64 },

    #[error(transparent)]
    Special(#[from] SpecialFnError),

    #[error("step size underflow at t = {t:e} s (h = {h:e} s)")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integration exceeded {max_steps} steps before t = {t:e} s")]
    TooManySteps { t: f64, max_steps: usize },

    #[error("manifold n = {n}, momentum node {node}: {source}")]
    Manifold {
        n: usize,
        node: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("analytic parametrisation is singular for q·g = {qg:e}; use the ODE engine")]
    SingularParametrization { qg: f64 },

    #[error("analytic constants degenerate: |C| = {magnitude:e}")]
    DegenerateConstants { magnitude: f64 },

    #[error("Mandel Q undefined: mean photon number is zero at t = {t:e} s")]
    UndefinedMandelQ { t: f64 },

    #[error("degenerate collapse/revival estimate: {0}")]
    DegenerateEstimate(String),

    #[error("time {t:e} s is not a grid time of the trajectory")]
    OffGrid { t: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("config error at line {line}{}: {msg}", key.as_ref().map(|k| format!(" (key `{k}`)")).unwrap_or_default())]
    Config {
        line: usize,
        key: Option<String>,
        msg: String,
    },

    #[error("{0}")]
    Conflict(String),

    #[error("I/O error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn config(line: usize, key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            line,
            key: Some(key.into()),
            msg: msg.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            msg: err.to_string(),
        }
    }

    /// Process exit code used by the CLI: 2 config, 3 numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::Config { .. }
            | Error::Conflict(_)
            | Error::SingularParametrization { .. }
            | Error::InvalidGrid(_)
            | Error::OffGrid { .. }
            | Error::Special(
                SpecialFnError::Pole(_) | SpecialFnError::InvalidDenominator(_) | SpecialFnError::InvalidControl(_),
            ) => 2,
            Error::Io { .. } => 4,
            Error::Manifold { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
