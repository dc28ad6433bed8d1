//! Complex gamma, Kummer ₁F₁ and Hermite functions of complex order.

mod gamma;
mod hermite;
mod kummer;

pub use gamma::{complex_gamma, recip_gamma};
pub use hermite::hermite_complex;
pub use kummer::kummer_1f1;

use num_complex::Complex64;

use crate::error::SpecialFnError;

/// Convergence control for the power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<(), SpecialFnError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-6) {
            return Err(SpecialFnError::InvalidControl(format!(
                "rel_tol must lie in (0, 1e-6), got {}",
                self.rel_tol
            )));
        }
        if self.max_terms < 100 {
            return Err(SpecialFnError::InvalidControl(format!(
                "max_terms must be >= 100, got {}",
                self.max_terms
            )));
        }
        Ok(())
    }
}

pub(crate) fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}
