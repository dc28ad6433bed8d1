use std::f64::consts::PI;

use num_complex::Complex64;

use super::{complex_gamma, kummer_1f1, recip_gamma, SeriesControl};
use crate::error::SpecialFnError;

/// Hermite function H_ν(z) of complex order,
///
/// H_ν(z) = 2^ν √π [ ₁F₁(−ν/2; ½; z²)/Γ((1−ν)/2) − 2z ₁F₁((1−ν)/2; 3/2; z²)/Γ(−ν/2) ],
///
/// which reduces to the Hermite polynomial for non-negative integer ν.
///
/// For Re ν ≤ −½ with z in the sector |arg z| ≤ π/4 the two terms cancel to
/// many digits (H_ν is the recessive solution there), so the same function is
/// evaluated from H_ν(z) = Γ(−ν)⁻¹ ∫₀^∞ e^{−t²−2tz} t^{−ν−1} dt instead.
pub fn hermite_complex(nu: Complex64, z: Complex64, ctrl: &SeriesControl) -> Result<Complex64, SpecialFnError> {
    ctrl.validate()?;
    if nu.re <= -0.5 && nu.im.abs() <= INTEGRAL_MAX_IM && z.re >= z.im.abs() {
        return Ok(hermite_integral(nu, z));
    }
    hermite_series(nu, z, ctrl)
}

fn hermite_series(nu: Complex64, z: Complex64, ctrl: &SeriesControl) -> Result<Complex64, SpecialFnError> {
    // The two parts cancel for Re z² > 0, so each is summed to machine precision.
    let inner = SeriesControl {
        rel_tol: f64::EPSILON,
        ..*ctrl
    };
    let ctrl = &inner;
    let z2 = z * z;
    let half = Complex64::new(0.5, 0.0);
    let r_even = recip_gamma((1.0 - nu) / 2.0);
    let r_odd = recip_gamma(-nu / 2.0);

    let even = if r_even.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        kummer_1f1(-nu / 2.0, half, z2, ctrl)? * r_even
    };
    let odd = if r_odd.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        2.0 * z * kummer_1f1((1.0 - nu) / 2.0, Complex64::new(1.5, 0.0), z2, ctrl)? * r_odd
    };
    let prefactor = (nu * std::f64::consts::LN_2).exp() * PI.sqrt();
    Ok(prefactor * (even - odd))
}

const INTEGRAL_MAX_IM: f64 = 8.0;

/// Trapezoid rule in t = eˢ; the integrand is entire in s and decays
/// double-exponentially on the right and like e^{Re ν·|s|} on the left.
fn hermite_integral(nu: Complex64, z: Complex64) -> Complex64 {
    let h = 0.04 / (nu.im.abs() / 2.5).max(1.0);
    let s_lo = f64::EPSILON.ln() / -nu.re - 1.0;
    let s_hi = 4.0;
    let steps = ((s_hi - s_lo) / h).ceil() as usize;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=steps {
        let s = s_lo + k as f64 * h;
        let t = s.exp();
        sum += (-t * t - 2.0 * z * t - nu * s).exp();
    }
    // Γ(−ν) has no poles for Re ν < 0.
    sum * h / complex_gamma(-nu).expect("Re(-nu) > 0")
}
