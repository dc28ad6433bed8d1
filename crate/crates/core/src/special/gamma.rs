use std::f64::consts::PI;

use num_complex::Complex64;

use super::is_nonpositive_integer;
use crate::error::SpecialFnError;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// sin(πz) with the real part reduced modulo 2 first.
fn sin_pi(z: Complex64) -> Complex64 {
    let r = z.re - 2.0 * (z.re / 2.0).round();
    (Complex64::new(r, z.im) * PI).sin()
}

/// Lanczos sum, valid for Re z ≥ 0.5.
fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Γ(z) for complex z; reflection formula for Re z < 0.5.
pub fn complex_gamma(z: Complex64) -> Result<Complex64, SpecialFnError> {
    if is_nonpositive_integer(z) {
        return Err(SpecialFnError::Pole(z));
    }
    if z.re < 0.5 {
        Ok(PI / (sin_pi(z) * lanczos(1.0 - z)))
    } else {
        Ok(lanczos(z))
    }
}

/// 1/Γ(z), entire; exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re < 0.5 {
        sin_pi(z) * lanczos(1.0 - z) / PI
    } else {
        1.0 / lanczos(z)
    }
}
