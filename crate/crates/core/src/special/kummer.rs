use num_complex::Complex64;

use super::{is_nonpositive_integer, SeriesControl};
use crate::error::SpecialFnError;

/// Consecutive small terms required before the series is declared converged.
const SMALL_RUN: usize = 3;

/// Fewest accurate digits tolerated before cancellation is reported (≈ 6).
const MIN_ACCURACY: f64 = 1e-6;

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z) = Σ (a)_k z^k / ((b)_k k!).
///
/// On the left half-plane the series is evaluated through Kummer's
/// transformation e^z ₁F₁(b−a; b; −z) unless `a` terminates the series.
pub fn kummer_1f1(a: Complex64, b: Complex64, z: Complex64, ctrl: &SeriesControl) -> Result<Complex64, SpecialFnError> {
    ctrl.validate()?;
    if is_nonpositive_integer(b) {
        return Err(SpecialFnError::InvalidDenominator(b));
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z.re < 0.0 && !is_nonpositive_integer(a) {
        return Ok(z.exp() * series(b - a, b, -z, ctrl)?);
    }
    series(a, b, z, ctrl)
}

fn series(a: Complex64, b: Complex64, z: Complex64, ctrl: &SeriesControl) -> Result<Complex64, SpecialFnError> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term: f64 = 1.0;
    let mut run = 0;
    for k in 0..ctrl.max_terms {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        let mag = term.norm();
        if !mag.is_finite() || !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(SpecialFnError::Overflow { terms: k + 1 });
        }
        max_term = max_term.max(mag);
        if mag == 0.0 {
            break;
        }
        if mag <= ctrl.rel_tol * sum.norm() {
            run += 1;
            if run >= SMALL_RUN {
                break;
            }
        } else {
            run = 0;
        }
        if k + 1 == ctrl.max_terms {
            return Err(SpecialFnError::NoConvergence {
                terms: ctrl.max_terms,
                last_term: mag,
            });
        }
    }
    if max_term * f64::EPSILON > MIN_ACCURACY * sum.norm() {
        return Err(SpecialFnError::PrecisionLoss {
            max_term,
            sum: sum.norm(),
        });
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn zero_argument() {
        for (a, b) in [(c(1.3, -2.0), c(0.5, 0.0)), (c(-4.0, 0.0), c(2.5, 1.0))] {
            assert_eq!(kummer_1f1(a, b, c(0.0, 0.0), &ctrl()).unwrap(), c(1.0, 0.0));
        }
    }

    #[test]
    fn exponential_identity() {
        let z = c(1.0, 2.0);
        let v = kummer_1f1(c(1.0, 0.0), c(1.0, 0.0), z, &ctrl()).unwrap();
        assert!((v - z.exp()).norm() / z.exp().norm() < 1e-10);
        let z = c(-3.0, 1.5);
        let v = kummer_1f1(c(1.0, 0.0), c(1.0, 0.0), z, &ctrl()).unwrap();
        assert!((v - z.exp()).norm() / z.exp().norm() < 1e-10);
    }

    #[test]
    fn terminating_polynomial() {
        let z = c(0.7, 0.7);
        let v = kummer_1f1(c(-1.0, 0.0), c(0.5, 0.0), z * z, &ctrl()).unwrap();
        let expected = 1.0 - 2.0 * z * z;
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn known_closed_form() {
        // ₁F₁(1; 2; z) = (e^z − 1)/z
        for z in [c(0.4, -1.1), c(-2.5, 0.3), c(6.0, 4.0)] {
            let v = kummer_1f1(c(1.0, 0.0), c(2.0, 0.0), z, &ctrl()).unwrap();
            let expected = (z.exp() - 1.0) / z;
            assert!((v - expected).norm() / expected.norm() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn pole_in_b_is_rejected() {
        let err = kummer_1f1(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0), &ctrl()).unwrap_err();
        assert_eq!(err, SpecialFnError::InvalidDenominator(c(-2.0, 0.0)));
    }

    #[test]
    fn nonconvergence_is_reported() {
        let tight = SeriesControl {
            rel_tol: 1e-12,
            max_terms: 100,
        };
        let err = kummer_1f1(c(0.5, 0.0), c(1.5, 0.0), c(0.0, 200.0), &tight).unwrap_err();
        assert!(
            matches!(err, SpecialFnError::NoConvergence { terms: 100, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn huge_argument_is_not_silently_wrong() {
        // parameter scale of the reference scenario's analytic constants
        let z = c(0.0, 1.84e7);
        let err = kummer_1f1(c(1.0, 4.85e5), c(0.5, 0.0), z, &ctrl()).unwrap_err();
        assert!(matches!(
            err,
            SpecialFnError::Overflow { .. } | SpecialFnError::NoConvergence { .. }
        ));
        let err = kummer_1f1(c(0.5, 0.0), c(1.5, 0.0), c(0.0, 60.0), &ctrl()).unwrap_err();
        assert!(matches!(err, SpecialFnError::PrecisionLoss { .. }), "{err:?}");
    }

    #[test]
    fn control_validation() {
        let bad = SeriesControl {
            rel_tol: 1e-3,
            max_terms: 1000,
        };
        assert!(kummer_1f1(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), &bad).is_err());
        let bad = SeriesControl {
            rel_tol: 1e-12,
            max_terms: 10,
        };
        assert!(bad.validate().is_err());
    }
}
