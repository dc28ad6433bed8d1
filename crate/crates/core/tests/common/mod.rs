//! Identity residuals shared by the integration and acceptance tests.
#![allow(dead_code)]

use jcgrav::special::{complex_gamma, hermite_complex, kummer_1f1, SeriesControl};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(residual: Complex64, terms: &[Complex64]) -> f64 {
    let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        residual.norm()
    } else {
        residual.norm() / scale
    }
}

/// |Γ(z+1) − zΓ(z)| / |Γ(z+1)|
pub fn gamma_recurrence(z: Complex64) -> f64 {
    let g1 = complex_gamma(z + 1.0).unwrap();
    let g0 = complex_gamma(z).unwrap();
    rel(g1 - z * g0, &[g1])
}

/// |Γ(z)Γ(1−z) − π/sin(πz)| relative
pub fn gamma_reflection(z: Complex64) -> f64 {
    let lhs = complex_gamma(z).unwrap() * complex_gamma(1.0 - z).unwrap();
    let rhs = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
    rel(lhs - rhs, &[rhs])
}

/// z w″ + (b − z) w′ − a w with five-point differences in z.
pub fn kummer_ode(a: Complex64, b: Complex64, z: Complex64) -> f64 {
    let ctrl = SeriesControl::default();
    let h = 1e-3;
    let w: Vec<Complex64> = (-2..=2)
        .map(|k| kummer_1f1(a, b, z + k as f64 * h, &ctrl).unwrap())
        .collect();
    let d1 = (-w[4] + 8.0 * w[3] - 8.0 * w[1] + w[0]) / (12.0 * h);
    let d2 = (-w[4] + 16.0 * w[3] - 30.0 * w[2] + 16.0 * w[1] - w[0]) / (12.0 * h * h);
    let terms = [z * d2, (b - z) * d1, a * w[2]];
    rel(terms[0] + terms[1] - terms[2], &terms)
}

/// H_{ν+1}(z) − 2zH_ν(z) + 2νH_{ν−1}(z)
pub fn hermite_recurrence(nu: Complex64, z: Complex64) -> f64 {
    let ctrl = SeriesControl::default();
    let hp = hermite_complex(nu + 1.0, z, &ctrl).unwrap();
    let h0 = hermite_complex(nu, z, &ctrl).unwrap();
    let hm = hermite_complex(nu - 1.0, z, &ctrl).unwrap();
    let terms = [hp, 2.0 * z * h0, 2.0 * nu * hm];
    rel(terms[0] - terms[1] + terms[2], &terms)
}

/// Classical H_n(x) by the polynomial recurrence.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * x);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Relative gap between the complex-order evaluation and the polynomial at integer order.
pub fn hermite_integer(n: usize, x: f64) -> f64 {
    let got = hermite_complex(c(n as f64, 0.0), c(x, 0.0), &SeriesControl::default()).unwrap();
    let want = hermite_poly(n, x);
    // scale by the polynomial's coefficient magnitude so roots do not blow up the ratio
    let scale = (0..=n)
        .map(|k| hermite_poly(k, x.abs().max(1.0)).abs())
        .fold(want.abs(), f64::max);
    (got - want).norm() / scale
}

/// Complex orders |ν| ≤ 5 and arguments |z| ≤ 3 on a deterministic lattice.
pub fn nu_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for re in [-4.5, -2.3, -0.5, 0.7, 2.0, 3.9] {
        for im in [-1.5, 0.0, 2.5] {
            let nu = c(re, im);
            if nu.norm() <= 5.0 {
                out.push(nu);
            }
        }
    }
    out
}

pub fn z_grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in [0.3, 1.2, 2.1, 2.9] {
        for k in 0..6 {
            let th = std::f64::consts::PI * (2.0 * k as f64 + 0.5) / 6.0;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}
