//! Special functions and adaptive quadrature.
//!
//! Everything the oracles need is implemented here directly: the gamma
//! function (Lanczos), Jacobi polynomials (three-term recurrence), Bessel
//! functions of the first kind, and an adaptive Gauss-Kronrod integrator.

mod bessel;
mod quad;

pub use bessel::{bessel_j, bessel_pcf_integral, bessel_pcf_series, BESSEL_PCF_SERIES_LIMIT};
pub use quad::{integrate, QuadratureSpec};

use crate::error::{domain, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Gamma function for positive arguments.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_unchecked(x))
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return gamma_unchecked(x + 1.0) / x;
    }
    if x.fract() == 0.0 && x <= 23.0 {
        // Exact factorials for small integers.
        return (1..x as u64).map(|k| k as f64).product();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z)
}

/// Natural logarithm of the gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x < 100.0 {
        return gamma_unchecked(x).ln();
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// Generalized binomial coefficient `binom(top, k)` for real `top`.
pub fn binomial(top: f64, k: u32) -> f64 {
    let base = top - k as f64;
    (1..=k).fold(1.0, |acc, j| acc * (base + j as f64) / j as f64)
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (x + j as f64))
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)` with the standard normalization
/// `P_n(1) = binom(n + alpha, n)`.
pub fn jacobi_poly(n: u32, alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) || !(beta > -1.0) {
        return Err(domain(format!(
            "jacobi_poly requires alpha, beta > -1, got ({alpha}, {beta})"
        )));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("jacobi_poly requires x in [-1, 1], got {x}")));
    }
    Ok(jacobi_unchecked(n, alpha, beta, x))
}

pub(crate) fn jacobi_unchecked(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let mut prev = 1.0;
    let mut cur = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// Surface area of the unit sphere `S^d` in `R^{d+1}`.
pub fn sphere_surface(d: u32) -> f64 {
    let h = (d as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma_unchecked(h)
}

/// The ratio `omega_{d-1} / omega_d` that normalizes zonal integrals.
pub fn surface_ratio(d: u32) -> f64 {
    assert!(d >= 1, "surface_ratio needs d >= 1");
    sphere_surface(d - 1) / sphere_surface(d)
}
