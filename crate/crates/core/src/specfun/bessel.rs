use std::f64::consts::PI;

use super::{integrate, ln_gamma_unchecked, QuadratureSpec};

/// Bessel function of the first kind `J_nu(x)` for `nu >= 0`, `x >= 0`.
///
/// Below `x = max(12, 2 nu)` the Maclaurin series is summed directly. Above
/// it, `J` is evaluated for the two lowest orders sharing the fractional part
/// of `nu` by Hankel's asymptotic expansion and carried up to `nu` with the
/// forward recurrence, which is stable while the order stays below `x`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_j needs nu >= 0 and x >= 0");
    if x < (2.0 * nu).max(12.0) {
        bessel_series(nu, x)
    } else {
        bessel_large(nu, x)
    }
}

fn bessel_series(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let mut term = (nu * half.ln() - ln_gamma_unchecked(nu + 1.0)).exp();
    let q = -half * half;
    let mut sum = term;
    for m in 1..200 {
        let m = m as f64;
        term *= q / (m * (m + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel's asymptotic expansion; only used for orders in [0, 2).
fn bessel_hankel(mu: f64, x: f64) -> f64 {
    let four_mu2 = 4.0 * mu * mu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..100 {
        if term.abs() > last {
            break;
        }
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        last = term.abs();
        if last < 1e-17 {
            break;
        }
        let odd = (2 * k + 1) as f64;
        term *= (four_mu2 - odd * odd) / ((k + 1) as f64 * 8.0 * x);
    }
    let chi = x - (0.5 * mu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn bessel_large(nu: f64, x: f64) -> f64 {
    let base = nu.fract();
    let steps = nu.trunc() as usize;
    let mut lo = bessel_hankel(base, x);
    if steps == 0 {
        return lo;
    }
    let mut hi = bessel_hankel(base + 1.0, x);
    for k in 1..steps {
        let order = base + k as f64;
        let next = 2.0 * order / x * hi - lo;
        lo = hi;
        hi = next;
    }
    hi
}

/// Below this argument [`bessel_pcf_integral`] sums its power series.
pub const BESSEL_PCF_SERIES_LIMIT: f64 = 2.0;

/// Power series of `int_0^x J_nu(t)^2 / t dt`.
///
/// Term `m` is `(-1)^m (m+2nu+1)_m / (m! Gamma(m+nu+1)^2 (2m+2nu)) (x/2)^(2m+2nu)`,
/// obtained from the Cauchy product of the Maclaurin series of `J_nu`.
pub fn bessel_pcf_series(nu: f64, x: f64) -> f64 {
    assert!(nu > 0.0, "bessel_pcf_series needs nu > 0");
    if x == 0.0 {
        return 0.0;
    }
    let half = 0.5 * x;
    // m = 0 coefficient: 1 / (Gamma(nu+1)^2 2nu)
    let mut coef = (-2.0 * ln_gamma_unchecked(nu + 1.0) + 2.0 * nu * half.ln()).exp();
    let mut sum = coef / (2.0 * nu);
    let q = -half * half;
    for m in 1..300 {
        let mf = m as f64;
        // c_m / c_{m-1} = -(x/2)^2 (2m+2nu)(2m+2nu-1) / (m (m+2nu) (m+nu)^2)
        coef *= q * (2.0 * mf + 2.0 * nu) * (2.0 * mf + 2.0 * nu - 1.0)
            / (mf * (mf + 2.0 * nu) * (mf + nu) * (mf + nu));
        let term = coef / (2.0 * mf + 2.0 * nu);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `int_0^x J_nu(t)^2 / t dt` for `nu > 0`.
///
/// Uses the power series up to [`BESSEL_PCF_SERIES_LIMIT`] and adds adaptive
/// quadrature of the remainder beyond it.
pub fn bessel_pcf_integral(nu: f64, x: f64) -> f64 {
    assert!(nu > 0.0 && x >= 0.0, "bessel_pcf_integral needs nu > 0 and x >= 0");
    if x <= BESSEL_PCF_SERIES_LIMIT {
        return bessel_pcf_series(nu, x);
    }
    let head = bessel_pcf_series(nu, BESSEL_PCF_SERIES_LIMIT);
    let spec = QuadratureSpec::new(1e-12, 1 << 18).expect("valid spec");
    let tail = integrate(
        |t| {
            let j = bessel_j(nu, t);
            j * j / t
        },
        BESSEL_PCF_SERIES_LIMIT,
        x,
        &spec,
    )
    .unwrap_or_else(|e| match e {
        crate::Error::ToleranceNotMet { estimate, .. } => estimate,
        other => panic!("{other}"),
    });
    head + tail
}
