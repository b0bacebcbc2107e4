//! Reference values for `E[G_{s,N}]`: closed forms, quadratures of the exact
//! finite-N expectations, their `N -> infinity` limits, and Monte Carlo
//! evaluation of the jittered-sampling integral.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eq::{EqPartition, RegionId};
use crate::error::{domain, Result};
use crate::geom::{cap_area, sample_in_cap, DistanceKind};
use crate::pcf::{mean_and_stderr, SGrid};
use crate::rng::replicate_rng;
use crate::specfun::{
    bessel_pcf_integral, binomial, gamma_fn, integrate, jacobi_unchecked, pochhammer, surface_ratio,
    QuadratureSpec,
};
use crate::sph_harm::harmonic_dimension;

/// Default constant in the jittered small-s error bound `C_2 s^4`.
pub const DEFAULT_C2: f64 = 30.0;

/// Diameter constant of the EQ(2, N) family, `diam <= K_2 / sqrt(N)`.
pub const EQ_DIAMETER_CONSTANT: f64 = 12.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    #[serde(rename = "finite_N")]
    FiniteN,
    Limit,
    AsymptoteSmallS,
    AsymptoteLargeS,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::FiniteN => "finite_N",
            OracleKind::Limit => "limit",
            OracleKind::AsymptoteSmallS => "asymptote_small_s",
            OracleKind::AsymptoteLargeS => "asymptote_large_s",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCurve {
    pub s_values: SGrid,
    pub values: Vec<f64>,
    pub kind: OracleKind,
    pub params: String,
}

fn check_s(s: f64) -> Result<()> {
    if s >= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("s must be finite and nonnegative, got {s}")))
    }
}

pub fn iid_pcf_limit(d: u32, s: f64) -> f64 {
    surface_ratio(d) * s.powi(d as i32) / d as f64
}

/// Exact i.i.d. expectation `(N - 1) sigma(C(s N^{-1/d}))`, geodesic distance.
pub fn iid_pcf_finite(d: u32, n: usize, s: f64) -> f64 {
    (n as f64 - 1.0) * cap_area(d, s / (n as f64).powf(1.0 / d as f64))
}

/// Spherical ensemble, Euclidean distance:
/// `s^2/4 - (1 - (1 - s^2/(4N))^N)`, or its limit when `n` is `None`.
pub fn spherical_pcf(n: Option<usize>, s: f64) -> Result<f64> {
    check_s(s)?;
    let x = s * s / 4.0;
    match n {
        None => Ok(x + (-x).exp_m1()),
        Some(0) => Err(domain("N must be positive")),
        Some(n) => {
            let nf = n as f64;
            if x > nf {
                return Err(domain(format!("spherical_pcf needs s^2 <= 4N (s={s}, N={n})")));
            }
            if x == nf {
                return Ok(x - 1.0);
            }
            Ok(x + (nf * (-x / nf).ln_1p()).exp_m1())
        }
    }
}

pub fn spherical_pcf_small_s(s: f64) -> f64 {
    s.powi(4) / 32.0
}

fn oracle_quad() -> QuadratureSpec {
    QuadratureSpec::from_env()
        .map(|q| QuadratureSpec {
            abs_tol: q.abs_tol.min(1e-10),
            ..q
        })
        .unwrap_or_else(|_| QuadratureSpec::with_tol(1e-10))
}

/// Exact finite-L expectation for the harmonic ensemble on S^d (geodesic).
pub fn harmonic_pcf_finite(d: u32, l: usize, s: f64) -> Result<f64> {
    check_s(s)?;
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    let n = harmonic_dimension(d as usize, l)? as f64;
    let scale = n.powf(1.0 / d as f64);
    if s / scale > PI {
        return Err(domain(format!("s N^(-1/d) = {} exceeds pi", s / scale)));
    }
    let lambda = (d as f64 - 2.0) / 2.0;
    let at_one = binomial(l as f64 + 1.0 + lambda, l as u32);
    let lu = l as u32;
    // integrate in the scaled variable u = phi N^{1/d}
    let integrand = |u: f64| {
        let phi = u / scale;
        let r = jacobi_unchecked(lu, 1.0 + lambda, lambda, phi.cos()) / at_one;
        (1.0 - r * r) * phi.sin().powi(d as i32 - 1)
    };
    let integral = integrate(integrand, 0.0, s, &oracle_quad())? / scale;
    Ok(n * surface_ratio(d) * integral)
}

/// `N -> infinity` limit for the harmonic ensemble on S^d.
pub fn harmonic_pcf_limit(d: u32, s: f64) -> Result<f64> {
    check_s(s)?;
    if d == 0 {
        return Err(domain("d must be positive"));
    }
    let df = d as f64;
    let nu = df / 2.0;
    let g_half = gamma_fn(nu + 1.0)?;
    let g_full = gamma_fn(df + 1.0)?;
    let arg = s * (g_full / 2.0).powf(1.0 / df);
    let deficit = 2.0 * g_half * g_half / g_full * 2f64.powf(df) * bessel_pcf_integral(nu, arg);
    Ok(surface_ratio(d) * (s.powf(df) / df - deficit))
}

/// Leading small-s term of the harmonic limit,
/// `(omega_{d-1}/omega_d) (Gamma(d+1)/2)^{2/d} s^{d+2} / (d+2)^2`.
pub fn harmonic_pcf_small_s(d: u32, s: f64) -> Result<f64> {
    check_s(s)?;
    let df = d as f64;
    let g_full = gamma_fn(df + 1.0)?;
    Ok(surface_ratio(d) * (g_full / 2.0).powf(2.0 / df) * s.powf(df + 2.0) / ((df + 2.0) * (df + 2.0)))
}

/// Parameters of the harmonic ensemble on a projective space `FP^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectiveParams {
    pub alpha: f64,
    pub beta: f64,
    pub real_dim: u32,
}

impl ProjectiveParams {
    pub fn new(alpha: f64, beta: f64, real_dim: u32) -> Result<Self> {
        if real_dim == 0 || (alpha - (real_dim as f64 / 2.0 - 1.0)).abs() > 1e-12 {
            return Err(domain(format!("alpha = {alpha} does not equal D/2 - 1 for D = {real_dim}")));
        }
        if !(beta > -1.0) {
            return Err(domain(format!("beta = {beta} must exceed -1")));
        }
        Ok(ProjectiveParams { alpha, beta, real_dim })
    }

    /// `FP^d` with `dim_R F = field_dim`.
    pub fn for_space(field_dim: u32, d: u32) -> Result<Self> {
        let f = field_dim as f64;
        ProjectiveParams::new(d as f64 / 2.0 * f - 1.0, f / 2.0 - 1.0, d * field_dim)
    }

    pub fn dimension(&self, l: usize) -> f64 {
        let lu = l as u32;
        let (a, b) = (self.alpha, self.beta);
        pochhammer(a + b + 2.0, lu) * pochhammer(a + 2.0, lu)
            / (gamma_fn(l as f64 + 1.0).expect("positive") * pochhammer(b + 1.0, lu))
    }

    /// `C_{alpha,beta} = 2 Gamma(alpha+beta+2) / (Gamma(alpha+1) Gamma(beta+1))`.
    pub fn c_const(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        2.0 * gamma_fn(a + b + 2.0).expect("positive")
            / (gamma_fn(a + 1.0).expect("positive") * gamma_fn(b + 1.0).expect("positive"))
    }

    /// `K_{alpha,beta}` with `N ~ K L^D`.
    pub fn k_const(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        gamma_fn(b + 1.0).expect("positive")
            / (gamma_fn(a + b + 2.0).expect("positive") * gamma_fn(a + 2.0).expect("positive"))
    }
}

/// Exact finite-L expectation on a projective space (geodesic `theta` in `[0, pi/2]`).
pub fn projective_pcf_finite(p: &ProjectiveParams, l: usize, s: f64) -> Result<f64> {
    check_s(s)?;
    let n = p.dimension(l);
    let scale = n.powf(1.0 / p.real_dim as f64);
    if s / scale > PI / 2.0 {
        return Err(domain(format!("s N^(-1/D) = {} exceeds pi/2", s / scale)));
    }
    let (a, b) = (p.alpha, p.beta);
    let at_one = binomial(l as f64 + a + 1.0, l as u32);
    let lu = l as u32;
    let integrand = |u: f64| {
        let t = u / scale;
        let r = jacobi_unchecked(lu, a + 1.0, b, (2.0 * t).cos()) / at_one;
        (1.0 - r * r) * t.sin().powf(2.0 * a + 1.0) * t.cos().powf(2.0 * b + 1.0)
    };
    let integral = integrate(integrand, 0.0, s, &oracle_quad())? / scale;
    Ok(n * p.c_const() * integral)
}

/// `L -> infinity` limit on a projective space:
/// `C [s^D/D - K Gamma(alpha+2)^2 I(D/2, 2 s K^{-1/D})]` with `I` the Bessel integral.
pub fn projective_pcf_limit(p: &ProjectiveParams, s: f64) -> Result<f64> {
    check_s(s)?;
    let df = p.real_dim as f64;
    let k = p.k_const();
    let g = gamma_fn(p.alpha + 2.0)?;
    let arg = 2.0 * s * k.powf(-1.0 / df);
    Ok(p.c_const() * (s.powf(df) / df - k * g * g * bessel_pcf_integral(df / 2.0, arg)))
}

/// Small-s leading term `4 C K^{-2/D} s^{D+2} / (D+2)^2` of the limit.
pub fn projective_pcf_small_s(p: &ProjectiveParams, s: f64) -> f64 {
    let df = p.real_dim as f64;
    4.0 * p.c_const() * p.k_const().powf(-2.0 / df) * s.powf(df + 2.0) / ((df + 2.0) * (df + 2.0))
}

/// Large-s leading term `C s^D / D` of the limit.
pub fn projective_pcf_large_s(p: &ProjectiveParams, s: f64) -> f64 {
    let df = p.real_dim as f64;
    p.c_const() * s.powf(df) / df
}

/// Large-s jittered value `(omega_{d-1}/omega_d) s^d/d - 1`.
pub fn jittered_pcf_large_s(d: u32, s: f64) -> f64 {
    iid_pcf_limit(d, s) - 1.0
}

/// Small-s jittered value `s^3/(8 pi^2)` with error bound `c2 s^4`.
pub fn jittered_pcf_small_s(s: f64, c2: f64) -> Result<(f64, f64)> {
    if !(0.0..0.25).contains(&s) {
        return Err(domain(format!("jittered small-s regime needs 0 <= s < 1/4, got {s}")));
    }
    Ok((s.powi(3) / (8.0 * PI * PI), c2 * s.powi(4)))
}

/// Main term `L rho^3 / (24 pi^2)` of `M_rho` summed over EQ(2, N) with total
/// perimeter `8 sqrt(pi N)`: `s^3 / (3 pi^{3/2})`.
pub fn jittered_pcf_small_s_perimeter(s: f64) -> f64 {
    s.powi(3) / (3.0 * PI.powf(1.5))
}

/// The same main term when every region is a cap of area `1/N`: `s^3 / (6 pi)`.
pub fn cap_partition_small_s(s: f64) -> f64 {
    s.powi(3) / (6.0 * PI)
}

/// Monte Carlo estimate of `M_rho(A) = int_A sigma(C(x, rho) \ A) dsigma(x)`.
pub fn m_rho<R: Rng + ?Sized>(
    p: &EqPartition,
    r: RegionId,
    rho: f64,
    rng: &mut R,
    n_samples: usize,
) -> Result<(f64, f64)> {
    if !(0.0..=PI).contains(&rho) {
        return Err(domain(format!("rho must lie in [0, pi], got {rho}")));
    }
    if n_samples < 2 {
        return Err(domain("m_rho needs at least two samples"));
    }
    let area = p.region_area(r)?;
    if rho == 0.0 {
        return Ok((0.0, 0.0));
    }
    let cap = cap_area(2, rho);
    let mut outside = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let x = p.sample_in_region(r, rng)?;
        let y = sample_in_cap(&x, rho, rng);
        outside.push(if p.locate(&y) == r { 0.0 } else { 1.0 });
    }
    let (mean, se) = mean_and_stderr(&outside);
    Ok((area * cap * mean, area * cap * se))
}

/// Geodesic cap radius for a threshold `s N^{-1/2}` in the given distance.
fn threshold_angle(s: f64, n: usize, kind: DistanceKind) -> f64 {
    let t = s / (n as f64).sqrt();
    match kind {
        DistanceKind::Geodesic => t.min(PI),
        DistanceKind::Euclidean => 2.0 * (0.5 * t).min(1.0).asin(),
    }
}

/// `N sum_i M_{s N^{-1/2}}(A_i)`, the exact jittered expectation, by Monte
/// Carlo with `n_samples` draws split evenly over the regions.
pub fn jittered_pcf_numeric<R: Rng + ?Sized>(
    p: &EqPartition,
    s: f64,
    kind: DistanceKind,
    rng: &mut R,
    n_samples: usize,
) -> Result<(f64, f64)> {
    check_s(s)?;
    let n = p.n_regions();
    if n < 2 {
        return Err(domain("jittered sampling needs N >= 2"));
    }
    let rho = threshold_angle(s, n, kind);
    if rho == 0.0 {
        return Ok((0.0, 0.0));
    }
    let per_region = (n_samples / n).max(2);
    let base: u64 = rng.random();
    let parts: Vec<(f64, f64)> = p
        .regions()
        .into_par_iter()
        .enumerate()
        .map(|(i, r)| m_rho(p, r, rho, &mut replicate_rng(base, i as u64), per_region))
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let mean = nf * parts.iter().map(|(m, _)| m).sum::<f64>();
    let se = nf * parts.iter().map(|(_, e)| e * e).sum::<f64>().sqrt();
    Ok((mean, se))
}

/// Oracle selector for curve generation.
#[derive(Debug, Clone, PartialEq)]
pub enum OracleSpec {
    Iid { d: u32, n: Option<usize> },
    Spherical { n: Option<usize> },
    Harmonic { d: u32, l: Option<usize> },
    Projective { params: ProjectiveParams, l: Option<usize> },
    JitteredLargeS { d: u32 },
    JitteredSmallS { c2: f64 },
}

impl OracleSpec {
    pub fn kind(&self) -> OracleKind {
        match self {
            OracleSpec::Iid { n: Some(_), .. }
            | OracleSpec::Spherical { n: Some(_) }
            | OracleSpec::Harmonic { l: Some(_), .. }
            | OracleSpec::Projective { l: Some(_), .. } => OracleKind::FiniteN,
            OracleSpec::JitteredLargeS { .. } => OracleKind::AsymptoteLargeS,
            OracleSpec::JitteredSmallS { .. } => OracleKind::AsymptoteSmallS,
            _ => OracleKind::Limit,
        }
    }

    pub fn value(&self, s: f64) -> Result<f64> {
        check_s(s)?;
        match *self {
            OracleSpec::Iid { d, n: None } => Ok(iid_pcf_limit(d, s)),
            OracleSpec::Iid { d, n: Some(n) } => Ok(iid_pcf_finite(d, n, s)),
            OracleSpec::Spherical { n } => spherical_pcf(n, s),
            OracleSpec::Harmonic { d, l: None } => harmonic_pcf_limit(d, s),
            OracleSpec::Harmonic { d, l: Some(l) } => harmonic_pcf_finite(d, l, s),
            OracleSpec::Projective { params, l: None } => projective_pcf_limit(&params, s),
            OracleSpec::Projective { params, l: Some(l) } => projective_pcf_finite(&params, l, s),
            OracleSpec::JitteredLargeS { d } => Ok(jittered_pcf_large_s(d, s)),
            OracleSpec::JitteredSmallS { c2 } => jittered_pcf_small_s(s, c2).map(|v| v.0),
        }
    }

    /// Values on `grid`; out-of-domain points become NaN.
    pub fn curve(&self, grid: &SGrid) -> OracleCurve {
        OracleCurve {
            s_values: grid.clone(),
            values: grid.values().iter().map(|&s| self.value(s).unwrap_or(f64::NAN)).collect(),
            kind: self.kind(),
            params: self.to_string(),
        }
    }
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let size = |v: Option<usize>| v.map_or("inf".to_string(), |n| n.to_string());
        match self {
            OracleSpec::Iid { d, n } => write!(f, "iid(d={d};N={})", size(*n)),
            OracleSpec::Spherical { n } => write!(f, "spherical(N={})", size(*n)),
            OracleSpec::Harmonic { d, l } => write!(f, "harmonic(d={d};L={})", size(*l)),
            OracleSpec::Projective { params, l } => write!(
                f,
                "projective(alpha={};beta={};D={};L={})",
                params.alpha,
                params.beta,
                params.real_dim,
                size(*l)
            ),
            OracleSpec::JitteredLargeS { d } => write!(f, "jittered_large_s(d={d})"),
            OracleSpec::JitteredSmallS { c2 } => write!(f, "jittered_small_s(C2={c2})"),
        }
    }
}
