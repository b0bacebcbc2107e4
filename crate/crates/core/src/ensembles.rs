//! Samplers for i.i.d. uniform points, the spherical ensemble, the harmonic
//! ensemble and jittered sampling on EQ(2, N).

use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, Schur};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::dpp::{hkpv_sample, uniform_point, HarmonicBasis};
use crate::eq::EqPartition;
use crate::error::{domain, Error, Result};
use crate::geom::{inverse_stereographic, SpherePoint};

const SINGULAR_RETRIES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum EnsembleSpec {
    Iid { d: usize, n: usize },
    Spherical { n: usize },
    Harmonic { l: usize },
    Jittered(Arc<EqPartition>),
}

impl EnsembleSpec {
    pub fn n_points(&self) -> usize {
        match self {
            EnsembleSpec::Iid { n, .. } | EnsembleSpec::Spherical { n } => *n,
            EnsembleSpec::Harmonic { l } => (l + 1) * (l + 1),
            EnsembleSpec::Jittered(p) => p.n_regions(),
        }
    }

    pub fn sphere_dim(&self) -> usize {
        match self {
            EnsembleSpec::Iid { d, .. } => *d,
            _ => 2,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            EnsembleSpec::Iid { .. } => "iid",
            EnsembleSpec::Spherical { .. } => "spherical",
            EnsembleSpec::Harmonic { .. } => "harmonic",
            EnsembleSpec::Jittered(_) => "jittered",
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<SpherePoint>> {
        match self {
            EnsembleSpec::Iid { d, n } => sample_iid(*d, *n, rng),
            EnsembleSpec::Spherical { n } => sample_spherical(*n, rng),
            EnsembleSpec::Harmonic { l } => sample_harmonic(*l, rng),
            EnsembleSpec::Jittered(p) => sample_jittered(p, rng),
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleSpec::Iid { d, n } => write!(f, "iid(d={d};N={n})"),
            EnsembleSpec::Spherical { n } => write!(f, "spherical(N={n})"),
            EnsembleSpec::Harmonic { l } => write!(f, "harmonic(L={l};N={})", (l + 1) * (l + 1)),
            EnsembleSpec::Jittered(p) => write!(f, "jittered(N={})", p.n_regions()),
        }
    }
}

pub fn sample_iid<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Vec<SpherePoint>> {
    if n == 0 || d == 0 {
        return Err(domain("i.i.d. sampling needs N >= 1 and d >= 1"));
    }
    Ok((0..n).map(|_| uniform_point(d, rng)).collect())
}

fn complex_gaussian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex<f64>> {
    let normal = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    DMatrix::from_fn(n, n, |_, _| Complex::new(normal.sample(rng), normal.sample(rng)))
}

/// Eigenvalues of `A^{-1} B` for complex Gaussian `A`, `B`, mapped to S².
pub fn sample_spherical<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Vec<SpherePoint>> {
    if n == 0 {
        return Err(domain("spherical ensemble needs N >= 1"));
    }
    let b = complex_gaussian(n, rng);
    for _ in 0..SINGULAR_RETRIES {
        let a = complex_gaussian(n, rng);
        let Some(m) = a.lu().solve(&b) else { continue };
        if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            continue;
        }
        let Some(schur) = Schur::try_new(m, f64::EPSILON, 100_000) else {
            continue;
        };
        let Some(eig) = schur.eigenvalues() else { continue };
        return Ok(eig.iter().map(|z| inverse_stereographic(*z)).collect());
    }
    Err(Error::SamplingFailure(
        "spherical ensemble: A stayed numerically singular".into(),
    ))
}

pub fn sample_harmonic<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Result<Vec<SpherePoint>> {
    Ok(hkpv_sample(&HarmonicBasis::new(l), rng)?.points)
}

/// One uniform point in every region, in region order.
pub fn sample_jittered<R: Rng + ?Sized>(p: &EqPartition, rng: &mut R) -> Result<Vec<SpherePoint>> {
    p.regions()
        .into_iter()
        .map(|r| p.sample_in_region(r, rng))
        .collect()
}
