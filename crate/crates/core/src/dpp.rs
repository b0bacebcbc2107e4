//! Exact sampling of projection determinantal point processes on spheres.
//!
//! Points are drawn one at a time. Given `k` accepted points with feature
//! vectors spanning `V_k`, the next point has density
//! `(K(x, x) - |P_{V_k} phi(x)|^2) / (N - k)` with respect to the normalized
//! surface measure; it is drawn by rejection from uniform proposals.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::geom::SpherePoint;
use crate::sph_harm::RealSphHarm;

/// A finite real orthonormal system on S^d (normalized surface measure).
pub trait ProjectionBasis: Sync {
    fn n_functions(&self) -> usize;

    fn sphere_dim(&self) -> usize {
        2
    }

    /// Writes `phi_1(x) .. phi_N(x)` into `out`.
    fn eval(&self, x: &SpherePoint, out: &mut [f64]);

    /// An upper bound on `K(x, x)` over the sphere.
    fn diagonal_bound(&self) -> f64 {
        self.n_functions() as f64
    }
}

/// Real spherical harmonics of degree at most `L` on S².
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    harmonics: RealSphHarm,
}

impl HarmonicBasis {
    pub fn new(l: usize) -> Self {
        HarmonicBasis {
            harmonics: RealSphHarm::new(l),
        }
    }

    pub fn degree(&self) -> usize {
        self.harmonics.l_max()
    }
}

impl ProjectionBasis for HarmonicBasis {
    fn n_functions(&self) -> usize {
        self.harmonics.len()
    }

    fn eval(&self, x: &SpherePoint, out: &mut [f64]) {
        self.harmonics.eval(x, out);
    }
}

pub fn kernel_from_basis<B: ProjectionBasis + ?Sized>(b: &B, x: &SpherePoint, y: &SpherePoint) -> f64 {
    let n = b.n_functions();
    let (mut fx, mut fy) = (vec![0.0; n], vec![0.0; n]);
    b.eval(x, &mut fx);
    b.eval(y, &mut fy);
    fx.iter().zip(&fy).map(|(a, c)| a * c).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DppSample {
    pub points: Vec<SpherePoint>,
    pub proposals_used: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct SamplerConfig {
    /// Proposal budget per point.
    pub proposals_per_point: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            proposals_per_point: 1_000_000,
        }
    }
}

pub fn uniform_point<R: Rng + ?Sized>(d: usize, rng: &mut R) -> SpherePoint {
    loop {
        let v: Vec<f64> = (0..=d).map(|_| StandardNormal.sample(rng)).collect();
        if let Ok(p) = SpherePoint::normalized(v) {
            return p;
        }
    }
}

pub fn hkpv_sample<B, R>(b: &B, rng: &mut R) -> Result<DppSample>
where
    B: ProjectionBasis + ?Sized,
    R: Rng + ?Sized,
{
    hkpv_sample_with(b, rng, SamplerConfig::default())
}

pub fn hkpv_sample_with<B, R>(b: &B, rng: &mut R, config: SamplerConfig) -> Result<DppSample>
where
    B: ProjectionBasis + ?Sized,
    R: Rng + ?Sized,
{
    let n = b.n_functions();
    let d = b.sphere_dim();
    let bound = b.diagonal_bound();
    let budget = config.proposals_per_point.saturating_mul(n.max(1) as u64);
    // orthonormal basis of the span of accepted feature vectors, row k at k * n
    let mut frame: Vec<f64> = Vec::with_capacity(n * n);
    let mut points: Vec<SpherePoint> = Vec::with_capacity(n);
    let mut phi = vec![0.0; n];
    let mut used = 0u64;

    for k in 0..n {
        loop {
            if used >= budget {
                return Err(Error::SamplingFailure(format!(
                    "proposal budget {budget} exhausted after {k} of {n} points"
                )));
            }
            used += 1;
            let x = uniform_point(d, rng);
            b.eval(&x, &mut phi);
            // two Gram-Schmidt passes keep the frame orthonormal late in the run
            for _ in 0..2 {
                for e in frame.chunks_exact(n) {
                    let c: f64 = e.iter().zip(&phi).map(|(a, v)| a * v).sum();
                    phi.iter_mut().zip(e).for_each(|(v, a)| *v -= c * a);
                }
            }
            let residual: f64 = phi.iter().map(|v| v * v).sum();
            if rng.random::<f64>() * bound >= residual {
                continue;
            }
            if residual < 1e-24 {
                continue;
            }
            if points.iter().any(|p| {
                p.coords()
                    .iter()
                    .zip(x.coords())
                    .all(|(a, c)| (a - c).abs() < 1e-12)
            }) {
                return Err(Error::SamplingFailure("duplicate point drawn".into()));
            }
            let norm = residual.sqrt();
            frame.extend(phi.iter().map(|v| v / norm));
            points.push(x);
            break;
        }
    }
    Ok(DppSample {
        points,
        proposals_used: used,
    })
}
