//! Geometry of the unit sphere `S^d`: points, distances, cap and lens areas,
//! the Funk-Hecke reduction, tube areas and the stereographic map.

use std::f64::consts::PI;

use nalgebra::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{integrate, surface_ratio, QuadratureSpec};

const NORM_TOLERANCE: f64 = 1e-12;

/// A point on the unit sphere, stored by its Euclidean embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Wraps coordinates that already have unit norm (to `1e-12`).
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(domain("a sphere point needs at least two coordinates"));
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(domain(format!("point norm {norm} is not 1")));
        }
        Ok(SpherePoint { coords })
    }

    /// Projects a nonzero vector onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() || coords.len() < 2 {
            return Err(domain("cannot normalize a zero or non-finite vector"));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(SpherePoint { coords })
    }

    /// Point on `S^2` with colatitude `theta` and longitude `phi`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        SpherePoint {
            coords: vec![st * cp, st * sp, ct],
        }
    }

    pub(crate) fn from_unit_xyz(x: f64, y: f64, z: f64) -> Self {
        SpherePoint {
            coords: vec![x, y, z],
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Dimension `d` of the sphere the point lives on.
    pub fn sphere_dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    /// Colatitude on `S^2`, in `[0, pi]`.
    pub fn colatitude(&self) -> f64 {
        self.coords[self.coords.len() - 1].clamp(-1.0, 1.0).acos()
    }

    /// Longitude on `S^2`, in `[0, 2 pi)`.
    pub fn longitude(&self) -> f64 {
        let phi = self.coords[1].atan2(self.coords[0]);
        if phi < 0.0 {
            let wrapped = phi + 2.0 * PI;
            if wrapped >= 2.0 * PI {
                0.0
            } else {
                wrapped
            }
        } else {
            phi
        }
    }

    /// Applies a 3x3 rotation (row-major) to a point on `S^2`.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> SpherePoint {
        let c = &self.coords;
        let v: Vec<f64> = (0..3)
            .map(|i| r[i][0] * c[0] + r[i][1] * c[1] + r[i][2] * c[2])
            .collect();
        SpherePoint { coords: v }
    }
}

impl AsRef<[f64]> for SpherePoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

/// Which distance `delta(x, y)` the pair statistic uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    /// Great-circle angle in `[0, pi]`.
    #[default]
    Geodesic,
    /// Chordal distance `2 sin(theta / 2)` in `[0, 2]`.
    Euclidean,
}

impl DistanceKind {
    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Geodesic => "geodesic",
            DistanceKind::Euclidean => "euclidean",
        }
    }
}

impl std::str::FromStr for DistanceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "geodesic" => Ok(DistanceKind::Geodesic),
            "euclidean" | "chordal" => Ok(DistanceKind::Euclidean),
            _ => Err(Error::Parse(format!("unknown distance kind {s:?}"))),
        }
    }
}

impl std::fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Distance between two points of the same sphere.
pub fn distance(x: &SpherePoint, y: &SpherePoint, kind: DistanceKind) -> Result<f64> {
    if x.coords.len() != y.coords.len() {
        return Err(Error::DimensionMismatch {
            left: x.coords.len(),
            right: y.coords.len(),
        });
    }
    Ok(distance_unchecked(x.coords(), y.coords(), kind))
}

pub(crate) fn distance_unchecked(x: &[f64], y: &[f64], kind: DistanceKind) -> f64 {
    match kind {
        DistanceKind::Geodesic => {
            // 2 atan2(|x - y|, |x + y|) stays accurate near 0 and pi, unlike acos.
            let (mut minus, mut plus) = (0.0, 0.0);
            for (a, b) in x.iter().zip(y) {
                minus += (a - b) * (a - b);
                plus += (a + b) * (a + b);
            }
            2.0 * minus.sqrt().atan2(plus.sqrt())
        }
        DistanceKind::Euclidean => x
            .iter()
            .zip(y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            .min(2.0),
    }
}

/// A cap `C(center, angular_radius)` of points strictly closer than the radius.
#[derive(Debug, Clone, PartialEq)]
pub struct CapSpec {
    pub center: SpherePoint,
    pub angular_radius: f64,
}

impl CapSpec {
    pub fn new(center: SpherePoint, angular_radius: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&angular_radius) {
            return Err(domain(format!("cap radius {angular_radius} outside [0, pi]")));
        }
        Ok(CapSpec {
            center,
            angular_radius,
        })
    }

    pub fn contains(&self, p: &SpherePoint) -> bool {
        distance_unchecked(self.center.coords(), p.coords(), DistanceKind::Geodesic)
            < self.angular_radius
    }

    pub fn area(&self) -> f64 {
        cap_area(self.center.sphere_dim() as u32, self.angular_radius)
    }
}

fn cap_quadrature() -> QuadratureSpec {
    QuadratureSpec::new(1e-15, 1 << 12).expect("valid spec")
}

/// Normalized area of a cap of angular radius `phi` on `S^d`.
pub fn cap_area(d: u32, phi: f64) -> f64 {
    assert!(d >= 1, "cap_area needs d >= 1");
    let phi = phi.clamp(0.0, PI);
    if d == 2 {
        let s = (0.5 * phi).sin();
        return s * s;
    }
    if phi == PI {
        return 1.0;
    }
    let power = (d - 1) as i32;
    let integral = match integrate(|t: f64| t.sin().powi(power), 0.0, phi, &cap_quadrature()) {
        Ok(v) => v,
        Err(Error::ToleranceNotMet { estimate, .. }) => estimate,
        Err(e) => panic!("{e}"),
    };
    (surface_ratio(d) * integral).clamp(0.0, 1.0)
}

/// Angular radius of the cap on `S^d` whose normalized area is `area`.
pub fn cap_radius(d: u32, area: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&area) {
        return Err(domain(format!("cap area {area} outside [0, 1]")));
    }
    if d == 0 {
        return Err(domain("cap_radius needs d >= 1"));
    }
    if d == 2 {
        return Ok(2.0 * area.sqrt().asin());
    }
    if area == 0.0 {
        return Ok(0.0);
    }
    if area == 1.0 {
        return Ok(PI);
    }
    // Safeguarded Newton on the monotone map phi -> cap_area(d, phi).
    let ratio = surface_ratio(d);
    let (mut lo, mut hi) = (0.0, PI);
    let mut phi = PI * area;
    for _ in 0..100 {
        let f = cap_area(d, phi) - area;
        if f > 0.0 {
            hi = phi;
        } else {
            lo = phi;
        }
        let slope = ratio * phi.sin().powi(d as i32 - 1);
        let mut next = phi - f / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - phi).abs() < 1e-15 || hi - lo < 1e-15 {
            return Ok(next);
        }
        phi = next;
    }
    Ok(phi)
}

/// Normalized area of the part of a cap of radius `rho` lying inside a
/// hemisphere, when the cap center sits at distance `tau >= 0` beyond the
/// hemisphere's boundary circle (on `S^2`).
///
/// Closed form `(pi - alpha cos(rho) - 2 beta) / (4 pi)` with
/// `beta = arcsin(sin tau / sin rho)` and `alpha = 2 arctan(cot beta / cos rho)`.
pub fn lens_area(rho: f64, tau: f64) -> Result<f64> {
    if !(0.0..PI / 2.0).contains(&rho) {
        return Err(domain(format!("lens_area needs 0 <= rho < pi/2, got {rho}")));
    }
    if !(tau >= 0.0) {
        return Err(domain(format!("lens_area needs tau >= 0, got {tau}")));
    }
    if tau >= rho {
        return Ok(0.0);
    }
    let cos_rho = rho.cos();
    let beta = (tau.sin() / rho.sin()).clamp(-1.0, 1.0).asin();
    let alpha = if beta == 0.0 {
        PI
    } else {
        2.0 * (1.0 / (beta.tan() * cos_rho)).atan()
    };
    Ok(((PI - alpha * cos_rho - 2.0 * beta) / (4.0 * PI)).max(0.0))
}

/// `(omega_{d-1} / omega_d) int_{-1}^{1} f(t) (1 - t^2)^{d/2 - 1} dt`, the
/// surface integral of the zonal function `f(<x, y>)` over `S^d`.
///
/// Integrated in the angle variable `t = cos(theta)`, which removes the
/// endpoint weight singularity for `d = 1`.
pub fn funk_hecke<F: Fn(f64) -> f64>(f: F, d: u32, spec: &QuadratureSpec) -> Result<f64> {
    if d == 0 {
        return Err(domain("funk_hecke needs d >= 1"));
    }
    let power = (d - 1) as i32;
    let integral = integrate(|theta: f64| f(theta.cos()) * theta.sin().powi(power), 0.0, PI, spec)?;
    Ok(surface_ratio(d) * integral)
}

/// Normalized area of the tube of radius `theta` around a curve of length
/// `curve_length` on `S^2`, valid when the tube does not overlap itself.
pub fn tube_area(curve_length: f64, theta: f64) -> f64 {
    2.0 * curve_length * theta.sin() / (4.0 * PI)
}

fn tangent_frame(x: &[f64]) -> ([f64; 3], [f64; 3]) {
    // cross with the coordinate axis least aligned with x
    let axis = if x[0].abs() <= x[1].abs() && x[0].abs() <= x[2].abs() {
        [1.0, 0.0, 0.0]
    } else if x[1].abs() <= x[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let cross = |a: &[f64], b: &[f64]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let mut e1 = cross(&axis, x);
    let norm = e1.iter().map(|v| v * v).sum::<f64>().sqrt();
    e1.iter_mut().for_each(|v| *v /= norm);
    let e2 = cross(x, &e1);
    (e1, e2)
}

/// Uniform point in the cap of angular radius `rho` around `x` on S².
pub fn sample_in_cap<R: Rng + ?Sized>(x: &SpherePoint, rho: f64, rng: &mut R) -> SpherePoint {
    let c = x.coords();
    let (e1, e2) = tangent_frame(c);
    let height = 2.0 * (0.5 * rho).sin().powi(2);
    let h = rng.random::<f64>() * height;
    let (cos_a, sin_a) = (1.0 - h, (h * (2.0 - h)).max(0.0).sqrt());
    let psi = 2.0 * PI * rng.random::<f64>();
    let (sp, cp) = psi.sin_cos();
    let v: Vec<f64> = (0..3)
        .map(|i| cos_a * c[i] + sin_a * (cp * e1[i] + sp * e2[i]))
        .collect();
    SpherePoint::normalized(v).expect("unit combination")
}

/// Inverse stereographic projection from the north pole onto `S^2`;
/// `0` maps to the south pole and the unit circle to the equator.
pub fn inverse_stereographic(z: Complex<f64>) -> SpherePoint {
    let r2 = z.norm_sqr();
    if !r2.is_finite() {
        return SpherePoint::from_unit_xyz(0.0, 0.0, 1.0);
    }
    let denom = 1.0 + r2;
    SpherePoint::from_unit_xyz(2.0 * z.re / denom, 2.0 * z.im / denom, (r2 - 1.0) / denom)
}
