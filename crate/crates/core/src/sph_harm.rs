//! Real spherical harmonics on S², orthonormal for the normalized surface
//! measure, and the harmonic-ensemble reproducing kernel on S^d.

use crate::error::{domain, Result};
use crate::geom::SpherePoint;
use crate::specfun::{binomial, jacobi_unchecked};

/// Dimension of the span of spherical harmonics of degree at most `l` on S^d.
pub fn harmonic_dimension(d: usize, l: usize) -> Result<usize> {
    if d == 0 {
        return Err(domain("sphere dimension must be positive"));
    }
    let (d, lf) = (d as f64, l as f64);
    let n = (2.0 * lf + d) / d * binomial(d + lf - 1.0, l as u32);
    Ok(n.round() as usize)
}

/// `K_L(x, y)` as a function of `t = <x, y>`: `N / P_L(1) * P_L(t)` with
/// `P_L = P_L^{(1 + lambda, lambda)}`, `lambda = (d - 2) / 2`.
pub fn harmonic_kernel(d: usize, l: usize, t: f64) -> Result<f64> {
    let n = harmonic_dimension(d, l)? as f64;
    let lambda = (d as f64 - 2.0) / 2.0;
    let at_one = binomial(l as f64 + 1.0 + lambda, l as u32);
    Ok(n * jacobi_unchecked(l as u32, 1.0 + lambda, lambda, t) / at_one)
}

/// Evaluator for all real harmonics of degree `0..=l_max` at once.
///
/// Index of `(l, m)` with `-l <= m <= l` is `l * l + l + m`; negative `m`
/// carries the sine factor.
#[derive(Debug, Clone)]
pub struct RealSphHarm {
    l_max: usize,
    // recurrence coefficients, row-major over (l, m) with m <= l
    a: Vec<f64>,
    b: Vec<f64>,
    diag: Vec<f64>,
}

fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

impl RealSphHarm {
    pub fn new(l_max: usize) -> Self {
        let size = tri(l_max, l_max) + 1;
        let mut a = vec![0.0; size];
        let mut b = vec![0.0; size];
        let mut diag = vec![0.0; l_max + 1];
        diag[0] = 1.0;
        if l_max >= 1 {
            diag[1] = 3f64.sqrt();
        }
        for m in 2..=l_max {
            let mf = m as f64;
            diag[m] = diag[m - 1] * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        for l in 1..=l_max {
            for m in 0..l {
                let (lf, mf) = (l as f64, m as f64);
                let den = (lf - mf) * (lf + mf);
                a[tri(l, m)] = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / den).sqrt();
                if l >= m + 2 {
                    b[tri(l, m)] =
                        ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0) / (den * (2.0 * lf - 3.0))).sqrt();
                }
            }
        }
        RealSphHarm { l_max, a, b, diag }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn len(&self) -> usize {
        (self.l_max + 1) * (self.l_max + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Writes every harmonic at the unit vector `(x, y, z)` into `out`.
    pub fn eval_xyz(&self, x: f64, y: f64, z: f64, out: &mut [f64]) {
        assert_eq!(out.len(), self.len(), "output buffer has the wrong length");
        let lm = self.l_max;
        // u^m cos(m phi), u^m sin(m phi) from powers of x + iy
        let (mut re, mut im) = (1.0, 0.0);
        for m in 0..=lm {
            if m > 0 {
                let r = re * x - im * y;
                im = re * y + im * x;
                re = r;
            }
            // Q_lm = P_lm / u^m is a polynomial in z
            let scale_c = self.diag[m] * re;
            let scale_s = self.diag[m] * im;
            let mut q_prev = 0.0;
            let mut q = 1.0;
            for l in m..=lm {
                if l > m {
                    let next = self.a[tri(l, m)] * z * q - self.b[tri(l, m)] * q_prev;
                    q_prev = q;
                    q = next;
                }
                let base = l * l + l;
                if m == 0 {
                    out[base] = self.diag[0] * q;
                } else {
                    out[base + m] = scale_c * q;
                    out[base - m] = scale_s * q;
                }
            }
        }
    }

    pub fn eval(&self, p: &SpherePoint, out: &mut [f64]) {
        let c = p.coords();
        assert_eq!(c.len(), 3, "real harmonics are implemented on S^2 only");
        self.eval_xyz(c[0], c[1], c[2], out);
    }
}
