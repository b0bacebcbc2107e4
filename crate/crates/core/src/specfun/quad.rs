use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{domain, Error, Result};

/// Tolerance and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-9,
            max_subdivisions: 1 << 16,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || max_subdivisions == 0 {
            return Err(domain(format!(
                "quadrature spec needs abs_tol > 0 and max_subdivisions >= 1 (got {abs_tol}, {max_subdivisions})"
            )));
        }
        Ok(QuadratureSpec {
            abs_tol,
            max_subdivisions,
        })
    }

    pub fn with_tol(abs_tol: f64) -> Self {
        QuadratureSpec {
            abs_tol,
            ..Default::default()
        }
    }

    /// Default spec, with the tolerance overridden by `SPHEREPCF_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var("SPHEREPCF_QUAD_TOL") {
            Ok(raw) => {
                let tol: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("SPHEREPCF_QUAD_TOL={raw:?}")))?;
                QuadratureSpec::new(tol, QuadratureSpec::default().max_subdivisions)
            }
            Err(_) => Ok(QuadratureSpec::default()),
        }
    }
}

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).abs();
    (value, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `spec.abs_tol`. Running out of subdivisions yields
/// [`Error::ToleranceNotMet`] carrying the best estimate.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a <= b) {
        return Err(domain(format!("integrate requires a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let (value, err) = kronrod15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut subdivisions = 0usize;
    loop {
        let total_err: f64 = heap.iter().map(|s| s.err).sum();
        if total_err <= spec.abs_tol {
            return Ok(heap.iter().map(|s| s.value).sum());
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::ToleranceNotMet {
                estimate: heap.iter().map(|s| s.value).sum(),
                error_estimate: total_err,
                subdivisions,
            });
        }
        // Bisect the worst few segments per pass to keep the bookkeeping cheap.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Cannot split further in floating point; keep it as is.
                heap.push(Segment { err: 0.0, ..worst });
                continue;
            }
            let (lv, le) = kronrod15(&f, worst.a, mid);
            let (rv, re) = kronrod15(&f, mid, worst.b);
            heap.push(Segment { a: worst.a, b: mid, value: lv, err: le });
            heap.push(Segment { a: mid, b: worst.b, value: rv, err: re });
            subdivisions += 1;
        }
    }
}
