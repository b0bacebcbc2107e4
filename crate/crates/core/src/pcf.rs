//! The pair-correlation statistic `G_{s,N}` and its replicate estimates.
//!
//! `G_{s,N} = (1/N) #{(i, j) : i != j, delta(x_i, x_j) N^{1/d} <= s}` counts
//! ordered pairs, so it is twice the unordered count divided by `N`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensembles::EnsembleSpec;
use crate::error::{domain, Error, Result};
use crate::geom::{DistanceKind, SpherePoint};
use crate::oracles::OracleCurve;
use crate::rng::replicate_rng;

/// Relative slack on the closed threshold, so a pair constructed to sit
/// exactly at distance `s N^{-1/d}` is not lost to rounding.
const THRESHOLD_SLACK: f64 = 8.0 * f64::EPSILON;

/// Strictly increasing grid of nonnegative `s` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SGrid {
    values: Vec<f64>,
}

impl SGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(domain("s-grid is empty"));
        }
        if values.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return Err(domain("s-grid values must be finite and nonnegative"));
        }
        if values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(domain("s-grid must increase strictly"));
        }
        Ok(SGrid { values })
    }

    /// Parses `start:stop:step` (stop included) or a comma-separated list.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in s-grid {spec:?}")))
        };
        if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("s-grid {spec:?} is not start:stop:step")));
            }
            let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if !(step > 0.0) || stop < start {
                return Err(Error::Parse(format!("s-grid {spec:?} needs step > 0 and stop >= start")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            return SGrid::new((0..count).map(|i| start + i as f64 * step).collect());
        }
        SGrid::new(spec.split(',').map(num).collect::<Result<_>>()?)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("nonempty grid")
    }
}

impl TryFrom<Vec<f64>> for SGrid {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        SGrid::new(v)
    }
}

impl From<SGrid> for Vec<f64> {
    fn from(g: SGrid) -> Self {
        g.values
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcfEstimate {
    pub s: f64,
    pub mean: f64,
    pub stderr: f64,
    pub replicates: usize,
    pub ensemble: String,
    pub distance: DistanceKind,
}

fn check_points(points: &[SpherePoint]) -> Result<usize> {
    if points.len() < 2 {
        return Err(domain("the pair statistic needs at least two points"));
    }
    let dim = points[0].coords().len();
    if let Some(p) = points.iter().find(|p| p.coords().len() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: p.coords().len(),
        });
    }
    Ok(dim - 1)
}

/// Scaled distances `delta N^{1/d}` of all unordered pairs not exceeding
/// `s_max`, sorted ascending.
pub fn scaled_pair_distances(
    points: &[SpherePoint],
    d: usize,
    kind: DistanceKind,
    s_max: f64,
) -> Result<Vec<f64>> {
    check_points(points)?;
    let n = points.len();
    let scale = (n as f64).powf(1.0 / d as f64);
    let cutoff = s_max * (1.0 + THRESHOLD_SLACK) / scale;
    // prefilter on the squared chord, which is monotone in either distance
    let chord_cut = match kind {
        DistanceKind::Geodesic if cutoff < std::f64::consts::PI => 2.0 * (0.5 * cutoff).sin(),
        DistanceKind::Geodesic => 2.0,
        DistanceKind::Euclidean => cutoff.min(2.0),
    };
    let chord2_cut = chord_cut * chord_cut * (1.0 + 1e-12) + 1e-300;
    let mut out = Vec::new();
    for i in 0..n {
        let a = points[i].coords();
        for b in &points[i + 1..] {
            let b = b.coords();
            let mut c2 = 0.0;
            for (u, v) in a.iter().zip(b) {
                c2 += (u - v) * (u - v);
            }
            if c2 > chord2_cut {
                continue;
            }
            let dist = match kind {
                DistanceKind::Euclidean => c2.sqrt(),
                DistanceKind::Geodesic => {
                    let plus: f64 = a.iter().zip(b).map(|(u, v)| (u + v) * (u + v)).sum();
                    2.0 * c2.sqrt().atan2(plus.sqrt())
                }
            };
            out.push(dist * scale);
        }
    }
    out.sort_unstable_by(f64::total_cmp);
    Ok(out)
}

/// `G_{s,N}` for every `s` in `grid`, given sorted scaled distances.
pub fn g_from_sorted(sorted: &[f64], n_points: usize, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&s| {
            let limit = s * (1.0 + THRESHOLD_SLACK);
            2.0 * sorted.partition_point(|&v| v <= limit) as f64 / n_points as f64
        })
        .collect()
}

pub fn g_statistic(points: &[SpherePoint], s: f64, d: usize, kind: DistanceKind) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(domain("s must be nonnegative"));
    }
    let sorted = scaled_pair_distances(points, d, kind, s)?;
    Ok(g_from_sorted(&sorted, points.len(), &[s])[0])
}

/// Mean and standard error `sd / sqrt(n)` with the `n - 1` variance.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-replicate `G` values, indexed `[replicate][s]`. Replicate `r` uses
/// stream `r` of `seed`, so results do not depend on thread scheduling.
pub fn replicate_g_values(
    spec: &EnsembleSpec,
    grid: &SGrid,
    replicates: usize,
    kind: DistanceKind,
    seed: u64,
) -> Result<Vec<Vec<f64>>> {
    let d = spec.sphere_dim();
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = replicate_rng(seed, r as u64);
            let points = spec.sample(&mut rng)?;
            let sorted = scaled_pair_distances(&points, d, kind, grid.max())?;
            Ok(g_from_sorted(&sorted, points.len(), grid.values()))
        })
        .collect()
}

pub fn pcf_curve(
    spec: &EnsembleSpec,
    grid: &SGrid,
    replicates: usize,
    kind: DistanceKind,
    seed: u64,
) -> Result<Vec<PcfEstimate>> {
    if replicates < 2 {
        return Err(domain("pcf_curve needs at least two replicates"));
    }
    let per_rep = replicate_g_values(spec, grid, replicates, kind, seed)?;
    Ok(summarize(&per_rep, grid, &spec.to_string(), kind))
}

pub fn summarize(per_rep: &[Vec<f64>], grid: &SGrid, ensemble: &str, kind: DistanceKind) -> Vec<PcfEstimate> {
    grid.values()
        .iter()
        .enumerate()
        .map(|(k, &s)| {
            let column: Vec<f64> = per_rep.iter().map(|row| row[k]).collect();
            let (mean, stderr) = mean_and_stderr(&column);
            PcfEstimate {
                s,
                mean,
                stderr,
                replicates: per_rep.len(),
                ensemble: ensemble.to_string(),
                distance: kind,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub s: f64,
    pub mean: f64,
    pub stderr: f64,
    pub oracle: f64,
    pub z: f64,
    pub pass: bool,
}

pub const Z_PASS: f64 = 4.0;

pub fn z_score(mean: f64, stderr: f64, oracle: f64) -> f64 {
    let diff = mean - oracle;
    if diff == 0.0 {
        0.0
    } else if stderr == 0.0 {
        diff.signum() * f64::INFINITY
    } else {
        diff / stderr
    }
}

pub fn compare_to_oracle(estimates: &[PcfEstimate], oracle: &OracleCurve) -> Result<Vec<ComparisonRow>> {
    let s_values = oracle.s_values.values();
    if estimates.len() != s_values.len() {
        return Err(Error::GridMismatch(format!(
            "{} estimates against {} oracle values",
            estimates.len(),
            s_values.len()
        )));
    }
    estimates
        .iter()
        .zip(s_values.iter().zip(&oracle.values))
        .map(|(e, (&s, &value))| {
            if (e.s - s).abs() > 1e-12 * s.abs().max(1.0) {
                return Err(Error::GridMismatch(format!("estimate at s={} vs oracle at s={s}", e.s)));
            }
            let z = z_score(e.mean, e.stderr, value);
            Ok(ComparisonRow {
                s,
                mean: e.mean,
                stderr: e.stderr,
                oracle: value,
                z,
                pass: z.abs() <= Z_PASS,
            })
        })
        .collect()
}
