//! Distributional checks on the samplers and estimators. Seeds are fixed.

use std::f64::consts::PI;

use spherepcf::dpp::{hkpv_sample, HarmonicBasis, ProjectionBasis};
use spherepcf::ensembles::{sample_iid, sample_spherical, EnsembleSpec};
use spherepcf::eq::{EqPartition, RegionId};
use spherepcf::geom::{DistanceKind, SpherePoint};
use spherepcf::oracles::{iid_pcf_finite, m_rho};
use spherepcf::pcf::{g_statistic, mean_and_stderr, pcf_curve, SGrid};
use spherepcf::rng::{master_rng, replicate_rng};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn chi_square_p(observed: &[usize], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    ChiSquared::new((observed.len() - 1) as f64).unwrap().sf(stat)
}

/// Cell counts over the equal-area cells of EQ(2,k).
fn eq_cell_p(points: impl Iterator<Item = SpherePoint>, k: usize) -> f64 {
    let p = EqPartition::build(k).unwrap();
    let index: Vec<RegionId> = p.regions();
    let mut counts = vec![0usize; k];
    let mut total = 0;
    for x in points {
        let r = p.locate(&x);
        counts[index.iter().position(|&id| id == r).unwrap()] += 1;
        total += 1;
    }
    chi_square_p(&counts, &vec![total as f64 / k as f64; k])
}

struct Constant;

impl ProjectionBasis for Constant {
    fn n_functions(&self) -> usize {
        1
    }
    fn eval(&self, _: &SpherePoint, out: &mut [f64]) {
        out[0] = 1.0;
    }
}

/// {1, sqrt(3) z}: orthonormal for the normalized measure, K(x,x) = 1 + 3z^2.
struct Linear;

impl ProjectionBasis for Linear {
    fn n_functions(&self) -> usize {
        2
    }
    fn eval(&self, x: &SpherePoint, out: &mut [f64]) {
        out[0] = 1.0;
        out[1] = 3f64.sqrt() * x.coords()[2];
    }
    fn diagonal_bound(&self) -> f64 {
        4.0
    }
}

#[test]
fn iid_cells_are_uniform() {
    let mut rng = master_rng(11);
    let pts = sample_iid(2, 1_000_000, &mut rng).unwrap();
    let p = eq_cell_p(pts.into_iter(), 20);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn single_point_dpp_is_uniform() {
    let mut rng = master_rng(12);
    let pts = (0..100_000).map(|_| hkpv_sample(&Constant, &mut rng).unwrap().points.remove(0));
    let p = eq_cell_p(pts, 20);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn spherical_single_point_is_uniform() {
    let mut rng = master_rng(13);
    let pts = (0..100_000).map(|_| sample_spherical(1, &mut rng).unwrap().remove(0));
    let p = eq_cell_p(pts, 20);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn harmonic_intensity_is_uniform() {
    let basis = HarmonicBasis::new(1);
    let mut rng = master_rng(14);
    let pts = (0..10_000).flat_map(|_| hkpv_sample(&basis, &mut rng).unwrap().points);
    let p = eq_cell_p(pts, 12);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn two_point_density_matches_determinant() {
    // ordered density of (z1, z2) on [-1,1]^2 is (3/8)(a - b)^2
    let edges = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let bin = |t: f64| ((t + 1.0) * 2.0).floor().clamp(0.0, 3.0) as usize;
    let mut rng = master_rng(15);
    let n = 100_000;
    let mut counts = vec![0usize; 16];
    for _ in 0..n {
        let s = hkpv_sample(&Linear, &mut rng).unwrap();
        let (a, b) = (s.points[0].coords()[2], s.points[1].coords()[2]);
        counts[4 * bin(a) + bin(b)] += 1;
    }
    let mut expected = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            let (a0, a1, b0, b1) = (edges[i], edges[i + 1], edges[j], edges[j + 1]);
            let (la, lb): (f64, f64) = (a1 - a0, b1 - b0);
            let sq = (a1.powi(3) - a0.powi(3)) / 3.0 * lb + (b1.powi(3) - b0.powi(3)) / 3.0 * la;
            let cross = (a1 * a1 - a0 * a0) * (b1 * b1 - b0 * b0) / 2.0;
            expected.push(n as f64 * 3.0 / 8.0 * (sq - cross));
        }
    }
    assert!((expected.iter().sum::<f64>() - n as f64).abs() < 1e-6);
    assert!(expected.iter().all(|&e| e > 5.0));
    let p = chi_square_p(&counts, &expected);
    assert!(p > 1e-3, "p = {p}, counts {counts:?}");
}

#[test]
fn harmonic_l5_repels_at_small_s() {
    let grid = SGrid::new(vec![0.5]).unwrap();
    let e = &pcf_curve(&EnsembleSpec::Harmonic { l: 5 }, &grid, 2000, DistanceKind::Geodesic, 16).unwrap()[0];
    assert!(e.mean + 3.0 * e.stderr < 0.0625, "{} +- {}", e.mean, e.stderr);
}

fn ks_two_sample(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] <= t {
            i += 1;
        }
        while j < b.len() && b[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn spherical_g_is_rotation_invariant_in_distribution() {
    let c = (0.7f64).cos();
    let s = (0.7f64).sin();
    let rot = [[c, -s, 0.0], [s * 0.6, c * 0.6, 0.8], [-s * 0.8, -c * 0.8, 0.6]];
    let reps = 200;
    let draw = |seed: u64, rotate: bool| -> Vec<f64> {
        (0..reps)
            .map(|r| {
                let mut rng = replicate_rng(seed, r);
                let mut pts = sample_spherical(40, &mut rng).unwrap();
                if rotate {
                    pts = pts.iter().map(|x| x.rotated(&rot)).collect();
                }
                g_statistic(&pts, 1.5, 2, DistanceKind::Geodesic).unwrap()
            })
            .collect()
    };
    let d = ks_two_sample(draw(17, false), draw(18, true));
    // two-sample critical value at alpha = 0.001
    let crit = 1.949 * (2.0 / reps as f64).sqrt();
    assert!(d < crit, "D = {d}, critical {crit}");
}

#[test]
fn iid_curve_matches_finite_value() {
    let grid = SGrid::new(vec![1.0]).unwrap();
    let e = &pcf_curve(&EnsembleSpec::Iid { d: 2, n: 500 }, &grid, 200, DistanceKind::Geodesic, 19).unwrap()[0];
    let z = (e.mean - iid_pcf_finite(2, 500, 1.0)) / e.stderr;
    assert!(z.abs() <= 4.0, "z = {z}");
}

#[test]
fn zero_grid_gives_zero_estimates() {
    let grid = SGrid::new(vec![0.0]).unwrap();
    for spec in [EnsembleSpec::Spherical { n: 30 }, EnsembleSpec::Harmonic { l: 3 }] {
        let e = &pcf_curve(&spec, &grid, 20, DistanceKind::Geodesic, 20).unwrap()[0];
        assert_eq!((e.mean, e.stderr), (0.0, 0.0));
    }
}

#[test]
fn m_rho_boundary_main_term() {
    let n = 10_000usize;
    let p = EqPartition::build(n).unwrap();
    let r = RegionId::new(p.n_collars() / 2, 0);
    let rho = 0.1 / (n as f64).sqrt();
    let mut rng = master_rng(21);
    let (m, se) = m_rho(&p, r, rho, &mut rng, 2_000_000).unwrap();
    let perimeter = p.region_perimeter(r).unwrap();
    let main = perimeter * rho.powi(3) / (24.0 * PI * PI);
    let b = p.region_bounds(r).unwrap();
    let inradius = 0.5 * (b.theta_hi - b.theta_lo).min(b.phi_width * b.theta_lo.sin());
    let budget = perimeter * rho.powi(4) / inradius;
    assert!((m - main).abs() <= 4.0 * se + budget, "M = {m:e} +- {se:e}, main {main:e}, budget {budget:e}");
    // the main term dominates at this scale
    assert!((m / main - 1.0).abs() < 0.1, "ratio {}", m / main);
}

#[test]
fn coordinate_means_vanish() {
    let mut rng = master_rng(22);
    let pts = sample_iid(3, 100_000, &mut rng).unwrap();
    for k in 0..4 {
        let c: Vec<f64> = pts.iter().map(|x| x.coords()[k]).collect();
        let (m, se) = mean_and_stderr(&c);
        assert!(m.abs() <= 4.0 * se, "coordinate {k}: {m} +- {se}");
    }
}
