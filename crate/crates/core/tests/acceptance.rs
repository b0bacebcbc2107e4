//! Acceptance criteria. Prints one PASS/FAIL line per check, then fails if
//! any check failed. Seeds are fixed so every run is identical.

use std::f64::consts::PI;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;
use spherepcf::dpp::uniform_point;
use spherepcf::ensembles::EnsembleSpec;
use spherepcf::eq::EqPartition;
use spherepcf::geom::{cap_area, funk_hecke, lens_area, sample_in_cap, tube_area, DistanceKind, SpherePoint};
use spherepcf::oracles::{
    harmonic_pcf_finite, harmonic_pcf_limit, iid_pcf_finite, iid_pcf_limit, jittered_pcf_large_s,
    jittered_pcf_numeric, jittered_pcf_small_s, jittered_pcf_small_s_perimeter, spherical_pcf, DEFAULT_C2,
    EQ_DIAMETER_CONSTANT,
};
use spherepcf::pcf::{g_statistic, mean_and_stderr, pcf_curve, replicate_g_values, scaled_pair_distances, SGrid};
use spherepcf::rng::master_rng;
use spherepcf::specfun::{
    binomial, gamma_fn, integrate, jacobi_poly, ln_gamma, pochhammer, QuadratureSpec,
};

const Z: f64 = 4.0;

#[derive(Default)]
struct Report {
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, what: &str, pass: bool, detail: String) {
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("{tag} [{id}] {what}: {detail}");
        if !pass {
            self.failed.push(format!("[{id}] {what}"));
        }
    }

    fn within_se(&mut self, id: &str, what: &str, mean: f64, se: f64, target: f64) {
        let z = (mean - target) / se;
        self.check(
            id,
            what,
            z.abs() <= Z,
            format!("mean {mean:.6e} se {se:.2e} target {target:.6e} z {z:+.2}"),
        );
    }

    fn runtime(&mut self, id: &str, start: Instant, limit: Duration) {
        let t = start.elapsed();
        self.check(id, "runtime", t <= limit, format!("{:.1}s (limit {}s)", t.as_secs_f64(), limit.as_secs()));
    }
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let n = 1000;
    let grid = SGrid::new(vec![0.5, 1.0, 2.0]).unwrap();
    let est = pcf_curve(&EnsembleSpec::Iid { d: 2, n }, &grid, 200, DistanceKind::Geodesic, 101).unwrap();
    for e in &est {
        r.within_se("1", &format!("iid N=1000 s={} vs s^2/4", e.s), e.mean, e.stderr, iid_pcf_limit(2, e.s));
        r.within_se(
            "1",
            &format!("iid N=1000 s={} vs (N-1) sigma(C(s/sqrt N))", e.s),
            e.mean,
            e.stderr,
            iid_pcf_finite(2, n, e.s),
        );
    }
    r.runtime("1", start, Duration::from_secs(60));
}

fn criterion_2(r: &mut Report) {
    let start = Instant::now();
    let n = 80;
    let grid = SGrid::new(vec![0.5, 1.0, 2.0, 3.0]).unwrap();
    let est = pcf_curve(&EnsembleSpec::Spherical { n }, &grid, 500, DistanceKind::Euclidean, 202).unwrap();
    for e in &est {
        let oracle = spherical_pcf(Some(n), e.s).unwrap();
        r.within_se("2", &format!("spherical N=80 euclidean s={}", e.s), e.mean, e.stderr, oracle);
    }
    let worst = (0..=30)
        .map(|k| {
            let s = 0.1 * k as f64;
            (spherical_pcf(Some(1_000_000), s).unwrap() - spherical_pcf(None, s).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    r.check("2", "finite N=10^6 vs limit, s in [0,3]", worst <= 1e-6, format!("max diff {worst:.2e} (tol 1e-6)"));
    let (lim, lead) = (spherical_pcf(None, 0.2).unwrap(), 0.2f64.powi(4) / 32.0);
    let rel = (lim / lead - 1.0).abs();
    r.check("2", "limit at s=0.2 vs s^4/32", rel <= 0.10, format!("{lim:.6e} vs {lead:.6e}, rel {rel:.3} (tol 0.10)"));
    r.runtime("2", start, Duration::from_secs(300));
}

fn criterion_3(r: &mut Report) {
    let start = Instant::now();
    let grid = SGrid::new(vec![1.0, 2.0, 4.0]).unwrap();
    let est = pcf_curve(&EnsembleSpec::Harmonic { l: 9 }, &grid, 500, DistanceKind::Geodesic, 303).unwrap();
    for e in &est {
        let oracle = harmonic_pcf_finite(2, 9, e.s).unwrap();
        r.within_se("3", &format!("harmonic L=9 geodesic s={}", e.s), e.mean, e.stderr, oracle);
    }
    for s in [0.5, 1.0, 2.0] {
        let (f, l) = (harmonic_pcf_finite(2, 200, s).unwrap(), harmonic_pcf_limit(2, s).unwrap());
        r.check(
            "3",
            &format!("finite L=200 vs limit s={s}"),
            (f - l).abs() <= 1e-3,
            format!("{f:.6e} vs {l:.6e}, diff {:.2e} (tol 1e-3)", (f - l).abs()),
        );
    }
    let (lim, lead) = (harmonic_pcf_limit(2, 0.1).unwrap(), 1e-4 / 32.0);
    let rel = (lim / lead - 1.0).abs();
    r.check("3", "limit at s=0.1 vs s^4/32", rel <= 0.05, format!("{lim:.6e} vs {lead:.6e}, rel {rel:.4} (tol 0.05)"));
    r.runtime("3", start, Duration::from_secs(600));
}

fn criterion_4(r: &mut Report) {
    let start = Instant::now();
    for n in [2usize, 10, 100, 200, 1000, 10_000] {
        let p = EqPartition::build(n).unwrap();
        let nf = n as f64;
        let regions = p.regions();
        let area_err = regions
            .iter()
            .map(|&id| (p.region_area(id).unwrap() - 1.0 / nf).abs())
            .fold(0.0, f64::max);
        r.check("4", &format!("EQ(2,{n}) areas = 1/N"), area_err <= 1e-12, format!("max error {area_err:.2e} (tol 1e-12)"));
        let total: usize = p.region_counts().iter().sum::<usize>() + 2;
        r.check("4", &format!("EQ(2,{n}) sum m_i + 2 = N"), total == n && regions.len() == n, format!("{total}"));
        let cos_gap = p
            .collar_colatitudes()
            .iter()
            .zip(p.fitting_colatitudes())
            .map(|(t, f)| (t.cos() - f.cos()).abs())
            .fold(0.0, f64::max);
        r.check(
            "4",
            &format!("EQ(2,{n}) |cos theta_i - cos theta_F,i| <= 1/N"),
            cos_gap <= 1.0 / nf,
            format!("{cos_gap:.3e} vs {:.3e}", 1.0 / nf),
        );
        let diam = regions
            .iter()
            .map(|&id| p.region_diameter(id).unwrap())
            .fold(0.0, f64::max);
        let bound = EQ_DIAMETER_CONSTANT / nf.sqrt();
        r.check(
            "4",
            &format!("EQ(2,{n}) max diameter <= 12.8/sqrt(N)"),
            diam <= bound,
            format!("{diam:.4} vs {bound:.4}"),
        );
    }
    for n in [10_000usize, 100_000] {
        let p = EqPartition::build(n).unwrap();
        let ratio = p.total_perimeter() / (8.0 * (PI * n as f64).sqrt());
        r.check(
            "4",
            &format!("EQ(2,{n}) total perimeter / 8 sqrt(pi N)"),
            (ratio - 1.0).abs() <= 0.02,
            format!("{ratio:.5} (tol 0.02)"),
        );
    }
    r.runtime("4", start, Duration::from_secs(60));
}

fn criterion_5(r: &mut Report) {
    let start = Instant::now();
    let p = Arc::new(EqPartition::build(400).unwrap());
    let spec = EnsembleSpec::Jittered(p.clone());
    let grid = SGrid::new(vec![20.0]).unwrap();
    let e = &pcf_curve(&spec, &grid, 500, DistanceKind::Euclidean, 505).unwrap()[0];
    r.within_se("5", "jittered EQ(2,400) s=20 euclidean vs s^2/4 - 1", e.mean, e.stderr, jittered_pcf_large_s(2, 20.0));
    // geodesic scaling at this N: every region lies inside each cap of radius 1
    let g = &pcf_curve(&spec, &grid, 500, DistanceKind::Geodesic, 506).unwrap()[0];
    let exact = 400.0 * cap_area(2, 1.0) - 1.0;
    r.within_se("5", "jittered EQ(2,400) s=20 geodesic vs N sigma(C(1)) - 1", g.mean, g.stderr, exact);

    let big = EqPartition::build(10_000).unwrap();
    let mut rng = master_rng(507);
    let s = 0.2;
    let (mean, se) = jittered_pcf_numeric(&big, s, DistanceKind::Geodesic, &mut rng, 10_000_000).unwrap();
    let (value, bound) = jittered_pcf_small_s(s, DEFAULT_C2).unwrap();
    let (lo, hi) = (value - bound - Z * se, value + bound + Z * se);
    r.check(
        "5",
        "EQ(2,10^4) s=0.2 numeric in s^3/(8 pi^2) +- C2 s^4 +- 4 SE",
        (lo..=hi).contains(&mean),
        format!("{mean:.4e} (se {se:.1e}) in [{lo:.4e}, {hi:.4e}]"),
    );
    let derived = jittered_pcf_small_s_perimeter(s);
    r.check(
        "5",
        "EQ(2,10^4) s=0.2 numeric vs perimeter main term s^3/(3 pi^1.5) (info, 5%)",
        (mean / derived - 1.0).abs() <= 0.05,
        format!("{mean:.4e} vs {derived:.4e}"),
    );
    r.runtime("5", start, Duration::from_secs(600));
}

fn lens_integral(rho: f64, tau: f64) -> f64 {
    if tau >= rho {
        return 0.0;
    }
    let f = |phi: f64| {
        let q = (tau.tan() / phi.tan()).powi(2);
        phi.sin() * 2.0 * (1.0 - q).max(0.0).sqrt().asin()
    };
    integrate(f, tau, rho, &QuadratureSpec::with_tol(1e-13)).unwrap() / (4.0 * PI)
}

fn criterion_6(r: &mut Report) {
    let mut rng = master_rng(606);
    let mut worst_analytic: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    let north = SpherePoint::from_spherical(0.0, 0.0);
    for rho in [0.1, 0.3, 0.6, 1.0, 1.4] {
        for frac in [0.0, 0.2, 0.5, 0.8, 1.2] {
            let tau = rho * frac;
            let closed = lens_area(rho, tau).unwrap();
            worst_analytic = worst_analytic.max((closed - lens_integral(rho, tau)).abs());
            // cap centre at distance pi/2 + tau from the north pole
            let centre = SpherePoint::from_spherical(PI / 2.0 + tau, 0.3);
            let n = 200_000;
            let hits = (0..n)
                .filter(|_| sample_in_cap(&centre, rho, &mut rng).dot(&north) > 0.0)
                .count();
            let frac_in = hits as f64 / n as f64;
            let cap = cap_area(2, rho);
            let se = cap * (frac_in * (1.0 - frac_in) / n as f64).sqrt();
            let mc = cap * frac_in;
            let z = if se > 0.0 { (mc - closed) / se } else if mc == closed { 0.0 } else { f64::INFINITY };
            worst_z = worst_z.max(z.abs());
        }
    }
    r.check("6", "lens closed form vs integral form (5x5 grid)", worst_analytic <= 1e-8, format!("max diff {worst_analytic:.2e} (tol 1e-8)"));
    r.check("6", "lens closed form vs Monte Carlo (5x5 grid)", worst_z <= Z, format!("max |z| {worst_z:.2}"));
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    for d in [2u32, 3, 4] {
        for phi in [0.2, 0.8, 1.5, 2.5] {
            let c = f64::cos(phi);
            let v = funk_hecke(|t| if t > c { 1.0 } else { 0.0 }, d, &spec).unwrap();
            worst = worst.max((v - cap_area(d, phi)).abs());
        }
    }
    r.check("6", "funk_hecke indicator vs cap_area", worst <= 1e-8, format!("max diff {worst:.2e} (tol 1e-8)"));
    let band = tube_area(2.0 * PI, PI / 2.0);
    r.check("6", "tube area of great circle at theta=pi/2", (band - 1.0).abs() <= 1e-15, format!("{band}"));
}

fn criterion_7(r: &mut Report) {
    let s: f64 = 0.3;
    let sph = spherical_pcf(None, s).unwrap();
    let harm = harmonic_pcf_limit(2, s).unwrap();
    let jit = jittered_pcf_small_s(s.min(0.249), DEFAULT_C2).unwrap().0 * (s / s.min(0.249)).powi(3);
    let jit_main = jittered_pcf_small_s_perimeter(s);
    let iid = iid_pcf_limit(2, s);
    r.check(
        "7",
        "oracle spherical ~ harmonic",
        (sph / harm - 1.0).abs() < 0.05,
        format!("{sph:.4e} vs {harm:.4e}"),
    );
    r.check(
        "7",
        "oracle max(spherical, harmonic) < jittered < iid",
        sph.max(harm) < jit && jit < iid && sph.max(harm) < jit_main && jit_main < iid,
        format!("{:.4e} < {jit:.4e} (s^3/8pi^2), {jit_main:.4e} (perimeter term) < {iid:.4e}", sph.max(harm)),
    );

    let n = 64;
    let reps = 1000;
    let grid = SGrid::new(vec![s]).unwrap();
    let specs = [
        EnsembleSpec::Spherical { n },
        EnsembleSpec::Harmonic { l: 7 },
        EnsembleSpec::Jittered(Arc::new(EqPartition::build(n).unwrap())),
        EnsembleSpec::Iid { d: 2, n },
    ];
    let est: Vec<(f64, f64)> = specs
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let e = &pcf_curve(spec, &grid, reps, DistanceKind::Geodesic, 700 + i as u64).unwrap()[0];
            (e.mean, e.stderr)
        })
        .collect();
    let below = |a: (f64, f64), b: (f64, f64)| {
        let gap = b.0 - a.0;
        let se = (a.1 * a.1 + b.1 * b.1).sqrt();
        (gap > 3.0 * se, gap / se)
    };
    for (lo, hi, label) in [(0, 2, "spherical < jittered"), (1, 2, "harmonic < jittered"), (2, 3, "jittered < iid")] {
        let (ok, z) = below(est[lo], est[hi]);
        r.check(
            "7",
            &format!("Monte Carlo N=64 s=0.3 {label} at 3 SE"),
            ok,
            format!("{:.3e} vs {:.3e}, gap {z:.1} SE", est[lo].0, est[hi].0),
        );
    }
}

fn brute_g(points: &[SpherePoint], s: f64) -> f64 {
    let n = points.len();
    let mut count = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i != j && points[i].dot(&points[j]).clamp(-1.0, 1.0).acos() * (n as f64).sqrt() <= s {
                count += 1;
            }
        }
    }
    count as f64 / n as f64
}

fn criterion_8(r: &mut Report) {
    let start = Instant::now();
    let mut rng = master_rng(808);

    // Jacobi three-term recurrence residual and endpoint identity
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (a, b) = (rng.random_range(-0.9..3.0), rng.random_range(-0.9..3.0));
        let x: f64 = rng.random_range(-1.0..1.0);
        let n: u32 = rng.random_range(1..40);
        let p = |k: u32| jacobi_poly(k, a, b, x).unwrap();
        let k = n as f64;
        let c = 2.0 * k + a + b;
        let lhs = 2.0 * (k + 1.0) * (k + a + b + 1.0) * c * p(n + 1);
        let rhs = (c + 1.0) * (c * (c + 2.0) * x + a * a - b * b) * p(n)
            - 2.0 * (k + a) * (k + b) * (c + 2.0) * p(n - 1);
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
        let at_one = jacobi_poly(n, a, b, 1.0).unwrap();
        worst = worst.max((at_one - binomial(k + a, n)).abs() / at_one.abs().max(1.0));
    }
    r.check("8", "Jacobi recurrence and P_n(1) identity", worst <= 1e-9, format!("max rel residual {worst:.2e}"));

    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let x: f64 = rng.random_range(0.05..20.0);
        let g = gamma_fn(x).unwrap();
        worst = worst.max((gamma_fn(x + 1.0).unwrap() / (x * g) - 1.0).abs());
        worst = worst.max((ln_gamma(x).unwrap() - g.ln()).abs() / g.ln().abs().max(1.0));
        let n: u32 = rng.random_range(0..10);
        let poch = gamma_fn(x + n as f64).unwrap() / g;
        worst = worst.max((pochhammer(x, n) / poch - 1.0).abs());
    }
    r.check("8", "gamma functional equation, ln_gamma, Pochhammer", worst <= 1e-12, format!("max rel error {worst:.2e}"));

    let mut ok = true;
    for n in 1..=500usize {
        let p = EqPartition::build(n).unwrap();
        ok &= p.regions().len() == n;
        ok &= p.collar_colatitudes().windows(2).all(|w| w[0] < w[1]);
        ok &= p
            .regions()
            .iter()
            .all(|&id| (p.region_area(id).unwrap() - 1.0 / n as f64).abs() <= 1e-12);
    }
    r.check("8", "EQ(2,N) invariants for N = 1..500", ok, "areas, counts, monotone colatitudes".into());

    let mut mismatches = 0;
    for seed in 0..20u64 {
        let mut rng = master_rng(seed);
        let pts: Vec<SpherePoint> = (0..60).map(|_| uniform_point(2, &mut rng)).collect();
        for s in [0.2, 0.7, 1.5, 4.0, 12.0] {
            if g_statistic(&pts, s, 2, DistanceKind::Geodesic).unwrap() != brute_g(&pts, s) {
                mismatches += 1;
            }
        }
        let unordered = scaled_pair_distances(&pts, 2, DistanceKind::Geodesic, 1.5).unwrap().len();
        if g_statistic(&pts, 1.5, 2, DistanceKind::Geodesic).unwrap() != 2.0 * unordered as f64 / 60.0 {
            mismatches += 1;
        }
    }
    r.check("8", "g_statistic vs brute force (20 sets x 5 s)", mismatches == 0, format!("{mismatches} mismatches"));
    r.runtime("8", start, Duration::from_secs(30));
}

#[test]
fn acceptance() {
    let mut r = Report::default();
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    // determinism of the replicate scheme
    let spec = EnsembleSpec::Iid { d: 2, n: 50 };
    let grid = SGrid::new(vec![1.0]).unwrap();
    let a = replicate_g_values(&spec, &grid, 4, DistanceKind::Geodesic, 1).unwrap();
    let b = replicate_g_values(&spec, &grid, 4, DistanceKind::Geodesic, 1).unwrap();
    r.check("8", "replicates reproducible from seed", a == b, String::new());
    let (_, se) = mean_and_stderr(&[1.0, 3.0]);
    r.check("8", "stderr uses n-1 variance", (se - 1.0).abs() < 1e-15, format!("{se}"));
    assert!(r.failed.is_empty(), "failed checks: {:#?}", r.failed);
}
