//! The recursive zonal equal-area partition EQ(2, N) of the unit sphere.
//!
//! EQ(2, N) consists of two polar caps of area `1/N` and `n` collars; collar
//! `i` is split into `m_i` congruent regions that are rectangles in
//! (colatitude, longitude). The collar count and the per-collar region
//! counts come from rounding "ideal" values with a carried remainder, and
//! the collar boundaries are then placed so every region has area exactly
//! `1/N`.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geom::SpherePoint;

/// Identifies one region: collar `0` is the north cap, `n + 1` the south cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RegionId {
    pub collar_index: usize,
    pub slot: usize,
}

impl RegionId {
    pub fn new(collar_index: usize, slot: usize) -> Self {
        RegionId { collar_index, slot }
    }
}

/// Serialized form; the field list is the JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EqPartitionData {
    n_regions: usize,
    cap_colatitude: f64,
    n_collars: usize,
    collar_colatitudes: Vec<f64>,
    region_counts: Vec<usize>,
    collar_phi_offsets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EqPartitionData", into = "EqPartitionData")]
pub struct EqPartition {
    n_regions: usize,
    cap_colatitude: f64,
    collar_colatitudes: Vec<f64>,
    region_counts: Vec<usize>,
    collar_phi_offsets: Vec<f64>,
    // cos of each collar colatitude; decreasing
    cos_colatitudes: Vec<f64>,
}

/// `round(x) = floor(x + 1/2)`.
fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Geometric extent of a region in spherical coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionBounds {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub phi_lo: f64,
    /// Longitude width; `2 pi` for caps and single-region collars.
    pub phi_width: f64,
}

impl EqPartition {
    /// Builds EQ(2, N).
    pub fn build(n_regions: usize) -> Result<Self> {
        if n_regions == 0 {
            return Err(domain("EQ(2, N) needs N >= 1"));
        }
        if n_regions == 1 {
            return Ok(Self::from_parts(1, PI, Vec::new(), Vec::new(), Vec::new()));
        }
        let n = n_regions as f64;
        let theta_c = 2.0 * (1.0 / n.sqrt()).asin();
        if n_regions == 2 {
            return Ok(Self::from_parts(2, theta_c, vec![theta_c], Vec::new(), Vec::new()));
        }
        let n_collars = Self::collar_count(n_regions);
        let fitting = fitting_colatitudes(theta_c, n_collars);

        let mut counts = Vec::with_capacity(n_collars);
        let mut carry = 0.0;
        for i in 0..n_collars {
            let ideal = (fitting[i].cos() - fitting[i + 1].cos()) / (2.0 / n);
            let m = round_half_up(ideal + carry);
            carry += ideal - m;
            counts.push(m as usize);
        }

        let mut colat = Vec::with_capacity(n_collars + 1);
        let mut cumulative = 1usize;
        colat.push(theta_c);
        for &m in &counts[..n_collars - 1] {
            cumulative += m;
            colat.push(2.0 * ((cumulative as f64 / n).sqrt()).asin());
        }
        colat.push(PI - theta_c);
        let offsets = vec![0.0; n_collars];
        Ok(Self::from_parts(n_regions, theta_c, colat, counts, offsets))
    }

    fn collar_count(n_regions: usize) -> usize {
        let n = n_regions as f64;
        let theta_c = 2.0 * (1.0 / n.sqrt()).asin();
        let ideal_angle = (4.0 * PI / n).sqrt();
        let ideal = (PI - 2.0 * theta_c) / ideal_angle;
        // N = 3 would round to zero collars, leaving a region unplaced.
        (round_half_up(ideal) as usize).max(1)
    }

    fn from_parts(
        n_regions: usize,
        cap_colatitude: f64,
        collar_colatitudes: Vec<f64>,
        region_counts: Vec<usize>,
        collar_phi_offsets: Vec<f64>,
    ) -> Self {
        let cos_colatitudes = collar_colatitudes.iter().map(|t| t.cos()).collect();
        EqPartition {
            n_regions,
            cap_colatitude,
            collar_colatitudes,
            region_counts,
            collar_phi_offsets,
            cos_colatitudes,
        }
    }

    /// Returns a copy with the given per-collar longitude rotations.
    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Result<Self> {
        if offsets.len() != self.n_collars() {
            return Err(domain("one offset per collar is required"));
        }
        self.collar_phi_offsets = offsets;
        Ok(self)
    }

    pub fn n_regions(&self) -> usize {
        self.n_regions
    }

    pub fn cap_colatitude(&self) -> f64 {
        self.cap_colatitude
    }

    pub fn n_collars(&self) -> usize {
        self.region_counts.len()
    }

    /// Collar boundaries `theta_1 .. theta_{n+1}`.
    pub fn collar_colatitudes(&self) -> &[f64] {
        &self.collar_colatitudes
    }

    /// Regions per collar `m_1 .. m_n`.
    pub fn region_counts(&self) -> &[usize] {
        &self.region_counts
    }

    pub fn collar_phi_offsets(&self) -> &[f64] {
        &self.collar_phi_offsets
    }

    /// The evenly spaced colatitudes the construction starts from,
    /// `theta_c + (i - 1) delta_F` for `i = 1 .. n + 1`.
    pub fn fitting_colatitudes(&self) -> Vec<f64> {
        if self.n_regions <= 2 {
            return self.collar_colatitudes.clone();
        }
        fitting_colatitudes(self.cap_colatitude, self.n_collars())
    }

    pub fn south_cap(&self) -> RegionId {
        RegionId::new(self.n_collars() + 1, 0)
    }

    /// All region ids, north to south.
    pub fn regions(&self) -> Vec<RegionId> {
        let mut out = Vec::with_capacity(self.n_regions);
        out.push(RegionId::new(0, 0));
        if self.n_regions == 1 {
            return out;
        }
        for (i, &m) in self.region_counts.iter().enumerate() {
            out.extend((0..m).map(|slot| RegionId::new(i + 1, slot)));
        }
        out.push(self.south_cap());
        out
    }

    fn check(&self, r: RegionId) -> Result<()> {
        let bad = Error::InvalidRegion {
            collar: r.collar_index,
            slot: r.slot,
        };
        if self.n_regions == 1 {
            return if r == RegionId::new(0, 0) { Ok(()) } else { Err(bad) };
        }
        let n = self.n_collars();
        let ok = match r.collar_index {
            0 => r.slot == 0,
            c if c == n + 1 => r.slot == 0,
            c if c <= n => r.slot < self.region_counts[c - 1],
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(bad)
        }
    }

    pub fn is_cap(&self, r: RegionId) -> bool {
        r.collar_index == 0 || r.collar_index == self.n_collars() + 1
    }

    pub fn region_bounds(&self, r: RegionId) -> Result<RegionBounds> {
        self.check(r)?;
        let full = 2.0 * PI;
        if self.n_regions == 1 {
            return Ok(RegionBounds {
                theta_lo: 0.0,
                theta_hi: PI,
                phi_lo: 0.0,
                phi_width: full,
            });
        }
        let n = self.n_collars();
        Ok(match r.collar_index {
            0 => RegionBounds {
                theta_lo: 0.0,
                theta_hi: self.collar_colatitudes[0],
                phi_lo: 0.0,
                phi_width: full,
            },
            c if c == n + 1 => RegionBounds {
                theta_lo: self.collar_colatitudes[n],
                theta_hi: PI,
                phi_lo: 0.0,
                phi_width: full,
            },
            c => {
                let m = self.region_counts[c - 1] as f64;
                let width = full / m;
                RegionBounds {
                    theta_lo: self.collar_colatitudes[c - 1],
                    theta_hi: self.collar_colatitudes[c],
                    phi_lo: self.collar_phi_offsets[c - 1] + r.slot as f64 * width,
                    phi_width: width,
                }
            }
        })
    }

    /// Normalized area from the colatitude bounds.
    pub fn region_area(&self, r: RegionId) -> Result<f64> {
        let b = self.region_bounds(r)?;
        let h = |t: f64| {
            let s = (0.5 * t).sin();
            s * s
        };
        Ok((h(b.theta_hi) - h(b.theta_lo)) * b.phi_width / (2.0 * PI))
    }

    /// Boundary length of one region.
    ///
    /// Caps contribute their circle; collar regions two meridian arcs and two
    /// latitude arcs (a collar holding a single region has no meridian edges).
    pub fn region_perimeter(&self, r: RegionId) -> Result<f64> {
        self.check(r)?;
        if self.n_regions == 1 {
            return Ok(0.0);
        }
        if self.is_cap(r) {
            return Ok(2.0 * PI * self.cap_colatitude.sin());
        }
        let b = self.region_bounds(r)?;
        let latitude = b.phi_width * (b.theta_lo.sin() + b.theta_hi.sin());
        let meridians = if self.region_counts[r.collar_index - 1] == 1 {
            0.0
        } else {
            2.0 * (b.theta_hi - b.theta_lo)
        };
        Ok(latitude + meridians)
    }

    /// Sum of all region perimeters; interior edges count once per adjacent region.
    pub fn total_perimeter(&self) -> f64 {
        self.regions()
            .into_iter()
            .map(|r| self.region_perimeter(r).expect("valid region"))
            .sum()
    }

    /// Exact geodesic diameter of a region.
    pub fn region_diameter(&self, r: RegionId) -> Result<f64> {
        self.check(r)?;
        if self.n_regions == 1 {
            return Ok(PI);
        }
        if self.is_cap(r) {
            return Ok((2.0 * self.cap_colatitude).min(PI));
        }
        let b = self.region_bounds(r)?;
        // cos(dist) = cos t1 cos t2 + cos(dphi) sin t1 sin t2, which decreases in
        // dphi on [0, pi]; the widest longitude gap wins.
        let c = b.phi_width.min(PI).cos();
        let (lo, hi) = (b.theta_lo, b.theta_hi);
        let mut min_cos = f64::INFINITY;
        for t1 in [lo, hi] {
            // f(t2) = A cos t2 + B sin t2 = R cos(t2 - psi)
            let a = t1.cos();
            let bb = c * t1.sin();
            let f = |t2: f64| a * t2.cos() + bb * t2.sin();
            min_cos = min_cos.min(f(lo)).min(f(hi));
            let psi = bb.atan2(a);
            for k in -1..=2 {
                let t = psi + PI + 2.0 * PI * k as f64;
                if t > lo && t < hi {
                    min_cos = min_cos.min(f(t));
                }
            }
        }
        Ok(min_cos.clamp(-1.0, 1.0).acos())
    }

    /// Region containing `x`; colatitude bands are `[theta_i, theta_{i+1})`
    /// and longitude slots `[phi_lo, phi_hi)`, with the south cap closed at the pole.
    pub fn locate(&self, x: &SpherePoint) -> RegionId {
        if self.n_regions == 1 {
            return RegionId::new(0, 0);
        }
        let z = x.coords()[2];
        let band = self.cos_colatitudes.partition_point(|&c| c >= z);
        let n = self.n_collars();
        if band == 0 || band == n + 1 {
            return RegionId::new(band, 0);
        }
        let m = self.region_counts[band - 1];
        if m == 1 {
            return RegionId::new(band, 0);
        }
        let phi = (x.longitude() - self.collar_phi_offsets[band - 1]).rem_euclid(2.0 * PI);
        let slot = ((phi * m as f64 / (2.0 * PI)).floor() as usize).min(m - 1);
        RegionId::new(band, slot)
    }

    /// Uniform point in region `r`: `cos(theta)` uniform over the band and
    /// longitude uniform over the slot.
    pub fn sample_in_region<R: Rng + ?Sized>(&self, r: RegionId, rng: &mut R) -> Result<SpherePoint> {
        let b = self.region_bounds(r)?;
        let z_hi = if b.theta_lo == 0.0 { 1.0 } else { b.theta_lo.cos() };
        let z_lo = if b.theta_hi == PI { -1.0 } else { b.theta_hi.cos() };
        let north_cap = r.collar_index == 0 && self.n_regions > 1;
        let south_closed = r.collar_index == self.n_collars() + 1 || self.n_regions == 1;
        let z = loop {
            let u: f64 = rng.random();
            let z = if north_cap {
                // (z_lo, 1]
                1.0 - u * (1.0 - z_lo)
            } else {
                // (z_lo, z_hi], closed below in the south cap
                z_hi - u * (z_hi - z_lo)
            };
            if z > z_lo || (south_closed && z >= z_lo) {
                break z.min(z_hi);
            }
        };
        let u: f64 = rng.random();
        let phi = b.phi_lo + u * b.phi_width;
        let rad = ((1.0 - z) * (1.0 + z)).max(0.0).sqrt();
        Ok(SpherePoint::from_unit_xyz(rad * phi.cos(), rad * phi.sin(), z))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn fitting_colatitudes(theta_c: f64, n_collars: usize) -> Vec<f64> {
    let step = (PI - 2.0 * theta_c) / n_collars as f64;
    (0..=n_collars)
        .map(|i| {
            if i == n_collars {
                PI - theta_c
            } else {
                theta_c + i as f64 * step
            }
        })
        .collect()
}

impl From<EqPartition> for EqPartitionData {
    fn from(p: EqPartition) -> Self {
        EqPartitionData {
            n_regions: p.n_regions,
            cap_colatitude: p.cap_colatitude,
            n_collars: p.region_counts.len(),
            collar_colatitudes: p.collar_colatitudes,
            region_counts: p.region_counts,
            collar_phi_offsets: p.collar_phi_offsets,
        }
    }
}

impl TryFrom<EqPartitionData> for EqPartition {
    type Error = Error;

    fn try_from(d: EqPartitionData) -> Result<Self> {
        let bad = |msg: &str| Err(domain(format!("invalid partition: {msg}")));
        if d.n_regions == 0 {
            return bad("n_regions must be >= 1");
        }
        if d.region_counts.len() != d.n_collars || d.collar_phi_offsets.len() != d.n_collars {
            return bad("region_counts and collar_phi_offsets need one entry per collar");
        }
        if d.n_regions == 1 {
            if d.n_collars != 0 || !d.collar_colatitudes.is_empty() {
                return bad("EQ(2, 1) has no collars");
            }
        } else {
            if d.collar_colatitudes.len() != d.n_collars + 1 {
                return bad("collar_colatitudes needs n_collars + 1 entries");
            }
            if d.region_counts.iter().sum::<usize>() + 2 != d.n_regions {
                return bad("region counts do not add up to N - 2");
            }
            if d.region_counts.contains(&0) {
                return bad("empty collar");
            }
            if d.collar_colatitudes.windows(2).any(|w| !(w[0] < w[1])) {
                return bad("colatitudes must increase strictly");
            }
            if d.collar_colatitudes[0] != d.cap_colatitude {
                return bad("first collar colatitude must equal the cap colatitude");
            }
        }
        if d.collar_colatitudes.iter().chain(&d.collar_phi_offsets).any(|v| !v.is_finite()) {
            return bad("non-finite angle");
        }
        Ok(EqPartition::from_parts(
            d.n_regions,
            d.cap_colatitude,
            d.collar_colatitudes,
            d.region_counts,
            d.collar_phi_offsets,
        ))
    }
}
