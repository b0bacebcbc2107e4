//! C interface to `spherepcf`.
//!
//! Every fallible function returns an [`SpcfStatus`]. On failure a message is
//! kept per thread and can be read with [`spcf_last_error_message`]. Points are
//! passed as row-major `double` arrays with `d + 1` coordinates per point.
//! Samplers seeded with `seed` match replicate 0 of the `spherepcf sample`
//! command for the same seed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spherepcf::ensembles::EnsembleSpec;
use spherepcf::eq::EqPartition;
use spherepcf::geom::{DistanceKind, SpherePoint};
use spherepcf::oracles;
use spherepcf::pcf::g_statistic;
use spherepcf::rng::replicate_rng;
use spherepcf::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpcfStatus {
    Ok = 0,
    NullArgument = 1,
    Domain = 2,
    DimensionMismatch = 3,
    BufferTooSmall = 4,
    SamplingFailure = 5,
    Numerical = 6,
    Parse = 7,
    Io = 8,
    Panic = 9,
}

/// Distance used by the pair statistic.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpcfDistance {
    Geodesic = 0,
    Euclidean = 1,
}

impl From<SpcfDistance> for DistanceKind {
    fn from(d: SpcfDistance) -> Self {
        match d {
            SpcfDistance::Geodesic => DistanceKind::Geodesic,
            SpcfDistance::Euclidean => DistanceKind::Euclidean,
        }
    }
}

/// Opaque handle to an EQ(2,N) partition.
pub struct SpcfPartition {
    inner: EqPartition,
}

struct Fail(SpcfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) | Error::InvalidRegion { .. } | Error::GridMismatch(_) => SpcfStatus::Domain,
            Error::DimensionMismatch { .. } => SpcfStatus::DimensionMismatch,
            Error::ToleranceNotMet { .. } => SpcfStatus::Numerical,
            Error::SamplingFailure(_) => SpcfStatus::SamplingFailure,
            Error::Parse(_) | Error::Json(_) | Error::Csv(_) => SpcfStatus::Parse,
            Error::Io(_) => SpcfStatus::Io,
        };
        Fail(status, e.to_string())
    }
}

type FfiResult = Result<(), Fail>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> FfiResult) -> SpcfStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SpcfStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SpcfStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SpcfStatus::NullArgument, format!("{what} is null"))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn write_value(out: *mut f64, v: spherepcf::Result<f64>) -> FfiResult {
    let slot = out_ref(out, "out")?;
    *slot = v?;
    Ok(())
}

/// Message for the last failed call on this thread, or null if it succeeded.
/// The pointer stays valid until the next call into this library on the same
/// thread.
#[no_mangle]
pub extern "C" fn spcf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn spcf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds EQ(2,n). Free the handle with `spcf_partition_free`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_new(n: usize, out: *mut *mut SpcfPartition) -> SpcfStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let inner = EqPartition::build(n)?;
        *slot = Box::into_raw(Box::new(SpcfPartition { inner }));
        Ok(())
    })
}

/// Reads a partition from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_from_json(json: *const c_char, out: *mut *mut SpcfPartition) -> SpcfStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Fail(SpcfStatus::Parse, e.to_string()))?;
        let inner = EqPartition::from_json(text)?;
        *slot = Box::into_raw(Box::new(SpcfPartition { inner }));
        Ok(())
    })
}

/// Serializes a partition to JSON. Free the string with `spcf_string_free`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_to_json(p: *const SpcfPartition, out: *mut *mut c_char) -> SpcfStatus {
    guard(|| {
        let slot = out_ref(out, "out")?;
        *slot = ptr::null_mut();
        let p = p.as_ref().ok_or_else(|| null("partition"))?;
        let json = p.inner.to_json()?;
        *slot = CString::new(json).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_free(p: *mut SpcfPartition) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn spcf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of regions, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_n_regions(p: *const SpcfPartition) -> usize {
    p.as_ref().map_or(0, |p| p.inner.n_regions())
}

/// Number of collars, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_n_collars(p: *const SpcfPartition) -> usize {
    p.as_ref().map_or(0, |p| p.inner.n_collars())
}

/// Total boundary length of all regions.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_total_perimeter(p: *const SpcfPartition, out: *mut f64) -> SpcfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("partition"))?;
        write_value(out, Ok(p.inner.total_perimeter()))
    })
}

/// Regions per collar. `n_written` receives the collar count even when the
/// buffer is too small.
///
/// # Safety
/// `out` must hold `capacity` values; `n_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_partition_region_counts(
    p: *const SpcfPartition,
    out: *mut usize,
    capacity: usize,
    n_written: *mut usize,
) -> SpcfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("partition"))?;
        let written = out_ref(n_written, "n_written")?;
        let counts = p.inner.region_counts();
        *written = counts.len();
        if counts.len() > capacity {
            return Err(too_small(counts.len(), capacity));
        }
        if !counts.is_empty() {
            if out.is_null() {
                return Err(null("out"));
            }
            ptr::copy_nonoverlapping(counts.as_ptr(), out, counts.len());
        }
        Ok(())
    })
}

fn too_small(needed: usize, capacity: usize) -> Fail {
    Fail(
        SpcfStatus::BufferTooSmall,
        format!("buffer holds {capacity} entries, {needed} needed"),
    )
}

unsafe fn sample_into(spec: &EnsembleSpec, seed: u64, out: *mut f64, capacity: usize, n_written: *mut usize) -> FfiResult {
    let written = out_ref(n_written, "n_written")?;
    let n = spec.n_points();
    *written = n;
    if n > capacity {
        return Err(too_small(n, capacity));
    }
    if out.is_null() {
        return Err(null("out"));
    }
    let points = spec.sample(&mut replicate_rng(seed, 0))?;
    let dim = spec.sphere_dim() + 1;
    let buf = std::slice::from_raw_parts_mut(out, n * dim);
    for (row, x) in buf.chunks_exact_mut(dim).zip(&points) {
        row.copy_from_slice(x.coords());
    }
    Ok(())
}

/// `n` i.i.d. uniform points on `S^d`. `capacity` and `n_written` count
/// points; the buffer needs `capacity * (d + 1)` doubles.
///
/// # Safety
/// `out` must hold `capacity * (d + 1)` doubles; `n_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_sample_iid(
    d: usize,
    n: usize,
    seed: u64,
    out: *mut f64,
    capacity: usize,
    n_written: *mut usize,
) -> SpcfStatus {
    guard(|| {
        if n == 0 || d == 0 {
            return Err(Fail(SpcfStatus::Domain, "need d >= 1 and n >= 1".into()));
        }
        sample_into(&EnsembleSpec::Iid { d, n }, seed, out, capacity, n_written)
    })
}

/// Spherical ensemble with `n` points on `S^2`.
///
/// # Safety
/// `out` must hold `3 * capacity` doubles; `n_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_sample_spherical(
    n: usize,
    seed: u64,
    out: *mut f64,
    capacity: usize,
    n_written: *mut usize,
) -> SpcfStatus {
    guard(|| {
        if n == 0 {
            return Err(Fail(SpcfStatus::Domain, "need n >= 1".into()));
        }
        sample_into(&EnsembleSpec::Spherical { n }, seed, out, capacity, n_written)
    })
}

/// Harmonic ensemble of degree `l`, with `(l + 1)^2` points on `S^2`.
///
/// # Safety
/// `out` must hold `3 * capacity` doubles; `n_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_sample_harmonic(
    l: usize,
    seed: u64,
    out: *mut f64,
    capacity: usize,
    n_written: *mut usize,
) -> SpcfStatus {
    guard(|| sample_into(&EnsembleSpec::Harmonic { l }, seed, out, capacity, n_written))
}

/// One uniform point in each region of `p`.
///
/// # Safety
/// `p` must be a live handle, `out` must hold `3 * capacity` doubles and
/// `n_written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_sample_jittered(
    p: *const SpcfPartition,
    seed: u64,
    out: *mut f64,
    capacity: usize,
    n_written: *mut usize,
) -> SpcfStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("partition"))?;
        let spec = EnsembleSpec::Jittered(std::sync::Arc::new(p.inner.clone()));
        sample_into(&spec, seed, out, capacity, n_written)
    })
}

/// `G_{s,N}` of `n_points` unit vectors in `R^{d+1}`.
///
/// # Safety
/// `points` must hold `n_points * (d + 1)` doubles and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_g_statistic(
    points: *const f64,
    n_points: usize,
    d: usize,
    s: f64,
    distance: SpcfDistance,
    out: *mut f64,
) -> SpcfStatus {
    guard(|| {
        if points.is_null() {
            return Err(null("points"));
        }
        if d == 0 {
            return Err(Fail(SpcfStatus::Domain, "need d >= 1".into()));
        }
        let raw = std::slice::from_raw_parts(points, n_points * (d + 1));
        let pts = raw
            .chunks_exact(d + 1)
            .map(|c| SpherePoint::new(c.to_vec()))
            .collect::<spherepcf::Result<Vec<_>>>()?;
        write_value(out, g_statistic(&pts, s, d, distance.into()))
    })
}

fn dim(d: u32) -> Result<(), Fail> {
    if d == 0 {
        Err(Fail(SpcfStatus::Domain, "need d >= 1".into()))
    } else {
        Ok(())
    }
}

/// i.i.d. limit `(omega_{d-1}/omega_d) s^d / d`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_iid_limit(d: u32, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| {
        dim(d)?;
        write_value(out, Ok(oracles::iid_pcf_limit(d, s)))
    })
}

/// Exact i.i.d. expectation for `n` points.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_iid_finite(d: u32, n: usize, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| {
        dim(d)?;
        if n == 0 {
            return Err(Fail(SpcfStatus::Domain, "need n >= 1".into()));
        }
        write_value(out, Ok(oracles::iid_pcf_finite(d, n, s)))
    })
}

/// Spherical ensemble expectation (euclidean distance) for `n` points.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_spherical_finite(n: usize, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| write_value(out, oracles::spherical_pcf(Some(n), s)))
}

/// Spherical ensemble limit `s^2/4 - 1 + exp(-s^2/4)`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_spherical_limit(s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| write_value(out, oracles::spherical_pcf(None, s)))
}

/// Harmonic ensemble expectation on `S^d` at degree `l`, by quadrature.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_harmonic_finite(d: u32, l: usize, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| write_value(out, oracles::harmonic_pcf_finite(d, l, s)))
}

/// Harmonic ensemble limit on `S^d`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_harmonic_limit(d: u32, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| write_value(out, oracles::harmonic_pcf_limit(d, s)))
}

/// Projective-space limit for Jacobi parameters `(alpha, beta)` and real
/// dimension `real_dim`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_projective_limit(
    alpha: f64,
    beta: f64,
    real_dim: u32,
    s: f64,
    out: *mut f64,
) -> SpcfStatus {
    guard(|| {
        let p = oracles::ProjectiveParams::new(alpha, beta, real_dim)?;
        write_value(out, oracles::projective_pcf_limit(&p, s))
    })
}

/// Jittered sampling at large `s`: the i.i.d. limit minus one.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_jittered_large_s(d: u32, s: f64, out: *mut f64) -> SpcfStatus {
    guard(|| {
        dim(d)?;
        write_value(out, Ok(oracles::jittered_pcf_large_s(d, s)))
    })
}

/// Jittered sampling at small `s` on EQ(2,N): value `s^3/(8 pi^2)` and error
/// bound `c2 s^4`. Valid for `0 <= s < 1/4`.
///
/// # Safety
/// `value` and `bound` must be valid.
#[no_mangle]
pub unsafe extern "C" fn spcf_oracle_jittered_small_s(s: f64, c2: f64, value: *mut f64, bound: *mut f64) -> SpcfStatus {
    guard(|| {
        let v = out_ref(value, "value")?;
        let b = out_ref(bound, "bound")?;
        let (x, e) = oracles::jittered_pcf_small_s(s, c2)?;
        *v = x;
        *b = e;
        Ok(())
    })
}
