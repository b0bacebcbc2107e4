//! Pair correlation statistics of random point sets on the sphere.
//!
//! The crate samples four point processes on `S^2` (i.i.d. uniform points,
//! the spherical ensemble, the harmonic ensemble and jittered sampling over
//! the recursive zonal equal-area partition), evaluates the empirical pair
//! correlation statistic `G_{s,N}` and compares it with analytic and
//! quadrature reference curves.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dpp;
pub mod ensembles;
pub mod eq;
mod error;
pub mod geom;
pub mod io;
pub mod oracles;
pub mod pcf;
pub mod rng;
pub mod sph_harm;
pub mod specfun;

pub use error::{Error, Result};
