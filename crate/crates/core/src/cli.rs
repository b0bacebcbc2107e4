//! The `spherepcf` command-line interface.
//!
//! Exit codes: 0 success, 1 a comparison outside `|z| <= 4`, 2 usage or
//! domain errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ensembles::EnsembleSpec;
use crate::eq::EqPartition;
use crate::error::{domain, Error, Result};
use crate::geom::DistanceKind;
use crate::io as files;
use crate::oracles::{OracleSpec, ProjectiveParams, DEFAULT_C2};
use crate::pcf::{compare_to_oracle, g_from_sorted, pcf_curve, scaled_pair_distances, summarize, SGrid};
use crate::rng::replicate_rng;

#[derive(Debug, Parser)]
#[command(name = "spherepcf", version, about = "Pair correlation statistics of point processes on spheres")]
pub struct Cli {
    /// Worker threads for replicate loops (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build EQ(2, N) and write it as JSON.
    Partition {
        #[arg(long = "n", visible_alias = "N")]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw point sets from an ensemble.
    Sample {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate E[G_{s,N}] over replicates.
    Pcf {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Read point sets from a CSV file instead of sampling.
        #[arg(long)]
        points: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value = "geodesic")]
        distance: DistanceKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a reference curve.
    Oracle {
        #[arg(long, value_enum)]
        ensemble: OracleName,
        /// Number of points or `inf` for the limit.
        #[arg(long = "n", visible_alias = "N")]
        n: Option<String>,
        /// Harmonic degree or `inf` for the limit.
        #[arg(long = "L")]
        l: Option<String>,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Real dimension of the projective space.
        #[arg(long = "D")]
        real_dim: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_C2)]
        c2: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare estimates with an oracle curve; exit 1 if any |z| > 4.
    Compare {
        #[arg(long)]
        estimates: PathBuf,
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleName {
    Iid,
    Spherical,
    Harmonic,
    Jittered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleName {
    Iid,
    Spherical,
    Harmonic,
    Projective,
    JitteredLargeS,
    JitteredSmallS,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleName>,
    #[arg(long = "n", visible_alias = "N")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long = "L")]
    pub l: Option<usize>,
    /// EQ partition JSON for the jittered ensemble (built from --n otherwise).
    #[arg(long)]
    pub partition: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// s-grid as start:stop:step or a comma-separated list.
    #[arg(long, alias = "s")]
    pub grid: String,
}

impl EnsembleArgs {
    fn spec(&self) -> Result<EnsembleSpec> {
        let need_n = || self.n.ok_or_else(|| domain("this ensemble needs --n"));
        let positive = |n: usize| if n == 0 { Err(domain("--n must be positive")) } else { Ok(n) };
        match self.ensemble {
            None => Err(domain("--ensemble is required")),
            Some(EnsembleName::Iid) => Ok(EnsembleSpec::Iid {
                d: self.d,
                n: positive(need_n()?)?,
            }),
            Some(EnsembleName::Spherical) => Ok(EnsembleSpec::Spherical {
                n: positive(need_n()?)?,
            }),
            Some(EnsembleName::Harmonic) => Ok(EnsembleSpec::Harmonic {
                l: self.l.ok_or_else(|| domain("harmonic ensemble needs --L"))?,
            }),
            Some(EnsembleName::Jittered) => {
                let p = match &self.partition {
                    Some(path) => read_partition(path)?,
                    None => EqPartition::build(need_n()?)?,
                };
                Ok(EnsembleSpec::Jittered(Arc::new(p)))
            }
        }
    }
}

fn read_partition(path: &Path) -> Result<EqPartition> {
    EqPartition::from_json(&std::fs::read_to_string(path)?)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn parse_size(raw: &Option<String>, flag: &str) -> Result<Option<usize>> {
    match raw.as_deref() {
        None => Err(domain(format!("this oracle needs {flag} (a number or inf)"))),
        Some(v) if v.eq_ignore_ascii_case("inf") => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("{flag} must be a number or inf, got {v:?}"))),
    }
}

fn partition_summary(p: &EqPartition) -> String {
    let diam: Vec<f64> = p
        .regions()
        .into_iter()
        .map(|r| p.region_diameter(r).expect("valid region"))
        .collect();
    let min = diam.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = diam.iter().cloned().fold(0.0, f64::max);
    format!(
        "EQ(2,{}): collars {}, regions per collar {:?}, min diameter {min:.6}, max diameter {max:.6}, total perimeter {:.6}",
        p.n_regions(),
        p.n_collars(),
        p.region_counts(),
        p.total_perimeter()
    )
}

/// Outcome of a command: success or a failed statistical comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

pub fn execute(cli: Cli) -> Result<Outcome> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(domain("--jobs must be positive"));
        }
        // a second call in the same process keeps the existing pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match cli.command {
        Command::Partition { n, out } => {
            let p = EqPartition::build(n)?;
            let mut w = output(&out)?;
            writeln!(w, "{}", p.to_json()?)?;
            w.flush()?;
            eprintln!("{}", partition_summary(&p));
        }
        Command::Sample {
            ensemble,
            seed,
            reps,
            out,
        } => {
            if reps == 0 {
                return Err(domain("--reps must be positive"));
            }
            let spec = ensemble.spec()?;
            let sets = (0..reps)
                .map(|r| spec.sample(&mut replicate_rng(seed, r as u64)))
                .collect::<Result<Vec<_>>>()?;
            files::write_points(output(&out)?, &sets)?;
        }
        Command::Pcf {
            ensemble,
            points,
            grid,
            reps,
            distance,
            seed,
            out,
        } => {
            let grid = SGrid::parse(&grid.grid)?;
            let rows = match points {
                Some(_) if ensemble.ensemble.is_some() => {
                    return Err(domain("--points and --ensemble are mutually exclusive"));
                }
                Some(path) => {
                    let sets = files::read_points(BufReader::new(File::open(path)?))?;
                    let per_rep = sets
                        .iter()
                        .map(|pts| {
                            let d = pts[0].sphere_dim();
                            let sorted = scaled_pair_distances(pts, d, distance, grid.max())?;
                            Ok(g_from_sorted(&sorted, pts.len(), grid.values()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    summarize(&per_rep, &grid, "file", distance)
                }
                None => pcf_curve(&ensemble.spec()?, &grid, reps, distance, seed)?,
            };
            files::write_estimates(output(&out)?, &rows)?;
        }
        Command::Oracle {
            ensemble,
            n,
            l,
            d,
            alpha,
            beta,
            real_dim,
            c2,
            grid,
            out,
        } => {
            let grid = SGrid::parse(&grid.grid)?;
            let spec = match ensemble {
                OracleName::Iid => OracleSpec::Iid {
                    d,
                    n: parse_size(&n, "--n")?,
                },
                OracleName::Spherical => OracleSpec::Spherical {
                    n: parse_size(&n, "--n")?,
                },
                OracleName::Harmonic => OracleSpec::Harmonic {
                    d,
                    l: parse_size(&l, "--L")?,
                },
                OracleName::Projective => {
                    let real_dim = real_dim.ok_or_else(|| domain("projective oracle needs --D"))?;
                    let alpha = alpha.unwrap_or(real_dim as f64 / 2.0 - 1.0);
                    let beta = beta.ok_or_else(|| domain("projective oracle needs --beta"))?;
                    OracleSpec::Projective {
                        params: ProjectiveParams::new(alpha, beta, real_dim)?,
                        l: parse_size(&l, "--L")?,
                    }
                }
                OracleName::JitteredLargeS => OracleSpec::JitteredLargeS { d },
                OracleName::JitteredSmallS => OracleSpec::JitteredSmallS { c2 },
            };
            let curve = spec.curve(&grid);
            for (s, v) in grid.values().iter().zip(&curve.values) {
                if v.is_nan() {
                    eprintln!("warning: s = {s} is outside the domain of {spec}");
                }
            }
            files::write_oracle(output(&out)?, &curve)?;
        }
        Command::Compare {
            estimates,
            oracle,
            out,
        } => {
            let est = files::read_estimates(BufReader::new(File::open(estimates)?))?;
            let curve = files::read_oracle(BufReader::new(File::open(oracle)?))?;
            let rows = compare_to_oracle(&est, &curve)?;
            files::write_comparison(output(&out)?, &rows)?;
            if !rows.iter().all(|r| r.pass) {
                return Ok(Outcome::Fail);
            }
        }
    }
    Ok(Outcome::Pass)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(Outcome::Pass) => 0,
        Ok(Outcome::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
