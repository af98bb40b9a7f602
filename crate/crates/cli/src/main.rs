//! `shapetree` command-line front end.
//!
//! Data and output paths go to stdout; failures print a single
//! `error[<kind>]: <message>` line on stderr and exit with a code that
//! identifies the failure class.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use shapetree::ellipse_lab::verify;
use shapetree::format::float;
use shapetree::fourier::{angle_spectrum, default_omegas, grid_omega, modulus_spectrum, spectral_ratio, Spectrum};
use shapetree::quadrature::QuadratureConfig;
use shapetree::sampling::{
    align_pair, sample_bisection, sample_by_curvature_maxima, sample_by_distance_seed,
    SamplePointSet,
};
use shapetree::spatial::spatial_descriptor;
use shapetree::{
    build_tree, match_shapes, parse_boundary, trace_raster_boundary, BinaryRaster, CostKind,
    ExtremumKind, Frame, MatchConfig, SampledBoundary, SamplingMethod, ShapeError, ShapeSamples,
    Weights,
};

#[derive(Parser)]
#[command(name = "shapetree", version, about = "Compact shape tree sampling, matching and descriptors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place invariant sample points on one boundary.
    Sample {
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Find point correspondences between two boundaries.
    Match {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, env = "SHAPETREE_WEIGHTS", default_value = "1,1,1")]
        weights: Weights,
        #[arg(long, default_value = "tentative")]
        cost: CostKind,
        /// Root index on the first shape; scanned over all roots when absent.
        #[arg(long)]
        root: Option<usize>,
        #[arg(long, default_value = "similarity")]
        frame: Frame,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Write spatial and spectral descriptors for one boundary.
    Describe {
        input: PathBuf,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Grid indices m1,m2 of the frequencies 2πm/(n-1) used for the ratios.
        #[arg(long, default_value = "1,2")]
        omega_pair: OmegaPair,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Re-run the half-ellipse curvature experiments.
    VerifyEllipses {
        /// Points per gap curve.
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value = "centroid-distance")]
    method: SamplingMethod,
    #[arg(short = 'n', default_value_t = 64)]
    n: usize,
    /// Seed on the farthest (`max`) or nearest (`min`) point from the centroid.
    #[arg(long, default_value = "max", value_parser = ["max", "min"])]
    extremum: String,
}

#[derive(Clone, Copy)]
struct OmegaPair(usize, usize);

impl std::str::FromStr for OmegaPair {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `m1,m2`, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a grid index"));
        Ok(Self(parse(a)?, parse(b)?))
    }
}

enum Failure {
    Shape(ShapeError),
    Claims(String),
}

impl From<ShapeError> for Failure {
    fn from(e: ShapeError) -> Self {
        Self::Shape(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::Shape(ShapeError::Io(e.to_string()))
    }
}

fn classify(e: &ShapeError) -> (u8, &'static str) {
    match e {
        ShapeError::Parse { .. } => (2, "parse"),
        ShapeError::InvalidArgument(_) => (2, "invalid-argument"),
        ShapeError::FrequencyNotSampled(_) => (2, "frequency-not-sampled"),
        ShapeError::Io(_) => (2, "io"),
        ShapeError::Degenerate(_) => (3, "degenerate"),
        ShapeError::NoDistinctExtrema(_) => (3, "no-distinct-extrema"),
        ShapeError::Trace(_) => (3, "trace"),
        ShapeError::Domain(_) => (3, "domain"),
        ShapeError::Alignment { .. } => (4, "alignment"),
        ShapeError::UnstableFrequencyPair { .. } => (5, "unstable-frequency-pair"),
        ShapeError::Quadrature { .. } => (6, "quadrature"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("bad arguments");
            eprintln!("error[usage]: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Shape(e)) => {
            let (code, kind) = classify(&e);
            eprintln!("error[{kind}]: {e}");
            ExitCode::from(code)
        }
        Err(Failure::Claims(msg)) => {
            eprintln!("error[claims-failed]: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Sample { input, sampling, out } => {
            let b = load(&input)?;
            let set = sample(&b, &sampling)?;
            let mut csv = String::from("arc_position\n");
            for p in &set.positions {
                csv.push_str(&float(*p));
                csv.push('\n');
            }
            println!("seed_arc={}", float(set.seed_arc));
            println!("method={}", set.method);
            println!("total_arc_length={}", float(set.total_length));
            emit(&out, "samples.csv", &csv)?;
        }
        Command::Match {
            first,
            second,
            sampling,
            weights,
            cost,
            root,
            frame,
            out,
        } => {
            let (bp, bq) = (load(&first)?, load(&second)?);
            let (sp, sq, _) = align_pair(&sample(&bp, &sampling)?, &sample(&bq, &sampling)?)?;
            if sp.len() != sq.len() {
                return Err(ShapeError::InvalidArgument(format!(
                    "shapes have {} and {} samples",
                    sp.len(),
                    sq.len()
                ))
                .into());
            }
            let p = ShapeSamples::new(&bp, sp)?;
            let q = ShapeSamples::new(&bq, sq)?;
            let cfg = MatchConfig {
                weights,
                cost,
                root,
                frame,
            };
            let report = match_shapes(&p, &q, &cfg)?;
            let mut csv = String::from("p_index,q_index\n");
            for [i, j] in &report.pairs {
                csv.push_str(&format!("{i},{j}\n"));
            }
            println!("cost={}", float(report.cost));
            println!("root_p={}", report.root_p);
            println!("root_q={}", report.root_q);
            emit(&out, "match.json", &json(&report))?;
            emit(&out, "correspondences.csv", &csv)?;
        }
        Command::Describe {
            input,
            sampling,
            root,
            omega_pair,
            out,
        } => {
            let b = load(&input)?;
            let s = ShapeSamples::new(&b, sample(&b, &sampling)?)?;
            let tree = build_tree(&s, root)?;
            let d = spatial_descriptor(&tree)?;
            let mut csv = String::from("angle_diff,norm_modulus\n");
            for (a, r) in d.angle_diffs.iter().zip(&d.norm_moduli) {
                csv.push_str(&format!("{},{}\n", float(*a), float(*r)));
            }
            emit(&out, "descriptor.csv", &csv)?;

            let n = s.len();
            let omegas = default_omegas(n);
            let spectra = [
                ("angle", angle_spectrum(&tree, &omegas)?),
                ("modulus", modulus_spectrum(&tree, &omegas)?),
            ];
            for (name, spec) in &spectra {
                emit(&out, &format!("{name}_spectrum.csv"), &spectrum_csv(spec))?;
            }
            let (w1, w2) = (grid_omega(n, omega_pair.0), grid_omega(n, omega_pair.1));
            for (name, spec) in &spectra {
                let r = spectral_ratio(spec, w1, w2)?;
                let body = RatioFile {
                    omega1: w1,
                    omega2: w2,
                    re: r.re,
                    im: r.im,
                };
                emit(&out, &format!("{name}_ratio.json"), &json(&body))?;
            }
        }
        Command::VerifyEllipses { points, out } => {
            let report = verify(&QuadratureConfig::default(), points)?;
            for ((a, b), curve) in &report.gap_curves {
                let mut csv = String::from("theta,value\n");
                for (t, v) in curve {
                    csv.push_str(&format!("{},{}\n", float(*t), float(*v)));
                }
                emit(&out, &format!("gap_curve_{a}_{b}.csv"), &csv)?;
            }
            let mut table = String::from("a,b,M\n");
            for row in &report.table {
                table.push_str(&format!("{},{},{}\n", float(row.a), float(row.b), float(row.m)));
            }
            emit(&out, "table1.csv", &table)?;
            emit(&out, "verdict.json", &json(&report.verdict))?;
            let v = &report.verdict;
            if !(v.equal_within_tol && v.m_orders_by_protrusion) {
                return Err(Failure::Claims(format!(
                    "equal_within_tol={}, m_orders_by_protrusion={}",
                    v.equal_within_tol, v.m_orders_by_protrusion
                )));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RatioFile {
    omega1: f64,
    omega2: f64,
    re: f64,
    im: f64,
}

fn load(path: &Path) -> Result<SampledBoundary, Failure> {
    let is_pgm = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("pgm"));
    let bytes = fs::read(path).map_err(|e| ShapeError::Io(format!("{}: {e}", path.display())))?;
    if is_pgm {
        return Ok(trace_raster_boundary(&BinaryRaster::from_pgm(&bytes)?)?);
    }
    let text = String::from_utf8(bytes).map_err(|_| ShapeError::Parse {
        line: 0,
        message: format!("{} is not UTF-8", path.display()),
    })?;
    Ok(parse_boundary(&text)?)
}

fn sample(b: &SampledBoundary, args: &SamplingArgs) -> Result<SamplePointSet, ShapeError> {
    let kind = if args.extremum == "min" {
        ExtremumKind::Minima
    } else {
        ExtremumKind::Maxima
    };
    match args.method {
        SamplingMethod::Bisection => sample_bisection(b, args.n),
        SamplingMethod::CentroidDistance => sample_by_distance_seed(b, args.n, kind),
        SamplingMethod::CurvatureMaxima => sample_by_curvature_maxima(b, args.n),
        SamplingMethod::Vertices => Ok(SamplePointSet::from_vertices(b)),
    }
}

fn spectrum_csv(s: &Spectrum) -> String {
    let mut csv = String::from("omega,re,im\n");
    for (w, v) in s.omegas.iter().zip(&s.values) {
        csv.push_str(&format!("{},{},{}\n", float(*w), float(v.re), float(v.im)));
    }
    csv
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Writes `name` under `dir` via a temporary file and rename, then prints its path.
fn emit(dir: &Path, name: &str, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    let target = dir.join(name);
    tmp.persist(&target).map_err(|e| e.error)?;
    println!("{}", target.display());
    Ok(())
}
