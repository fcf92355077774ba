//! Command line front end.
//!
//! ```text
//! harmdisk extremal --mu mono:2 --R 1 --out jets.csv
//! harmdisk poisson  --boundary ellipse:0.5 --out series.csv
//! harmdisk scan     --mu zero --R 1 --a 0
//! harmdisk trace    --mu mono:2 --r 0.9999 --samples-n 16384 --out curve.csv --report rep.json
//! harmdisk polygon  2 1.0
//! harmdisk verify   --out report.json
//! ```
//!
//! Exit codes: 0 ok, 2 validation failure, 3 convergence failure, 4 inequality violation.
//! Failures print a JSON record `{code, message, witness}` on stderr.

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::diskmaps::{parse_complex, DiskSelfMap};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalSpec, ShiftConvention};
use crate::geometry::{rotational_symmetry_defect, trace, CurveReport};
use crate::grid::PolarGrid;
use crate::io::{self, write_atomic};
use crate::jet::{MapJet, PlanarMap};
use crate::numerics::QuadratureConfig;
use crate::poisson::{
    injectivity_sample, orientation_check, perimeter_of_family, poisson_extend, sp_scan,
    BoundaryFamily, BoundaryFunction, HarmonicSeries,
};
use crate::verify::{run_verify, POLYGON_TRACE_COUNT, POLYGON_TRACE_RADIUS};

#[derive(Debug, Clone, Parser)]
#[command(name = "harmdisk", version, about = "Extremal harmonic maps of the unit disk")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Forward,
    Pullback,
}

#[derive(Debug, Clone, Args)]
pub struct MapArgs {
    /// Beltrami datum: zero, const:re,im, mono:n, smono:k,n, blaschke:re,im,phase,
    /// poly:c0,c1,..., or a product joined by '*'.
    #[arg(long)]
    pub mu: Option<String>,
    /// Boundary data: circle, ellipse:b, polygonal:k, twist:eps, samples:path.csv.
    #[arg(long, conflicts_with = "mu")]
    pub boundary: Option<String>,
    /// Perimeter / 2pi. Defaults to 1 for extremal maps and to the measured boundary length for
    /// boundary data.
    #[arg(long = "R")]
    pub big_r: Option<f64>,
    /// Equality point of the shifted map (complex literal, e.g. 0.3-0.6i).
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, value_enum, default_value_t = Convention::Forward)]
    pub convention: Convention,
    /// Boundary sample count (power of two); family default when omitted.
    #[arg(long = "boundary-n")]
    pub boundary_n: Option<usize>,
    #[arg(long = "abs-tol")]
    pub abs_tol: Option<f64>,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Number of radii of the polar grid.
    #[arg(long = "grid-n", default_value_t = 24)]
    pub grid_n: usize,
    #[arg(long, default_value_t = 128)]
    pub angles: usize,
    #[arg(long = "grid-r", default_value_t = 0.95)]
    pub grid_r: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sample an extremal map on the polar grid: values and jets.
    Extremal {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Poisson-extend boundary data and write the Fourier series.
    Poisson {
        #[arg(long)]
        boundary: String,
        #[arg(long = "boundary-n")]
        boundary_n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Schwarz–Pick margin field |f_z|(1-|z|^2)/R and its maximum.
    Scan {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Slack allowed above margin 1 before reporting a violation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Trace the image of the circle |z| = r and report its geometry.
    Trace {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 0.999)]
        r: f64,
        #[arg(long = "samples-n", default_value_t = 8192)]
        samples_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also write the curve report as JSON here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the regular-polygon example mu = z^n end to end.
    Polygon {
        n: u32,
        #[arg(name = "RADIUS")]
        big_r: f64,
        #[arg(long, default_value_t = POLYGON_TRACE_RADIUS)]
        r: f64,
        #[arg(long = "samples-n", default_value_t = POLYGON_TRACE_COUNT)]
        samples_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full invariant suite.
    Verify {
        /// JSON report destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status plus the text destined for stdout.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub status: i32,
    pub stdout: String,
}

impl RunOutcome {
    fn ok(stdout: String) -> Self {
        RunOutcome { status: 0, stdout }
    }
}

/// Machine-readable failure record.
#[derive(Debug, Clone, Serialize)]
pub struct ErrorRecord {
    pub code: String,
    pub message: String,
    pub witness: Option<[f64; 2]>,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            code: e.code().to_string(),
            message: e.to_string(),
            witness: e.witness().map(|z| [z.re, z.im]),
        }
    }
}

enum Source {
    Extremal(ExtremalSpec),
    Series(HarmonicSeries, f64),
}

impl Source {
    fn map(&self) -> &dyn PlanarMap {
        match self {
            Source::Extremal(s) => s,
            Source::Series(s, _) => s,
        }
    }

    fn perimeter_radius(&self) -> f64 {
        match self {
            Source::Extremal(s) => s.perimeter_radius(),
            Source::Series(_, r) => *r,
        }
    }
}

fn quadrature(args: &MapArgs) -> QuadratureConfig {
    let mut cfg = QuadratureConfig::default();
    if let Some(t) = args.abs_tol {
        cfg.abs_tol = t;
    }
    if let Some(t) = args.rel_tol {
        cfg.rel_tol = t;
    }
    cfg
}

fn build_spec(args: &MapArgs, mu_text: &str) -> Result<ExtremalSpec> {
    let mu: DiskSelfMap = mu_text.parse()?;
    let convention = match args.convention {
        Convention::Forward => ShiftConvention::Forward,
        Convention::Pullback => ShiftConvention::Pullback,
    };
    ExtremalSpec::new(mu, args.big_r.unwrap_or(1.0), parse_complex(&args.a)?, args.theta)?
        .with_convention(convention)
        .with_quadrature(quadrature(args))
}

/// Samples and curve length of a boundary family.
fn build_boundary(text: &str, n: Option<usize>) -> Result<(BoundaryFunction, f64)> {
    let family: BoundaryFamily = text.parse()?;
    let boundary = BoundaryFunction::from_family(&family, n.unwrap_or_else(|| family.default_count()))?;
    Ok((boundary, perimeter_of_family(&family)?))
}

fn build_source(args: &MapArgs) -> Result<Source> {
    match (&args.mu, &args.boundary) {
        (Some(mu), None) => Ok(Source::Extremal(build_spec(args, mu)?)),
        (None, Some(b)) => {
            let (boundary, perimeter) = build_boundary(b, args.boundary_n)?;
            let series = poisson_extend(&boundary)?;
            let r = args.big_r.unwrap_or(perimeter / (2.0 * PI));
            Ok(Source::Series(series, r))
        }
        (None, None) => Err(Error::InvalidInput("one of --mu or --boundary is required".into())),
        (Some(_), Some(_)) => Err(Error::InvalidInput("--mu and --boundary are exclusive".into())),
    }
}

fn grid_points(g: &GridArgs, extra: Option<Complex64>) -> Result<Vec<Complex64>> {
    let mut pts = PolarGrid::chebyshev(g.grid_n, g.grid_r, g.angles)?.points();
    if let Some(z) = extra {
        if !pts.contains(&z) {
            pts.push(z);
        }
    }
    Ok(pts)
}

fn emit(out: &Option<PathBuf>, contents: &str, stdout: &mut String) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, contents),
        None => {
            stdout.push_str(contents);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct JetRow {
    z: Complex64,
    jet: MapJet,
}

#[derive(Serialize)]
struct ScanSummary {
    source: String,
    perimeter_radius: f64,
    max_margin: f64,
    argmax: Complex64,
    within_bound: bool,
    tolerance: f64,
    orientation_preserving: bool,
}

#[derive(Serialize)]
struct MarginRow {
    z: Complex64,
    margin: f64,
}

#[derive(Serialize)]
struct PolygonRow {
    check: String,
    value: f64,
    target: String,
    passed: bool,
}

/// Dispatches one command.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    match &config.command {
        Command::Extremal { map, grid, out, format } => {
            let mu = map
                .mu
                .as_deref()
                .ok_or_else(|| Error::InvalidInput("extremal needs --mu".into()))?;
            let spec = build_spec(map, mu)?;
            let pts = grid_points(grid, None)?;
            let jets = pts.iter().map(|&z| spec.jet_at(z)).collect::<Result<Vec<_>>>()?;
            let text = match format {
                Format::Csv => io::jets_csv(&pts, &jets),
                Format::Json => io::to_json(
                    &pts.iter()
                        .zip(&jets)
                        .map(|(&z, &jet)| JetRow { z, jet })
                        .collect::<Vec<_>>(),
                )?,
            };
            let mut stdout = String::new();
            emit(out, &text, &mut stdout)?;
            Ok(RunOutcome::ok(stdout))
        }
        Command::Poisson { boundary, boundary_n, out, format } => {
            let (b, perimeter) = build_boundary(boundary, *boundary_n)?;
            let series = poisson_extend(&b)?;
            let text = match format {
                Format::Csv => io::series_csv(&series),
                Format::Json => {
                    #[derive(Serialize)]
                    struct SeriesJson<'a> {
                        source: &'a str,
                        perimeter: f64,
                        injective_samples: bool,
                        coefficients: Vec<(i64, Complex64)>,
                    }
                    io::to_json(&SeriesJson {
                        source: b.source(),
                        perimeter,
                        injective_samples: injectivity_sample(&b),
                        coefficients: series.coefficients().iter().collect(),
                    })?
                }
            };
            let mut stdout = String::new();
            emit(out, &text, &mut stdout)?;
            if out.is_some() {
                stdout.push_str(&format!(
                    "perimeter {} R {}\n",
                    io::fmt_f64(perimeter),
                    io::fmt_f64(perimeter / (2.0 * PI))
                ));
            }
            Ok(RunOutcome::ok(stdout))
        }
        Command::Scan { map, grid, tol, out, format } => {
            let source = build_source(map)?;
            let extra = match &source {
                Source::Extremal(s) => Some(s.equality_point()),
                Source::Series(..) => None,
            };
            let pts = grid_points(grid, extra)?;
            let scan = sp_scan(source.map(), source.perimeter_radius(), &pts)?;
            let orientation = orientation_check(source.map(), &pts)?;
            let text = match format {
                Format::Csv => io::margin_csv(&pts, &scan.field),
                Format::Json => io::to_json(
                    &pts.iter()
                        .zip(&scan.field)
                        .map(|(&z, &margin)| MarginRow { z, margin })
                        .collect::<Vec<_>>(),
                )?,
            };
            let mut stdout = String::new();
            if out.is_some() {
                emit(out, &text, &mut stdout)?;
            }
            let summary = ScanSummary {
                source: source.map().source_id(),
                perimeter_radius: source.perimeter_radius(),
                max_margin: scan.max_margin,
                argmax: scan.argmax,
                within_bound: scan.within(*tol),
                tolerance: *tol,
                orientation_preserving: orientation.is_none(),
            };
            stdout.push_str(&format!(
                "max margin {:.6} at z={}{:+}i\n",
                scan.max_margin, scan.argmax.re, scan.argmax.im
            ));
            stdout.push_str(&io::to_json(&summary)?);
            if !scan.within(*tol) {
                return Err(Error::InequalityViolated {
                    what: "Schwarz-Pick margin |f_z|(1-|z|^2)/R <= 1".into(),
                    value: scan.max_margin,
                    bound: 1.0 + tol,
                    witness: Some(scan.argmax),
                });
            }
            Ok(RunOutcome::ok(stdout))
        }
        Command::Trace { map, r, samples_n, out, format, report } => {
            let source = build_source(map)?;
            let curve = trace(source.map(), *r, *samples_n)?;
            let rep = CurveReport::of(&curve)?;
            let text = match format {
                Format::Csv => io::curve_csv(&curve),
                Format::Json => io::to_json(&curve)?,
            };
            let mut stdout = String::new();
            if out.is_some() {
                emit(out, &text, &mut stdout)?;
            }
            let rep_json = io::to_json(&rep)?;
            match report {
                Some(path) => write_atomic(path, &rep_json)?,
                None => stdout.push_str(&rep_json),
            }
            Ok(RunOutcome::ok(stdout))
        }
        Command::Polygon { n, big_r, r, samples_n, out } => polygon(*n, *big_r, *r, *samples_n, out),
        Command::Verify { out } => {
            let report = run_verify();
            let mut stdout = report.summary();
            if let Some(path) = out {
                write_atomic(path, &io::to_json(&report)?)?;
                stdout.push_str(&format!("report written to {}\n", path.display()));
            }
            Ok(RunOutcome {
                status: if report.all_passed { 0 } else { 4 },
                stdout,
            })
        }
    }
}

fn polygon(n: u32, big_r: f64, r: f64, samples_n: usize, out: &Option<PathBuf>) -> Result<RunOutcome> {
    let spec = ExtremalSpec::normalized(DiskSelfMap::Monomial(n), big_r)?;
    let curve = trace(&spec, r, samples_n)?;
    let rep = CurveReport::of(&curve)?;
    let target = 2.0 * PI * big_r;
    let sym = rotational_symmetry_defect(&spec, r, samples_n, n + 2)?;
    let rows = vec![
        PolygonRow {
            check: "perimeter".into(),
            value: rep.perimeter,
            target: format!("2piR = {target:.6} within 1%"),
            passed: (rep.perimeter / target - 1.0).abs() <= 1e-2,
        },
        PolygonRow {
            check: "convex".into(),
            value: f64::from(u8::from(rep.convex)),
            target: "true".into(),
            passed: rep.convex,
        },
        PolygonRow {
            check: format!("symmetry {}-fold", n + 2),
            value: sym,
            target: "defect <= 1e-6".into(),
            passed: sym <= 1e-6,
        },
    ];
    let mut stdout = format!("polygon n={n} R={big_r} r={r} count={samples_n}\n");
    for row in &rows {
        stdout.push_str(&format!(
            "{:<20} {:<24} {:<28} {}\n",
            row.check,
            io::fmt_f64(row.value),
            row.target,
            if row.passed { "pass" } else { "FAIL" }
        ));
    }
    stdout.push_str(&format!(
        "area {}  dist_origin {}  turning_number {}\n",
        io::fmt_f64(rep.area),
        io::fmt_f64(rep.dist_origin),
        rep.turning_number
    ));
    if let Some(path) = out {
        write_atomic(path, &io::to_json(&rep)?)?;
    }
    let all = rows.iter().all(|r| r.passed);
    Ok(RunOutcome {
        status: if all { 0 } else { 4 },
        stdout,
    })
}

/// Runs the CLI for `args` and returns the process exit code, printing to stdout/stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&config) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.status
        }
        Err(e) => {
            let record = ErrorRecord::from(&e);
            eprintln!(
                "{}",
                serde_json::to_string(&record).unwrap_or_else(|_| e.to_string())
            );
            e.exit_code()
        }
    }
}
