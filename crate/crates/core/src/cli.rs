//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use bsc_exponents::bounds::bound_curve;
use bsc_exponents::output::{format_f64, CurveFile};
use bsc_exponents::rates::{global_constants, r0_equation, CriticalRates};
use bsc_exponents::scalar::{AlphaTauPair, ChannelParam};
use bsc_exponents::spectrum::{l_func, mu, mu_half, mu_integral_tol, SpectrumArgs, MU_QUADRATURE_TOL};
use bsc_exponents::verify::{self, Suite, VerifyOptions, VerifyReport, REFERENCE_CONSTANTS};
use bsc_exponents::Error;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_COMPUTE: u8 = 3;
pub const EXIT_IO: u8 = 4;

pub const THREADS_ENV: &str = "BSC_EXPONENTS_THREADS";

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "bsc-exponents",
    version,
    about = "Error-exponent bounds for the binary symmetric channel"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the randomized suites.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    /// Overrides check tolerances (verify, constants) or the quadrature
    /// tolerance (mu).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Skip points whose solver fails instead of aborting.
    #[arg(long, global = true)]
    pub lenient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Quad,
    Closed,
    Half,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Constants,
    Lemma2,
    Oracle,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// tau0, R0, p0 and p1 against their reference values.
    Constants {
        /// Same as --format json.
        #[arg(long)]
        json: bool,
    },
    /// Capacity and critical rates of one channel.
    Rates {
        #[arg(long)]
        p: f64,
    },
    /// R1, R2, Rcrit and C over a grid of crossover probabilities.
    Figure1 {
        #[arg(long, default_value_t = 0.001)]
        p_min: f64,
        #[arg(long, default_value_t = 0.499)]
        p_max: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Lower and upper exponent envelopes over [0, C].
    Figure2 {
        #[arg(long, default_value_t = 0.01)]
        p: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Spectrum exponent mu(R, alpha, omega).
    Mu {
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Evaluate every applicable method and report the spread.
        #[arg(long)]
        all: bool,
    },
    /// Run a self-check suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        /// Number of random codes in the lemma2 suite.
        #[arg(long, default_value_t = 10_000)]
        codes: usize,
        /// Number of random points per cross-method check.
        #[arg(long, default_value_t = 1000)]
        oracle_points: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Compute(Error),
    Io(io::Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Compute(_) => EXIT_COMPUTE,
            CliError::Io(_) => EXIT_IO,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: a table and whether its checks passed.
pub struct Outcome {
    pub table: CurveFile,
    pub passed: bool,
}

impl Outcome {
    fn ok(table: CurveFile) -> Self {
        Self { table, passed: true }
    }
}

/// Sizes the global worker pool from the environment.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let mut format = g.format;
    let outcome = match &cli.command {
        Command::Constants { json } => {
            if *json {
                format = Format::Json;
            }
            constants(g)?
        }
        Command::Rates { p } => Outcome::ok(rates(*p)?),
        Command::Figure1 { p_min, p_max, points } => Outcome::ok(figure1(*p_min, *p_max, *points, g.lenient)?),
        Command::Figure2 { p, points } => Outcome::ok(figure2(*p, *points)?),
        Command::Mu {
            rate,
            alpha,
            omega,
            method,
            all,
        } => mu_cmd(*rate, *alpha, *omega, *method, *all, g.tol)?,
        Command::Verify {
            suite,
            codes,
            oracle_points,
        } => {
            let opts = VerifyOptions {
                seed: g.seed,
                tol: g.tol,
                lemma2_codes: *codes,
                oracle_points: *oracle_points,
            };
            verify_cmd(*suite, &opts)?
        }
    };
    let mut buf = Vec::new();
    match format {
        Format::Csv => outcome.table.write_csv(&mut buf)?,
        Format::Json => outcome.table.write_json(&mut buf)?,
    }
    match &g.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(&buf)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&buf)?;
            lock.flush()?;
        }
    }
    Ok(outcome)
}

fn channel(p: f64) -> CliResult<ChannelParam> {
    Ok(ChannelParam::new(p)?)
}

fn constants(g: &GlobalOpts) -> CliResult<Outcome> {
    let c = global_constants()?;
    let report = verify::run(
        Suite::Constants,
        &VerifyOptions {
            tol: g.tol,
            ..VerifyOptions::default()
        },
    )?;
    let values = [c.tau0, c.r0, c.p0, c.p1];
    let checks = &report.checks[..REFERENCE_CONSTANTS.len()];
    let table = CurveFile::new()
        .meta("version", VERSION)
        .meta_f64("tau0_equation_residual", r0_equation(c.tau0))
        .meta("passed", report.passed)
        .text("name", REFERENCE_CONSTANTS.iter().map(|r| r.0.to_string()).collect())
        .numbers("value", values.to_vec())
        .numbers("reference", REFERENCE_CONSTANTS.iter().map(|r| r.1).collect())
        .numbers(
            "delta",
            values.iter().zip(REFERENCE_CONSTANTS).map(|(v, r)| v - r.1).collect(),
        )
        .numbers("tolerance", checks.iter().map(|c| c.tolerance).collect())
        .text("passed", checks.iter().map(|c| c.passed.to_string()).collect());
    Ok(Outcome {
        table,
        passed: report.passed,
    })
}

fn rates(p: f64) -> CliResult<CurveFile> {
    let r = CriticalRates::compute(channel(p)?)?;
    let rows = [
        ("C", r.capacity),
        ("R_crit", r.r_crit),
        ("R1", r.r1),
        ("R2", r.r2),
        ("R_min", r.r_min),
    ];
    Ok(CurveFile::new()
        .meta("version", VERSION)
        .meta_f64("p", p)
        .text("name", rows.iter().map(|r| r.0.to_string()).collect())
        .numbers("value", rows.iter().map(|r| r.1).collect()))
}

fn figure1(p_min: f64, p_max: f64, points: usize, lenient: bool) -> CliResult<CurveFile> {
    if !(0.0 < p_min && p_min < p_max && p_max < 0.5) || points < 2 {
        return Err(CliError::Usage(format!(
            "need 0 < p_min < p_max < 1/2 and at least 2 points (got {p_min}, {p_max}, {points})"
        )));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| {
            if i + 1 == points {
                p_max
            } else {
                p_min + (p_max - p_min) * i as f64 / (points - 1) as f64
            }
        })
        .collect();
    let results: Vec<(f64, bsc_exponents::Result<CriticalRates>)> = grid
        .par_iter()
        .map(|&p| (p, ChannelParam::new(p).and_then(CriticalRates::compute)))
        .collect();
    let mut rows = Vec::with_capacity(points);
    for (p, r) in results {
        match r {
            Ok(r) => rows.push(r),
            Err(e) if lenient => eprintln!("warning: skipping p = {p}: {e}"),
            Err(e) => return Err(e.into()),
        }
    }
    let c = global_constants()?;
    let col = |f: fn(&CriticalRates) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    Ok(CurveFile::new()
        .meta("version", VERSION)
        .meta_f64("p_min", p_min)
        .meta_f64("p_max", p_max)
        .meta("points", points)
        .meta("rows", rows.len())
        .meta_f64("p0", c.p0)
        .meta_f64("p1", c.p1)
        .numbers("p", col(|r| r.p))
        .numbers("R1", col(|r| r.r1))
        .numbers("R2", col(|r| r.r2))
        .numbers("Rcrit", col(|r| r.r_crit))
        .numbers("C", col(|r| r.capacity)))
}

fn figure2(p: f64, points: usize) -> CliResult<CurveFile> {
    let curve = bound_curve(channel(p)?, points)?;
    let r = curve.rates;
    Ok(CurveFile::new()
        .meta("version", VERSION)
        .meta_f64("p", p)
        .meta("points", points)
        .meta("rows", curve.rows.len())
        .meta_f64("R_min", r.r_min)
        .meta_f64("R2", r.r2)
        .meta_f64("R1", r.r1)
        .meta_f64("R_crit", r.r_crit)
        .meta_f64("C", r.capacity)
        .numbers("R", curve.rows.iter().map(|r| r.rate).collect())
        .numbers("E_low", curve.rows.iter().map(|r| r.e_low).collect())
        .numbers("E_up", curve.rows.iter().map(|r| r.e_up).collect())
        .text(
            "region",
            curve.rows.iter().map(|r| r.region.as_str().to_string()).collect(),
        ))
}

fn mu_cmd(rate: f64, alpha: f64, omega: f64, method: Method, all: bool, tol: Option<f64>) -> CliResult<Outcome> {
    let args = SpectrumArgs::new(rate, alpha, omega)?;
    let is_half = args.alpha == 0.5;
    let methods: Vec<Method> = if all {
        let mut m = vec![Method::Quad, Method::Closed];
        if is_half {
            m.push(Method::Half);
        }
        m
    } else {
        vec![method]
    };
    let eval = |m: Method| -> CliResult<f64> {
        Ok(match m {
            Method::Quad => {
                if args.omega == 0.0 {
                    0.0
                } else {
                    mu_integral_tol(&args, tol.unwrap_or(MU_QUADRATURE_TOL))?.value
                }
            }
            Method::Closed => mu(&args)?,
            Method::Half => {
                if !is_half {
                    return Err(CliError::Compute(Error::Domain {
                        name: "alpha",
                        value: alpha,
                        constraint: "half method needs alpha = 1/2",
                    }));
                }
                mu_half(args.rate, args.omega)?
            }
        })
    };
    let values = methods.iter().map(|&m| eval(m)).collect::<CliResult<Vec<f64>>>()?;
    let names = methods
        .iter()
        .map(|m| m.to_possible_value().expect("not skipped").get_name().to_string())
        .collect();
    let mut table = CurveFile::new()
        .meta("version", VERSION)
        .meta_f64("R", args.rate)
        .meta_f64("alpha", args.alpha)
        .meta_f64("omega", args.omega)
        .meta_f64("tau", args.tau)
        .meta_f64("G", args.g());
    if all {
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        table = table.meta_f64("spread", hi - lo);
    }
    if (args.omega - args.g()).abs() <= 1e-12 {
        // at the top of the range mu(R, alpha, G) = L(G) + R - 1
        let expect = l_func(args.omega)? + args.rate - 1.0;
        let pair = AlphaTauPair::new(args.alpha, args.tau)?;
        let at_g = mu(&SpectrumArgs::at_g(pair))?;
        table = table
            .meta_f64("L(G)+R-1", expect)
            .meta_f64("top_distance_residual", (at_g - expect).abs());
    }
    Ok(Outcome::ok(table.text("method", names).numbers("mu", values)))
}

fn verify_cmd(suite: SuiteArg, opts: &VerifyOptions) -> CliResult<Outcome> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::Identities => vec![Suite::Identities],
        SuiteArg::Constants => vec![Suite::Constants],
        SuiteArg::Lemma2 => vec![Suite::Lemma2],
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let reports = suites
        .iter()
        .map(|&s| verify::run(s, opts))
        .collect::<bsc_exponents::Result<Vec<VerifyReport>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let mut table = CurveFile::new().meta("version", VERSION).meta("seed", opts.seed);
    for r in &reports {
        let seeds: Vec<String> = r.seeds.iter().map(u64::to_string).collect();
        table = table.meta(
            r.suite.as_str(),
            format!(
                "{} cases, worst residual {}, seeds [{}], {}",
                r.cases,
                format_f64(r.max_residual),
                seeds.join(" "),
                if r.passed { "PASS" } else { "FAIL" }
            ),
        );
    }
    table = table.meta("passed", passed);
    let rows: Vec<(&VerifyReport, &verify::Check)> = reports
        .iter()
        .flat_map(|r| r.checks.iter().map(move |c| (r, c)))
        .collect();
    let table = table
        .text(
            "suite",
            rows.iter().map(|(r, _)| r.suite.as_str().to_string()).collect(),
        )
        .text("check", rows.iter().map(|(_, c)| c.name.clone()).collect())
        .integers("cases", rows.iter().map(|(_, c)| c.cases as u64).collect())
        .numbers("max_residual", rows.iter().map(|(_, c)| c.max_residual).collect())
        .numbers("tolerance", rows.iter().map(|(_, c)| c.tolerance).collect())
        .text("passed", rows.iter().map(|(_, c)| c.passed.to_string()).collect());
    if !passed {
        eprintln!("verification failed");
    }
    Ok(Outcome { table, passed })
}
