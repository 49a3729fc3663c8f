//! `polyvc`: command-line front end.
//!
//! Exit codes: 0 success, 2 regime warning under `--strict`, 3 input error,
//! 4 enumeration cap refused, 5 verification failed.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polyvc::bounds::{bounds_report, DEFAULT_PRECISION};
use polyvc::construction::{
    certify_construction, replay, Certificate, ConstructionSpec, SearchConfig, SearchMode,
};
use polyvc::document::PointSetDocument;
use polyvc::geometry::{hull_contains, HullOracle};
use polyvc::range::{shatter_check, vc_lower_bound_search, SearchStrategy, DEFAULT_CAP};
use polyvc::rational;
use polyvc::sampling::Sampler;
use polyvc::signs::signpattern_experiment;
use polyvc::{parallel, Error, PointSet, RationalPoint};

use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(name = "polyvc", version, about = "Exact experiments on the VC-dimension of k-vertex polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,

    /// Exit with status 2 when a report carries regime warnings.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Args, Debug)]
struct InputArg {
    /// Point-set document (JSON).
    #[arg(long, short)]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified evaluation of the upper-bound formulas.
    Bounds {
        #[arg(long, short)]
        dimension: u64,
        #[arg(long, short = 'k')]
        budget: u64,
        #[arg(long, short = 't')]
        set_size: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_PRECISION)]
        precision_bits: u32,
    },
    /// Whether a point lies in the convex hull of a point set.
    Membership {
        #[command(flatten)]
        input: InputArg,
        /// Comma-separated rationals, e.g. `1/2,3`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Realizability of every labeling of a point set by k-vertex polytopes.
    Shatter {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, short = 'k')]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Look for a shattered subset of a given size.
    VcSearch {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, short = 'k')]
        budget: usize,
        #[arg(long, short = 't')]
        set_size: usize,
        /// `exhaustive` or `random`.
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
        /// Restarts for the random strategy.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Build, search and certify the clustered-circle construction.
    Construct {
        #[arg(long, short)]
        dimension: usize,
        #[arg(long, short = 'k')]
        clusters: usize,
        #[arg(long)]
        cluster_radius: Option<String>,
        #[arg(long)]
        big_radius: Option<String>,
        /// `uniform` or `per-labeling`.
        #[arg(long, default_value = "uniform")]
        strategy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Where to write the certificate.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a construction certificate.
    VerifyConstruction {
        #[command(flatten)]
        input: InputArg,
    },
    /// Sign-pattern correspondence experiment on random configurations.
    Signpatterns {
        #[arg(long, short)]
        dimension: usize,
        #[arg(long, short = 'k')]
        budget: usize,
        #[arg(long, short = 't')]
        set_size: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// What a command produced besides its printed report.
#[derive(Default)]
struct Status {
    warnings: bool,
    failed: Option<String>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_points(path: &Path) -> Result<PointSet, Failure> {
    Ok(PointSetDocument::from_json(&read(path)?)?.point_set()?)
}

fn parse_point(text: &str) -> Result<RationalPoint, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    Ok(RationalPoint::parse(&parts)?)
}

fn show<T: Serialize>(report: &T, format: Format) -> Result<(), Failure> {
    emit(report, format).map_err(Failure::from)
}

#[derive(Serialize)]
struct MembershipReport {
    dimension: usize,
    generators: usize,
    point: Vec<String>,
    contained: bool,
    full_dimensional: bool,
}

#[derive(Serialize)]
struct ConstructReport {
    #[serde(flatten)]
    report: polyvc::construction::CertificationReport,
    certified: bool,
    epsilon_schedule: Option<polyvc::construction::EpsilonSchedule>,
    certificate: Option<String>,
}

fn run(cli: &Cli) -> Result<Status, Failure> {
    let format = cli.output;
    let mut status = Status::default();
    match &cli.command {
        Command::Bounds {
            dimension,
            budget,
            set_size,
            precision_bits,
        } => {
            let report = bounds_report(*dimension, *budget, *set_size, *precision_bits)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            status.warnings = !report.warnings.is_empty();
            show(&report, format)?;
        }
        Command::Membership { input, point } => {
            let set = load_points(&input.input)?;
            let a = parse_point(point)?;
            let contained = hull_contains(&set, &a)?;
            show(
                &MembershipReport {
                    dimension: set.dimension(),
                    generators: set.len(),
                    point: rational::format_vec(a.coords()),
                    contained,
                    full_dimensional: HullOracle::new(&set)?.is_full_dimensional(),
                },
                format,
            )?;
        }
        Command::Shatter { input, budget, cap } => {
            let set = load_points(&input.input)?;
            let report = shatter_check(&set, *budget, *cap)?;
            show(&report, format)?;
        }
        Command::VcSearch {
            input,
            budget,
            set_size,
            strategy,
            samples,
            seed,
            cap,
        } => {
            let pool = load_points(&input.input)?;
            let strategy = match strategy.as_str() {
                "exhaustive" => SearchStrategy::Exhaustive,
                "random" => SearchStrategy::RandomRestarts {
                    restarts: *samples,
                    seed: *seed,
                },
                other => {
                    return Err(Failure::Input(format!(
                        "unknown strategy {other:?} (expected exhaustive or random)"
                    )))
                }
            };
            let report = vc_lower_bound_search(&pool, *budget, *set_size, &strategy, *cap)?;
            show(&report, format)?;
        }
        Command::Construct {
            dimension,
            clusters,
            cluster_radius,
            big_radius,
            strategy,
            seed,
            cap,
            out,
        } => {
            let mode = match strategy.as_str() {
                "uniform" => SearchMode::Uniform,
                "per-labeling" => SearchMode::PerLabeling,
                other => {
                    return Err(Failure::Input(format!(
                        "unknown strategy {other:?} (expected uniform or per-labeling)"
                    )))
                }
            };
            let mut spec = ConstructionSpec::new(*dimension, *clusters)?;
            if cluster_radius.is_some() || big_radius.is_some() {
                let r = match cluster_radius {
                    Some(s) => rational::parse(s)?,
                    None => spec.cluster_radius.clone(),
                };
                let big = match big_radius {
                    Some(s) => rational::parse(s)?,
                    None => spec.big_radius.clone(),
                };
                spec = spec.with_radii(r, big)?;
            }
            let config = SearchConfig {
                mode,
                seed: *seed,
                ..SearchConfig::default()
            };
            let report = certify_construction(&spec, &config, *cap)?;
            let mut written = None;
            if let (Some(cert), Some(path)) = (&report.certificate, out) {
                fs::write(path, cert.to_json())?;
                written = Some(path.display().to_string());
            }
            if let Some(f) = &report.failure {
                status.failed = Some(format!("no schedule found: {}", f.reason));
            }
            let epsilon_schedule = match (&report.certificate, mode) {
                (Some(c), SearchMode::Uniform) => Some(c.spec.epsilon_schedule.clone()),
                _ => None,
            };
            show(
                &ConstructReport {
                    certified: report.certified(),
                    report,
                    epsilon_schedule,
                    certificate: written,
                },
                format,
            )?;
        }
        Command::VerifyConstruction { input } => {
            let cert = Certificate::from_json(&read(&input.input)?)?;
            let report = replay(&cert)?;
            if !report.passed {
                status.failed = Some(format!("certificate rejected: {:?}", report.failure));
            }
            show(&report, format)?;
        }
        Command::Signpatterns {
            dimension,
            budget,
            set_size,
            samples,
            seed,
        } => {
            let report = signpattern_experiment(
                *dimension,
                *budget,
                *set_size,
                *samples,
                *seed,
                &Sampler::default(),
            )?;
            if !report.correspondence_holds() || !report.counting_holds {
                status.failed = Some("sign-pattern correspondence failed".into());
            }
            show(&report, format)?;
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = parallel::set_threads(jobs) {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(Status {
            failed: Some(msg), ..
        }) => {
            eprintln!("error: {msg}");
            ExitCode::from(5)
        }
        Ok(Status { warnings: true, .. }) if cli.strict => ExitCode::from(2),
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
    }
}
