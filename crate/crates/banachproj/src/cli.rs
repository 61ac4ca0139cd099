//! Command-line interface: `project`, `hausdorff`, `verify`, and `moduli`
//! subcommands with machine-readable JSON/CSV output.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numeric
//! non-convergence, 3 verification violation found.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::harness::{self, Suite, SuiteConfig};
use crate::projection;
use crate::sets::{self, ConvexSetDescriptor};
use crate::space::{g_fn, modulus_convexity, Point, SpaceSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "banachproj",
    version,
    about = "Metric projection onto convex sets in l_p spaces, with certified \
             solutions and verification suites for continuity estimates"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Project a point onto a convex set and print the certified result.
    Project(ProjectArgs),
    /// Hausdorff distance between two convex sets.
    Hausdorff(HausdorffArgs),
    /// Run a randomized verification suite and report violations.
    Verify(VerifyArgs),
    /// Tabulate the modulus of convexity and related curves.
    Moduli(ModuliArgs),
}

#[derive(Args, Debug)]
struct ProjectArgs {
    /// Norm exponent p (1 < p < infinity).
    #[arg(long)]
    p: f64,
    /// Space dimension.
    #[arg(long)]
    dim: usize,
    /// Point coordinates, comma-separated (e.g. 3,4).
    #[arg(long)]
    point: String,
    /// Path to a JSON set descriptor.
    #[arg(long)]
    set: PathBuf,
    /// Certificate tolerance.
    #[arg(long, default_value_t = projection::DEFAULT_TOL)]
    tol: f64,
    /// Iteration budget.
    #[arg(long, default_value_t = projection::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Args, Debug)]
struct HausdorffArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    dim: usize,
    /// Path to the first JSON set descriptor.
    #[arg(long)]
    set_a: PathBuf,
    /// Path to the second JSON set descriptor.
    #[arg(long)]
    set_b: PathBuf,
    /// Distance tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name (lemma1, lemma2, figiel, theorem1, theorem2, remark5,
    /// hilbert_f9, third_problem, solver_oracle, duality_identities).
    #[arg(long)]
    suite: Option<String>,
    /// Exponents, comma-separated.
    #[arg(long)]
    p: Option<String>,
    /// Dimensions, comma-separated.
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Scale of ||x - y|| perturbations and translate shifts.
    #[arg(long)]
    perturbation_scale: Option<f64>,
    #[arg(long)]
    margin_tol: Option<f64>,
    #[arg(long)]
    projection_tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Constant L in the modulus scaling inequality (1 < L <= 3.18).
    #[arg(long)]
    figiel_l: Option<f64>,
    /// Keep per-trial records in the report.
    #[arg(long)]
    record_trials: bool,
    /// JSON config file; command-line flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here (also printed to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write per-trial CSV here (implies --record-trials).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ModuliArgs {
    #[arg(long)]
    p: f64,
    /// Number of grid points on (0, 2].
    #[arg(long, default_value_t = 40)]
    points: usize,
    /// Largest epsilon tabulated.
    #[arg(long, default_value_t = 2.0)]
    eps_max: f64,
    /// Random pairs per row for the empirical lower-bound column (0 = off).
    #[arg(long, default_value_t = 0)]
    empirical_samples: usize,
    /// Dimension used for empirical sampling.
    #[arg(long, default_value_t = 8)]
    empirical_dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// Partial `SuiteConfig` read from --config; every field optional.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    suite: Option<String>,
    p: Option<Vec<f64>>,
    dim: Option<Vec<usize>>,
    trials: Option<usize>,
    seed: Option<u64>,
    perturbation_scale: Option<f64>,
    margin_tol: Option<f64>,
    projection_tol: Option<f64>,
    max_iter: Option<usize>,
    figiel_l: Option<f64>,
    record_trials: Option<bool>,
}

fn parse_floats(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("'{t}': {e}")))
        })
        .collect()
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("'{t}': {e}")))
        })
        .collect()
}

fn load_set(path: &PathBuf) -> Result<ConvexSetDescriptor> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Cap the rayon thread pool from BANACHPROJ_THREADS, when set.
pub fn init_threads() {
    if let Ok(v) = std::env::var("BANACHPROJ_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                // a later build attempt after the pool exists is a no-op
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn cmd_project(args: &ProjectArgs) -> Result<i32> {
    let space = SpaceSpec::new(args.dim, args.p)?;
    let coords = parse_floats(&args.point)?;
    let x = Point::new(coords);
    let set = load_set(&args.set)?;
    let result = projection::project(&space, &set, &x, args.tol, args.max_iter)?;
    let output = json!({
        "config": {
            "p": args.p,
            "dim": args.dim,
            "set": set,
            "tol": args.tol,
            "max_iter": args.max_iter,
        },
        "point": result.point,
        "distance": result.distance,
        "vi_residual": result.vi_residual,
        "iterations": result.iterations,
        "converged": result.converged,
    });
    println!("{}", serde_json::to_string_pretty(&output).expect("serializable"));
    Ok(if result.converged {
        EXIT_OK
    } else {
        EXIT_NO_CONVERGENCE
    })
}

fn cmd_hausdorff(args: &HausdorffArgs) -> Result<i32> {
    let space = SpaceSpec::new(args.dim, args.p)?;
    let a = load_set(&args.set_a)?;
    let b = load_set(&args.set_b)?;
    let distance = sets::hausdorff_distance(&space, &a, &b, args.tol)?;
    let output = json!({
        "config": {
            "p": args.p,
            "dim": args.dim,
            "set_a": a,
            "set_b": b,
            "tol": args.tol,
        },
        "hausdorff_distance": distance,
    });
    println!("{}", serde_json::to_string_pretty(&output).expect("serializable"));
    Ok(EXIT_OK)
}

/// Resolve the suite configuration: flags > config file > defaults.
fn resolve_config(args: &VerifyArgs) -> Result<SuiteConfig> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let suite_name = args
        .suite
        .clone()
        .or(file.suite)
        .ok_or_else(|| Error::InvalidConfig("missing suite (flag or config file)".into()))?;
    let suite: Suite = suite_name.parse()?;
    let mut config = SuiteConfig::new(suite);
    if let Some(v) = file.p {
        config.p = v;
    }
    if let Some(s) = &args.p {
        config.p = parse_floats(s)?;
    }
    if let Some(v) = file.dim {
        config.dim = v;
    }
    if let Some(s) = &args.dim {
        config.dim = parse_usizes(s)?;
    }
    config.trials = args.trials.or(file.trials).unwrap_or(config.trials);
    config.seed = args.seed.or(file.seed).unwrap_or(config.seed);
    config.perturbation_scale = args
        .perturbation_scale
        .or(file.perturbation_scale)
        .unwrap_or(config.perturbation_scale);
    config.margin_tol = args.margin_tol.or(file.margin_tol).unwrap_or(config.margin_tol);
    config.projection_tol = args
        .projection_tol
        .or(file.projection_tol)
        .unwrap_or(config.projection_tol);
    config.max_iter = args.max_iter.or(file.max_iter).unwrap_or(config.max_iter);
    config.figiel_l = args.figiel_l.or(file.figiel_l).unwrap_or(config.figiel_l);
    config.record_trials =
        args.record_trials || file.record_trials.unwrap_or(false) || args.csv.is_some();
    Ok(config)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let config = resolve_config(args)?;
    let report = harness::run_suite(&config)?;
    let text = serde_json::to_string_pretty(&report).expect("serializable");
    if let Some(path) = &args.out {
        fs::write(path, &text)?;
    }
    if let Some(path) = &args.csv {
        fs::write(path, harness::to_csv(&report)?)?;
    }
    println!("{text}");
    if report.violations > 0 {
        return Ok(EXIT_VIOLATION);
    }
    if !report.passed() {
        return Ok(EXIT_NO_CONVERGENCE);
    }
    Ok(EXIT_OK)
}

fn cmd_moduli(args: &ModuliArgs) -> Result<i32> {
    if args.points == 0 {
        return Err(Error::InvalidConfig("points must be at least 1".into()));
    }
    if !(args.eps_max > 0.0 && args.eps_max <= 2.0) {
        return Err(Error::OutOfRange {
            arg: args.eps_max,
            lo: 0.0,
            hi: 2.0,
        });
    }
    // validates p
    let space = SpaceSpec::new(args.empirical_dim.max(2), args.p)?;
    println!(
        "# p = {}, points = {}, eps_max = {}, empirical_samples = {}, seed = {}",
        args.p, args.points, args.eps_max, args.empirical_samples, args.seed
    );
    if args.empirical_samples > 0 {
        println!("eps,delta,g,empirical");
    } else {
        println!("eps,delta,g");
    }
    for k in 1..=args.points {
        let eps = args.eps_max * k as f64 / args.points as f64;
        let delta = modulus_convexity(args.p, eps)?;
        let g = g_fn(args.p, eps)?;
        if args.empirical_samples > 0 {
            let emp = crate::space::estimate_modulus_empirical(
                &space,
                eps,
                args.empirical_samples,
                args.seed,
            )?;
            println!("{eps},{delta},{g},{emp}");
        } else {
            println!("{eps},{delta},{g}");
        }
    }
    Ok(EXIT_OK)
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    let outcome = match &cli.command {
        Command::Project(args) => cmd_project(args),
        Command::Hausdorff(args) => cmd_hausdorff(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Moduli(args) => cmd_moduli(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Error::NoConvergence(_)) => {
            eprintln!("error: projection did not converge");
            EXIT_NO_CONVERGENCE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
