//! Batch command-line front end.
//!
//! Subcommands:
//! - `solve`: exact optimum of one matrix file, with the dual certificate.
//! - `greedy`: greedy assignment value, optionally compared to the optimum.
//! - `experiment <kind>`: seeded Monte Carlo / analytic reports (CSV or
//!   JSON), reproducible byte-for-byte from the echoed config.
//! - `rate-function`: alias for `experiment rate-function`.
//!
//! Exit codes: 0 success, 1 usage, 2 invalid input/config, 3 numeric
//! failure. Statistical bands are reported, never enforced here.

mod config_file;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use rasp_core::distributions::DistributionSpec;
use rasp_core::experiments::{
    cumulant_convergence_check, epsilon_document, estimate_expectation, estimate_min_expectation,
    ftg_convergence_check, ldp_report, lemma2_bound_check, lln_report, moment_convergence_check,
    parse_schedule, potter_document, rate_table_document, DeviationSide, ExperimentConfig, Method,
};
use rasp_core::matrix::{CostMatrix, Objective};
use rasp_core::solver::{solve, verify_certificate};

#[derive(Parser)]
#[command(
    name = "rasp",
    version,
    about = "Random assignment process optima, analytics, and Monte Carlo experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one matrix file exactly and verify the optimality certificate.
    Solve(SolveArgs),
    /// Run the greedy assignment on one matrix file.
    Greedy(GreedyArgs),
    /// Run a seeded experiment and emit its report.
    Experiment(ExperimentArgs),
    /// Tabulate the large-deviation rate function (alias for
    /// `experiment rate-function`).
    RateFunction(RunArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// max or min.
    #[arg(long, default_value = "max")]
    objective: String,
    /// Matrix file format: auto, csv, or json.
    #[arg(long, default_value = "auto")]
    matrix_format: String,
    matrix_file: PathBuf,
}

#[derive(Args)]
struct GreedyArgs {
    /// Also solve exactly and report the gap.
    #[arg(long)]
    compare: bool,
    #[arg(long, default_value = "auto")]
    matrix_format: String,
    matrix_file: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(subcommand)]
    kind: ExperimentKind,
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Monte Carlo mean of the maximum vs n*g(1/m).
    Expectation(RunArgs),
    /// Monte Carlo mean of the minimum (square exponential oracle attached).
    MinExpectation(RunArgs),
    /// Law-of-large-numbers dispersion of the normalized maximum.
    Lln(RunArgs),
    /// Tail probability of the maximum with rate-function bounds.
    Ldp(RunArgs),
    /// Empirical log-MGF of the centered sample maximum.
    Cumulant(RunArgs),
    /// Rectangularity correction eps(m, n) along a schedule.
    Epsilon(RunArgs),
    /// Potter envelope check for the upper quantile function.
    Potter(RunArgs),
    /// Rate function table.
    RateFunction(RunArgs),
    /// KS distance of the normed maximum to the Gumbel law.
    Ftg(RunArgs),
    /// Moment convergence of the normalized maximum.
    Moments(RunArgs),
    /// Maximum-tail moment bound check.
    Lemma2(RunArgs),
}

/// Flags shared by every experiment subcommand. A config file provides
/// defaults; flags override it; unrecognized file keys are rejected.
#[derive(Args, Clone)]
struct RunArgs {
    /// Key-value config file with an `[experiment]` section.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Distribution, spelled family:params (e.g. exponential:1).
    #[arg(long)]
    dist: Option<String>,
    /// Instance sizes n:m, comma-separated; a bare n means square.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; generated from entropy (and printed) when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// solver, sandwich, or both.
    #[arg(long)]
    method: Option<String>,
    /// Worker threads (results are identical for any value).
    #[arg(long)]
    workers: Option<usize>,
    /// LLN tolerance band.
    #[arg(long)]
    band: Option<f64>,
    /// Deviation parameter r.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// upper or lower deviation.
    #[arg(long)]
    side: Option<String>,
    /// Cumulant argument t.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    s: Option<f64>,
    /// Comma-separated alpha values.
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    draws: Option<u64>,
    /// Moment order k.
    #[arg(long)]
    k: Option<f64>,
    /// Comma-separated sample sizes for schedules over n.
    #[arg(long = "schedule-n")]
    schedule_n: Option<String>,
    #[arg(long = "r-min", allow_negative_numbers = true)]
    r_min: Option<f64>,
    #[arg(long = "r-max", allow_negative_numbers = true)]
    r_max: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Potter constant A.
    #[arg(long)]
    a: Option<f64>,
    /// Potter exponent delta.
    #[arg(long)]
    delta: Option<f64>,
    /// Potter window upper edge x0.
    #[arg(long)]
    x0: Option<f64>,
    /// Potter grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<rasp_core::Error> for CliError {
    fn from(err: rasp_core::Error) -> Self {
        use rasp_core::Error::*;
        match err {
            Unbracketable(_) | TiltInfeasible(_) | DivergentIntegral(_) | ZeroTail(_) => {
                CliError::Numeric(err.to_string())
            }
            _ => CliError::Input(err.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Greedy(args) => cmd_greedy(args),
        Command::Experiment(args) => run_experiment(args.kind),
        Command::RateFunction(args) => run_experiment(ExperimentKind::RateFunction(args)),
    }
}

// ---------------------------------------------------------------------------
// Matrix commands.
// ---------------------------------------------------------------------------

fn read_matrix(path: &Path, format: &str) -> Result<CostMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let matrix = match format {
        "auto" => CostMatrix::parse_auto(&text),
        "csv" => CostMatrix::parse_csv(&text),
        "json" => CostMatrix::parse_json(&text),
        other => {
            return Err(CliError::Input(format!(
                "matrix format must be auto|csv|json, got {other:?}"
            )))
        }
    }?;
    Ok(matrix)
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let objective: Objective = args.objective.parse()?;
    let matrix = read_matrix(&args.matrix_file, &args.matrix_format)?;
    let (result, diagnostics) = solve(&matrix, objective)?;
    let certified = verify_certificate(&matrix, &result, &diagnostics)?;
    println!("objective: {}", result.objective);
    println!("value: {}", result.value);
    println!("assignment: {}", result.permutation);
    if matrix.rows() > matrix.cols() {
        println!("orientation: transposed (assignment maps input columns to rows)");
    }
    println!("certificate: {}", if certified { "ok" } else { "FAILED" });
    Ok(())
}

fn cmd_greedy(args: GreedyArgs) -> Result<(), CliError> {
    let mut matrix = read_matrix(&args.matrix_file, &args.matrix_format)?;
    let transposed = matrix.rows() > matrix.cols();
    if transposed {
        matrix = matrix.transpose();
    }
    let greedy = rasp_core::greedy::greedy_assignment(&matrix)?;
    println!("greedy_value: {}", greedy.value);
    println!("assignment: {}", greedy.permutation);
    if transposed {
        println!("orientation: transposed (assignment maps input columns to rows)");
    }
    if args.compare {
        let (optimum, _) = solve(&matrix, Objective::Max)?;
        println!("optimum: {}", optimum.value);
        println!("gap: {}", optimum.value - greedy.value);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Experiment plumbing: config file + flag resolution.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq)]
enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("format must be csv|json, got {other:?}")),
        }
    }
}

struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
}

impl Resolver {
    fn new(config: Option<&Path>) -> Result<Self, CliError> {
        let file = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Input(format!("cannot read config {}: {e}", path.display()))
                })?;
                config_file::parse(&text).map_err(|e| {
                    CliError::Input(format!("invalid config {}: {e}", path.display()))
                })?
            }
            None => BTreeMap::new(),
        };
        Ok(Resolver {
            file,
            used: BTreeSet::new(),
        })
    }

    /// Flag value if present, else the parsed file value.
    fn get<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.used.insert(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(raw) => raw.parse::<T>().map(Some).map_err(|e| {
                CliError::Input(format!("invalid config value for {key:?} ({raw:?}): {e}"))
            }),
            None => Ok(None),
        }
    }

    fn get_or<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(key, flag)?.unwrap_or(default))
    }

    fn require<T>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key, flag)?
            .ok_or_else(|| CliError::Input(format!("missing required parameter {key:?}")))
    }

    /// Rejects file keys no getter consumed.
    fn finish(self) -> Result<(), CliError> {
        let unused: Vec<&String> = self
            .file
            .keys()
            .filter(|k| !self.used.contains(*k))
            .collect();
        if unused.is_empty() {
            Ok(())
        } else {
            Err(CliError::Input(format!(
                "unrecognized config keys for this subcommand: {}",
                unused
                    .iter()
                    .map(|k| format!("{k:?}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

fn entropy_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(0x5DEECE66D);
    let pid = std::process::id() as u64;
    // SplitMix64 finalizer over the combined words.
    let mut z = nanos ^ (pid << 32) ^ 0x9E37_79B9_7F4A_7C15;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed from flag or file; otherwise generated from entropy and announced.
fn resolve_seed(resolver: &mut Resolver, flag: Option<u64>) -> Result<u64, CliError> {
    match resolver.get("seed", flag)? {
        Some(seed) => Ok(seed),
        None => {
            let seed = entropy_seed();
            eprintln!("seed = {seed} (generated from entropy; pass --seed to reproduce)");
            Ok(seed)
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn parse_f64_list(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Input(format!("cannot parse {part:?} as a number")))
        })
        .collect()
}

fn parse_u64_list(raw: &str) -> Result<Vec<u64>, CliError> {
    raw.split(',')
        .filter(|part| !part.trim().is_empty())
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("cannot parse {part:?} as a count")))
        })
        .collect()
}

fn emit(content: String, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

// String fields the resolver parses with FromStr wrappers.
struct DistArg(DistributionSpec);

impl FromStr for DistArg {
    type Err = rasp_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(DistArg)
    }
}

struct MethodArg(Method);

impl FromStr for MethodArg {
    type Err = rasp_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(MethodArg)
    }
}

struct SideArg(DeviationSide);

impl FromStr for SideArg {
    type Err = rasp_core::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(SideArg)
    }
}

fn run_experiment(kind: ExperimentKind) -> Result<(), CliError> {
    let args = match &kind {
        ExperimentKind::Expectation(a)
        | ExperimentKind::MinExpectation(a)
        | ExperimentKind::Lln(a)
        | ExperimentKind::Ldp(a)
        | ExperimentKind::Cumulant(a)
        | ExperimentKind::Epsilon(a)
        | ExperimentKind::Potter(a)
        | ExperimentKind::RateFunction(a)
        | ExperimentKind::Ftg(a)
        | ExperimentKind::Moments(a)
        | ExperimentKind::Lemma2(a) => a.clone(),
    };
    let mut resolver = Resolver::new(args.config.as_deref())?;
    let format = resolver.get_or(
        "format",
        args.format
            .as_deref()
            .map(OutputFormat::from_str)
            .transpose()
            .map_err(CliError::Input)?,
        OutputFormat::Csv,
    )?;
    let out: Option<PathBuf> = resolver.get("out", args.out.clone())?;

    let dist = |resolver: &mut Resolver, dflt: &str| -> Result<DistributionSpec, CliError> {
        let fallback: DistArg = dflt.parse()?;
        Ok(resolver
            .get_or(
                "dist",
                args.dist.as_deref().map(DistArg::from_str).transpose()?,
                fallback,
            )?
            .0)
    };

    // Instance schedule: explicit --schedule wins, else a single --n [--m].
    let schedule =
        |resolver: &mut Resolver| -> Result<Vec<rasp_core::experiments::SizePair>, CliError> {
            if let Some(raw) = resolver.get("schedule", args.schedule.clone())? {
                return Ok(parse_schedule(&raw)?);
            }
            let n = resolver.get("n", args.n)?;
            let m = resolver.get("m", args.m)?;
            match (n, m) {
                (Some(n), Some(m)) => Ok(vec![rasp_core::experiments::SizePair { n, m }]),
                (Some(n), None) => Ok(vec![rasp_core::experiments::SizePair { n, m: n }]),
                _ => Err(CliError::Input(
                    "missing instance sizes: pass --schedule or --n [--m]".into(),
                )),
            }
        };

    let content = match kind {
        ExperimentKind::Expectation(_) => {
            let config = ExperimentConfig {
                spec: dist(&mut resolver, "exponential:1")?,
                schedule: schedule(&mut resolver)?,
                trials: resolver.get_or("trials", args.trials, 1000)?,
                seed: resolve_seed(&mut resolver, args.seed)?,
                method: resolver
                    .get_or(
                        "method",
                        args.method
                            .as_deref()
                            .map(MethodArg::from_str)
                            .transpose()?,
                        MethodArg(Method::Solver),
                    )?
                    .0,
                workers: resolver.get_or("workers", args.workers, default_workers())?,
            };
            resolver.finish()?;
            let report = estimate_expectation(&config)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::MinExpectation(_) => {
            let config = ExperimentConfig {
                spec: dist(&mut resolver, "exponential:1")?,
                schedule: schedule(&mut resolver)?,
                trials: resolver.get_or("trials", args.trials, 1000)?,
                seed: resolve_seed(&mut resolver, args.seed)?,
                method: Method::Solver,
                workers: resolver.get_or("workers", args.workers, default_workers())?,
            };
            resolver.finish()?;
            let report = estimate_min_expectation(&config)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Lln(_) => {
            let band = resolver.get_or("band", args.band, 0.1)?;
            let config = ExperimentConfig {
                spec: dist(&mut resolver, "exponential:1")?,
                schedule: schedule(&mut resolver)?,
                trials: resolver.get_or("trials", args.trials, 200)?,
                seed: resolve_seed(&mut resolver, args.seed)?,
                method: Method::Solver,
                workers: resolver.get_or("workers", args.workers, default_workers())?,
            };
            resolver.finish()?;
            let report = lln_report(&config, band)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Ldp(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let n = resolver.require("n", args.n)?;
            let m = resolver.get_or("m", args.m, n)?;
            let r = resolver.require("r", args.r)?;
            let side = resolver
                .get_or(
                    "side",
                    args.side.as_deref().map(SideArg::from_str).transpose()?,
                    SideArg(DeviationSide::UpperDev),
                )?
                .0;
            let trials = resolver.get_or("trials", args.trials, 10_000)?;
            let seed = resolve_seed(&mut resolver, args.seed)?;
            let workers = resolver.get_or("workers", args.workers, default_workers())?;
            resolver.finish()?;
            let report = ldp_report(&spec, n, m, r, side, trials, seed, workers)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Cumulant(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let n = resolver.require("n", args.n)?;
            let t = resolver.require("t", args.t)?;
            let trials = resolver.get_or("trials", args.trials, 100_000)?;
            let seed = resolve_seed(&mut resolver, args.seed)?;
            let workers = resolver.get_or("workers", args.workers, default_workers())?;
            resolver.finish()?;
            let report = cumulant_convergence_check(&spec, n, t, trials, seed, workers)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Epsilon(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let pairs: Vec<(u64, u64)> = schedule(&mut resolver)?
                .into_iter()
                .map(|p| (p.n, p.m))
                .collect();
            resolver.finish()?;
            let doc = epsilon_document(&spec, &pairs)?;
            match format {
                OutputFormat::Csv => doc.to_csv(),
                OutputFormat::Json => doc.to_json(),
            }
        }
        ExperimentKind::Potter(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let a = resolver.get_or("a", args.a, 2.0)?;
            let delta = resolver.get_or("delta", args.delta, 0.5)?;
            let x0 = resolver.get_or("x0", args.x0, 0.1)?;
            let grid = resolver.get_or("grid", args.grid, 50)?;
            resolver.finish()?;
            let doc = potter_document(&spec, a, delta, x0, grid)?;
            match format {
                OutputFormat::Csv => doc.to_csv(),
                OutputFormat::Json => doc.to_json(),
            }
        }
        ExperimentKind::RateFunction(_) => {
            let r_min = resolver.get_or("r-min", args.r_min, -2.0)?;
            let r_max = resolver.get_or("r-max", args.r_max, 2.0)?;
            let step = resolver.get_or("step", args.step, 0.1)?;
            resolver.finish()?;
            let doc = rate_table_document(r_min, r_max, step)?;
            match format {
                OutputFormat::Csv => doc.to_csv(),
                OutputFormat::Json => doc.to_json(),
            }
        }
        ExperimentKind::Ftg(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let n = resolver.require("n", args.n)?;
            let trials = resolver.get_or("trials", args.trials, 100_000)?;
            let seed = resolve_seed(&mut resolver, args.seed)?;
            let workers = resolver.get_or("workers", args.workers, default_workers())?;
            resolver.finish()?;
            let report = ftg_convergence_check(&spec, n, trials, seed, workers)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Moments(_) => {
            let spec = dist(&mut resolver, "pareto:2")?;
            let k = resolver.get_or("k", args.k, 1.0)?;
            let schedule_n =
                parse_u64_list(&resolver.require("schedule-n", args.schedule_n.clone())?)?;
            let trials = resolver.get_or("trials", args.trials, 100_000)?;
            let seed = resolve_seed(&mut resolver, args.seed)?;
            let workers = resolver.get_or("workers", args.workers, default_workers())?;
            resolver.finish()?;
            let report = moment_convergence_check(&spec, k, &schedule_n, trials, seed, workers)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
        ExperimentKind::Lemma2(_) => {
            let spec = dist(&mut resolver, "exponential:1")?;
            let n = resolver.get_or("n", args.n, 1000)?;
            let q = resolver.get_or("q", args.q, 2)?;
            let s = resolver.get_or("s", args.s, 6.0)?;
            let alphas = parse_f64_list(&resolver.get_or(
                "alphas",
                args.alphas.clone(),
                "8,16,32".to_string(),
            )?)?;
            let draws = resolver.get_or("draws", args.draws, 100_000)?;
            let seed = resolve_seed(&mut resolver, args.seed)?;
            let workers = resolver.get_or("workers", args.workers, default_workers())?;
            resolver.finish()?;
            let report = lemma2_bound_check(&spec, n, q, s, &alphas, draws, seed, workers)?;
            match format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            }
        }
    };
    emit(content, out.as_deref())
}
