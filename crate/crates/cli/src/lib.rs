//! Batch front end: `run`, `sweep`, `validate` and `emit-scenario`.
//!
//! Exit codes: 0 success, 1 unreadable or invalid scenario (or failed
//! output), 2 an unserviceable request under the halt policy, 64 bad flags.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use evguide::engine::{
    run, run_traced, sweep, write_summary_csv, write_sweep_csv, EngineError, RunOptions, StabilityThresholds,
    SweepConfig, TraceCsv,
};
use evguide::scenario::{builtin, emit_scenario, parse_scenario, Scenario, ScenarioSpec};
use evguide::strategy::Strategy;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_HALT: u8 = 2;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(name = "evguide", version, about = "Charging-station guidance simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one scenario under one strategy.
    Run(RunArgs),
    /// Run a lambda x mu grid with uniform rate overrides.
    Sweep(SweepArgs),
    /// Parse and validate a scenario file.
    Validate(ValidateArgs),
    /// Write a built-in scenario as canonical JSON.
    EmitScenario(EmitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// Last-window mean must reach this multiple of the first-window mean.
    #[arg(long, default_value_t = 2.0)]
    pub stability_ratio: f64,
    /// ...and at least this many vehicles.
    #[arg(long, default_value_t = 10.0)]
    pub stability_floor: f64,
}

impl StabilityArgs {
    fn thresholds(&self) -> StabilityThresholds {
        StabilityThresholds {
            ratio: self.stability_ratio,
            floor: self.stability_floor,
            ..StabilityThresholds::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Scenario file, or `builtin:sioux-falls`.
    #[arg(long)]
    pub scenario: String,
    /// `sdd` or `csb`.
    #[arg(long)]
    pub strategy: Strategy,
    /// Number of slots; accepts scientific notation such as `1e6`.
    #[arg(long, value_parser = parse_horizon)]
    pub horizon: Option<u64>,
    /// Overrides the scenario's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write `trace.csv` with the occupancy of every k-th slot.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trace_every: Option<u64>,
    #[command(flatten)]
    pub stability: StabilityArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: String,
    /// `sdd` or `csb`.
    #[arg(long)]
    pub strategy: Strategy,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_rate)]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_rate)]
    pub mus: Vec<f64>,
    /// Defaults to the scenario's seed.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Vec<u64>,
    #[arg(long, value_parser = parse_horizon)]
    pub horizon: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub stability: StabilityArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub scenario: String,
}

#[derive(Debug, Clone, Args)]
pub struct EmitArgs {
    #[arg(long, default_value = "builtin:sioux-falls")]
    pub scenario: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_horizon(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return if n >= 1 {
            Ok(n)
        } else {
            Err("horizon must be at least 1".into())
        };
    }
    let x: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if x.fract() == 0.0 && (1.0..=u64::MAX as f64).contains(&x) {
        Ok(x as u64)
    } else {
        Err(format!("horizon must be a positive whole number, got {s}"))
    }
}

fn parse_rate(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("rate {s} is outside [0, 1]"))
    }
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    fn output(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::new(EXIT_INVALID, format!("cannot write {}: {e}", path.display()))
    }
}

/// Resolves a `builtin:` token or reads and parses a file.
pub fn load_spec(token: &str) -> Result<ScenarioSpec, CliError> {
    if let Some(name) = token.strip_prefix("builtin:") {
        return builtin(name)
            .ok_or_else(|| CliError::new(EXIT_USAGE, format!("unknown builtin scenario {name:?}")));
    }
    let text = fs::read_to_string(token)
        .map_err(|e| CliError::new(EXIT_INVALID, format!("cannot read {token}: {e}")))?;
    parse_scenario(&text).map_err(|e| CliError::new(EXIT_INVALID, format!("{token}: {e}")))
}

fn load_scenario(token: &str) -> Result<Scenario, CliError> {
    Scenario::new(load_spec(token)?).map_err(|e| CliError::new(EXIT_INVALID, format!("{token}: {e}")))
}

fn engine_error(e: EngineError) -> CliError {
    match e {
        EngineError::HaltUnserviceable { .. } => CliError::new(EXIT_HALT, e.to_string()),
        EngineError::InvalidSweep(_) => CliError::new(EXIT_USAGE, e.to_string()),
    }
}

/// A temporary file in `dir` that becomes an ordinary, world-readable file
/// once persisted.
fn temp_in(dir: &Path) -> io::Result<tempfile::NamedTempFile> {
    let mut builder = tempfile::Builder::new();
    builder.prefix(".evguide-");
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(fs::Permissions::from_mode(0o644));
    }
    builder.tempfile_in(dir)
}

/// Writes `path` through a temporary file in the same directory, so readers
/// never see a partial file.
fn write_atomic(path: &Path, fill: impl FnOnce(&mut fs::File) -> io::Result<()>) -> Result<(), CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = temp_in(dir).map_err(|e| CliError::output(path, e))?;
    fill(tmp.as_file_mut()).map_err(|e| CliError::output(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::output(path, e))?;
    tmp.persist(path).map_err(|e| CliError::output(path, e.error))?;
    Ok(())
}

fn create_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut scenario = load_scenario(&args.scenario)?;
    if let Some(h) = args.horizon {
        scenario = scenario.with_horizon(h);
    }
    if let Some(s) = args.seed {
        scenario = scenario.with_seed(s);
    }
    let options = RunOptions {
        thresholds: args.stability.thresholds(),
    };
    create_out_dir(&args.out)?;
    let trace_path = args.out.join("trace.csv");
    let metrics = match args.trace_every {
        None => run(&scenario, args.strategy, &options).map_err(engine_error)?,
        Some(k) => {
            let stations = scenario
                .network()
                .stations()
                .iter()
                .map(|&s| scenario.network().id(s).clone())
                .collect();
            let dir = args.out.as_path();
            let tmp = temp_in(dir).map_err(|e| CliError::output(&trace_path, e))?;
            let mut trace = TraceCsv::new(io::BufWriter::new(tmp), k, stations)
                .map_err(|e| CliError::output(&trace_path, e))?;
            let mut failure = None;
            let metrics = run_traced(&scenario, args.strategy, &options, |t| {
                if failure.is_none() {
                    failure = trace.record(t).err();
                }
            })
            .map_err(engine_error)?;
            if let Some(e) = failure {
                return Err(CliError::output(&trace_path, e));
            }
            let tmp = trace
                .finish()
                .map_err(|e| CliError::output(&trace_path, e))?
                .into_inner()
                .map_err(|e| CliError::output(&trace_path, e.error()))?;
            tmp.persist(&trace_path)
                .map_err(|e| CliError::output(&trace_path, e.error))?;
            metrics
        }
    };
    let run_id = format!("{}-seed{}-T{}", metrics.strategy, metrics.seed, metrics.horizon);
    write_atomic(&args.out.join("summary.csv"), |f| {
        write_summary_csv(io::BufWriter::new(f), &run_id, &metrics).map_err(io::Error::other)
    })?;
    writeln!(
        stdout,
        "{run_id}: extreme_gap={} max_occupancy={} stable={}/{} unserviceable={} overflow={}",
        metrics.extreme_gap,
        metrics.max_occupancy(),
        metrics.stable_count(),
        metrics.stations.len(),
        metrics.unserviceable,
        metrics.overflow_arrivals,
    )
    .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut scenario = load_scenario(&args.scenario)?;
    if let Some(h) = args.horizon {
        scenario = scenario.with_horizon(h);
    }
    let seeds = if args.seeds.is_empty() {
        vec![scenario.seed()]
    } else {
        args.seeds.clone()
    };
    let cfg = SweepConfig {
        lambdas: args.lambdas.clone(),
        mus: args.mus.clone(),
        strategy: args.strategy,
        horizon: scenario.horizon(),
        seeds,
        thresholds: args.stability.thresholds(),
    };
    let cells = sweep(&scenario, &cfg).map_err(engine_error)?;
    create_out_dir(&args.out)?;
    write_atomic(&args.out.join("sweep.csv"), |f| {
        write_sweep_csv(io::BufWriter::new(f), &cells).map_err(io::Error::other)
    })?;
    let unstable = cells.iter().filter(|c| c.unstable_any_seed).count();
    writeln!(
        stdout,
        "sweep {}: {} cells, {} unstable, {} seeds, T={}",
        args.strategy,
        cells.len(),
        unstable,
        cfg.seeds.len(),
        cfg.horizon
    )
    .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = load_spec(&args.scenario)?;
    let net = spec
        .validate()
        .map_err(|e| CliError::new(EXIT_INVALID, format!("{}: {e}", args.scenario)))?;
    writeln!(
        stdout,
        "{}: valid, {} nodes, {} links, {} stations, {} normal nodes",
        args.scenario,
        net.node_count(),
        net.link_count(),
        net.stations().len(),
        net.normals().len()
    )
    .map_err(|e| CliError::new(EXIT_INVALID, e.to_string()))
}

pub fn cmd_emit_scenario(args: &EmitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let Some(name) = args.scenario.strip_prefix("builtin:") else {
        return Err(CliError::new(EXIT_USAGE, "emit-scenario expects builtin:<name>"));
    };
    let spec = builtin(name)
        .ok_or_else(|| CliError::new(EXIT_USAGE, format!("unknown builtin scenario {name:?}")))?;
    let text = emit_scenario(&spec);
    match &args.out {
        Some(path) => write_atomic(path, |f| f.write_all(text.as_bytes())),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::new(EXIT_INVALID, e.to_string())),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    let mut stdout = io::stdout().lock();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, &mut stdout),
        Command::Sweep(a) => cmd_sweep(a, &mut stdout),
        Command::Validate(a) => cmd_validate(a, &mut stdout),
        Command::EmitScenario(a) => cmd_emit_scenario(a, &mut stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
