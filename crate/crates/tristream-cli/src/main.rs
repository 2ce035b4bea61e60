//! Command-line harness: stream generation, exact oracle queries, single
//! estimates, and batch experiments with reproducible seeds.
//!
//! Exit codes: 0 success, 2 parameter/validation problems (bad flags,
//! missing files, malformed streams), 1 runtime failures.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tristream::classical::ClassicalRun;
use tristream::experiment::{self, TrialOutcome};
use tristream::generators::GenSpec;
use tristream::hybrid::{EstimateReport, EstimatorMode, HybridConfig};
use tristream::qsim::QuantumRun;
use tristream::seed::{self, LANE_CLASSICAL, LANE_QUANTUM};
use tristream::stream::{push_stream, EdgeStream, StreamConsumer};
use tristream::{oracle, Error};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "tristream", version, about = "Triangle counting in one-pass graph streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a stream file with ground-truth header comments
    Gen(GenArgs),
    /// Print exact triangle statistics of a stream as one JSON record
    Oracle(OracleArgs),
    /// Run one estimate and print the report as one JSON record
    Estimate(EstimateArgs),
    /// Run repeated estimates; emit per-trial CSV plus a summary row
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    ClassicalHard,
    QuantumHard,
    Random,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// classical-hard: number of hubs
    #[arg(long)]
    hubs: Option<u32>,
    /// classical-hard: spokes per hub (at least 2 * tris)
    #[arg(long)]
    spokes: Option<u32>,
    /// classical-hard: planted triangles per hub
    #[arg(long)]
    tris: Option<u32>,
    /// classical-hard: extra disjoint edges on fresh vertices
    #[arg(long, default_value_t = 0)]
    filler: u32,
    /// classical-hard: plant the triangles (otherwise T = 0)
    #[arg(long)]
    planted: bool,
    /// classical-hard: shuffle arrival order within each phase
    #[arg(long)]
    shuffle: bool,
    /// quantum-hard: number of triangles
    #[arg(long = "T")]
    triangles: Option<u32>,
    /// quantum-hard: noise edges delaying the closing edges
    #[arg(long)]
    noise: Option<u32>,
    /// random: number of vertices
    #[arg(long)]
    n: Option<u32>,
    /// random: number of edges
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Stream file in edge-list format
    file: PathBuf,
    /// Split parameter (>= 1)
    #[arg(long)]
    k: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Quantum,
    Classical,
    Hybrid,
    Exact,
}

impl From<Mode> for EstimatorMode {
    fn from(mode: Mode) -> EstimatorMode {
        match mode {
            Mode::Quantum => EstimatorMode::Quantum,
            Mode::Classical => EstimatorMode::Classical,
            Mode::Hybrid => EstimatorMode::Hybrid,
            Mode::Exact => EstimatorMode::Exact,
        }
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// Stream file in edge-list format
    file: PathBuf,
    #[arg(long, value_enum)]
    mode: Mode,
    /// Target relative error (ignored by exact mode)
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Target failure probability (ignored by exact mode)
    #[arg(long, default_value_t = 1.0 / 3.0)]
    delta: f64,
    /// Advance bound on T (default: the stream's truth header)
    #[arg(long)]
    t_bound: Option<f64>,
    /// Advance bound on max triangles per edge (default: truth header)
    #[arg(long)]
    delta_e_bound: Option<f64>,
    /// Override the split parameter k
    #[arg(long)]
    k: Option<f64>,
    /// Override per-group quantum copies
    #[arg(long)]
    q_copies: Option<usize>,
    /// Override per-group classical copies
    #[arg(long)]
    c_copies: Option<usize>,
    /// Override the number of amplification groups
    #[arg(long)]
    groups: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dump per-step traces of one copy per family to stderr
    #[arg(long)]
    debug_trace: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    estimate: EstimateArgs,
    /// Number of independent trials
    #[arg(long)]
    trials: usize,
    /// Output path for the CSV (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn param(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError {
            code: if e.is_validation() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Oracle(args) => run_oracle(args),
        Command::Estimate(args) => run_estimate(args),
        Command::Experiment(args) => run_experiment(args),
    }
}

fn run_gen(args: GenArgs) -> Result<(), CliError> {
    let spec = match args.kind {
        Kind::ClassicalHard => GenSpec::ClassicalHard {
            hubs: args.hubs.ok_or_else(|| CliError::param("--hubs is required for --kind classical-hard"))?,
            spokes_per_hub: args
                .spokes
                .ok_or_else(|| CliError::param("--spokes is required for --kind classical-hard"))?,
            tris_per_hub: args
                .tris
                .ok_or_else(|| CliError::param("--tris is required for --kind classical-hard"))?,
            filler_edges: args.filler,
            planted: args.planted,
            shuffle_within_phases: args.shuffle,
            seed: args.seed,
        },
        Kind::QuantumHard => GenSpec::QuantumHard {
            triangles: args
                .triangles
                .ok_or_else(|| CliError::param("--T is required for --kind quantum-hard"))?,
            noise: args.noise.unwrap_or(0),
            seed: args.seed,
        },
        Kind::Random => GenSpec::Random {
            n: args.n.ok_or_else(|| CliError::param("--n is required for --kind random"))?,
            m: args.m.ok_or_else(|| CliError::param("--m is required for --kind random"))?,
            seed: args.seed,
        },
    };
    let stream = tristream::generators::generate(&spec)?;
    write_output(args.output.as_deref(), &stream.to_text())
}

fn run_oracle(args: OracleArgs) -> Result<(), CliError> {
    let stream = read_stream(&args.file)?;
    let stats = oracle::stats(&stream, args.k)?;

    #[derive(Serialize)]
    struct OracleRecord<'a> {
        schema: u32,
        #[serde(flatten)]
        stats: &'a oracle::TriangleStats,
    }
    println!(
        "{}",
        serde_json::to_string(&OracleRecord {
            schema: SCHEMA_VERSION,
            stats: &stats,
        })
        .map_err(|e| CliError::runtime(e.to_string()))?
    );
    Ok(())
}

/// Advance bounds come from flags when given, else from the stream's truth
/// header; estimation without either is refused.
fn resolve_config(args: &EstimateArgs, stream: &EdgeStream, exact: bool) -> Result<HybridConfig, CliError> {
    let truth = stream.truth();
    let t_bound = args
        .t_bound
        .or_else(|| truth.map(|t| t.triangles as f64).filter(|&t| t > 0.0));
    let delta_e_bound = args
        .delta_e_bound
        .or_else(|| truth.map(|t| t.delta_e as f64));
    let (t_bound, delta_e_bound) = if exact {
        // Exact mode only uses the bounds to pick the reported split k.
        (t_bound.unwrap_or(1.0), delta_e_bound.unwrap_or(1.0))
    } else {
        (
            t_bound.ok_or_else(|| {
                CliError::param("supply --t-bound (no positive truth header T in stream file)")
            })?,
            delta_e_bound.ok_or_else(|| {
                CliError::param("supply --delta-e-bound (no truth header in stream file)")
            })?,
        )
    };
    let mut config = HybridConfig::new(args.epsilon, args.delta, t_bound, delta_e_bound, args.seed);
    config.k_override = args.k;
    config.q_copies_override = args.q_copies;
    config.c_copies_override = args.c_copies;
    config.groups_override = args.groups;
    Ok(config)
}

#[derive(Serialize)]
struct EstimateRecord<'a> {
    schema: u32,
    mode: &'a str,
    #[serde(flatten)]
    report: &'a EstimateReport,
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Quantum => "quantum",
        Mode::Classical => "classical",
        Mode::Hybrid => "hybrid",
        Mode::Exact => "exact",
    }
}

fn run_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let stream = read_stream(&args.file)?;
    let config = resolve_config(&args, &stream, args.mode == Mode::Exact)?;
    let report = tristream::hybrid::estimate_with_mode(&stream, args.mode.into(), &config)?;
    if args.debug_trace {
        dump_traces(&stream, &config, report.k_used, args.mode)?;
    }
    println!(
        "{}",
        serde_json::to_string(&EstimateRecord {
            schema: SCHEMA_VERSION,
            mode: mode_name(args.mode),
            report: &report,
        })
        .map_err(|e| CliError::runtime(e.to_string()))?
    );
    Ok(())
}

/// Replays the stream once more with a traced copy of each family and dumps
/// the per-step rows to stderr.
fn dump_traces(stream: &EdgeStream, config: &HybridConfig, k: f64, mode: Mode) -> Result<(), CliError> {
    let mut quantum = QuantumRun::new(stream.m(), k, seed::rng_for(config.seed, LANE_QUANTUM, 0))?
        .with_trace();
    let mut classical =
        ClassicalRun::new(stream.m(), k, seed::rng_for(config.seed, LANE_CLASSICAL, 0))?.with_trace();
    let mut consumers: Vec<&mut dyn StreamConsumer> = Vec::new();
    if matches!(mode, Mode::Quantum | Mode::Hybrid) {
        consumers.push(&mut quantum);
    }
    if matches!(mode, Mode::Classical | Mode::Hybrid) {
        consumers.push(&mut classical);
    }
    push_stream(stream, &mut consumers)?;
    if let Some(trace) = quantum.trace() {
        eprintln!("# quantum trace: t,f,tracked,outcome");
        for row in trace {
            eprintln!("{},{},{},{}", row.t, row.measured as u8, row.tracked, row.outcome);
        }
    }
    if let Some(trace) = classical.trace() {
        eprintln!("# classical trace: t,live,x");
        for row in trace {
            eprintln!("{},{},{}", row.t, row.live, row.x);
        }
    }
    Ok(())
}

fn run_experiment(args: ExperimentArgs) -> Result<(), CliError> {
    if args.trials == 0 {
        return Err(CliError::param("--trials must be at least 1"));
    }
    let stream = read_stream(&args.estimate.file)?;
    let config = resolve_config(&args.estimate, &stream, args.estimate.mode == Mode::Exact)?;
    let outcomes = experiment::run_trials(&stream, args.estimate.mode.into(), &config, args.trials)?;
    let true_triangles = experiment::exact_triangles(&stream)?;
    let summary = experiment::summarize(&outcomes, true_triangles, config.epsilon);

    let mut csv = String::from("trial,seed,k,estimate,q_part,c_part,abs_err,rel_err\n");
    for TrialOutcome { trial, seed, report } in &outcomes {
        let abs_err = (report.estimate - true_triangles).abs();
        let rel_err = if true_triangles > 0.0 {
            format!("{}", abs_err / true_triangles)
        } else {
            String::new()
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            trial, seed, report.k_used, report.estimate, report.q_part, report.c_part, abs_err, rel_err
        ));
    }
    csv.push_str(&format!(
        "# summary trials={} T={} epsilon={} mean_abs_err={} success_rate={}\n",
        summary.trials, summary.true_triangles, summary.epsilon, summary.mean_abs_err, summary.success_rate
    ));
    write_output(args.output.as_deref(), &csv)
}

fn read_stream(path: &Path) -> Result<EdgeStream, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("cannot read {}: {e}", path.display())))?;
    Ok(EdgeStream::parse(&text)?)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
