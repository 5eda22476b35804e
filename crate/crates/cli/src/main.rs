//! `steerscope` — analyze two-qubit steerability, search the Werner
//! threshold, run monogamy checks and scans, and sample reproducible
//! state ensembles.
//!
//! Exit codes: 0 ok; 1 I/O or parse failure; 2 invalid density
//! matrix (including wrong arity); 3 the analyzed state is steerable;
//! 4 a monogamy-bound violation was observed (which would indicate a
//! library bug).

mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use steerscope_core::monogamy::{monogamy_check, monogamy_scan, MONOGAMY_BOUND};
use steerscope_core::states::{EnsembleKind, EnsembleSpec};
use steerscope_core::steering::{werner_threshold, ThresholdCriterion};
use steerscope_core::tolerances;

pub const EXIT_OK: u8 = 0;
pub const EXIT_IO_OR_PARSE: u8 = 1;
pub const EXIT_INVALID_STATE: u8 = 2;
pub const EXIT_STEERABLE: u8 = 3;
pub const EXIT_MONOGAMY_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "steerscope",
    about = "Two-qubit steerability criterion, optimal settings, and steering monogamy",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full steerability report for a two-qubit state file.
    Analyze(AnalyzeArgs),
    /// Bisect the Werner-family mixing weight where violation starts.
    WernerThreshold(WernerArgs),
    /// Monogamy report for a three-qubit state or a whole ensemble.
    Monogamy(MonogamyArgs),
    /// Sample a seeded ensemble to JSON lines or analysis CSV.
    Sample(SampleArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Path to a state JSON file ({"n_qubits": 2, "matrix": [[re, im], ...]}).
    #[arg(long)]
    input: String,
    /// Steering direction featured in the `optimal` section.
    #[arg(long, default_value = "btoa")]
    direction: String,
    /// Seed for the numeric cross-check optimizer.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop tolerance of the numeric optimizer.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Clip tiny negative eigenvalues instead of rejecting the state.
    #[arg(long)]
    repair: bool,
}

#[derive(Args)]
struct WernerArgs {
    /// Criterion to bisect: "steering" (S > 1) or "chsh" (M > 1).
    #[arg(long, default_value = "steering")]
    criterion: String,
}

#[derive(Args)]
struct MonogamyArgs {
    /// Path to a three-qubit state JSON file.
    #[arg(long, conflicts_with = "scan")]
    input: Option<String>,
    /// Scan an ensemble kind (haar_pure_3q or ginibre_mixed_3q) instead.
    #[arg(long)]
    scan: Option<String>,
    /// Number of scan samples.
    #[arg(long, requires = "scan")]
    samples: Option<u64>,
    /// Scan seed (required: scans must be reproducible).
    #[arg(long, requires = "scan")]
    seed: Option<u64>,
    /// Clip tiny negative eigenvalues instead of rejecting the state.
    #[arg(long)]
    repair: bool,
}

#[derive(Args)]
struct SampleArgs {
    /// Ensemble kind: haar_pure_2q, ginibre_mixed_2q, haar_pure_3q, ginibre_mixed_3q.
    #[arg(long)]
    kind: String,
    /// Number of samples.
    #[arg(long)]
    samples: u64,
    /// Ensemble seed (required: sampling must be reproducible).
    #[arg(long)]
    seed: u64,
    /// Output format: "json" (state JSON lines) or "csv" (analysis rows).
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_IO_OR_PARSE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(&args),
        Command::WernerThreshold(args) => cmd_werner_threshold(&args),
        Command::Monogamy(args) => cmd_monogamy(&args),
        Command::Sample(args) => cmd_sample(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

/// STEERSCOPE_THREADS caps scan parallelism; absence keeps the rayon
/// default.
fn configure_threads() {
    if let Ok(raw) = std::env::var("STEERSCOPE_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub(crate) fn io_or_parse(message: impl ToString) -> Self {
        Failure {
            code: EXIT_IO_OR_PARSE,
            message: message.to_string(),
        }
    }

    pub(crate) fn invalid_state(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INVALID_STATE,
            message: message.to_string(),
        }
    }
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::io_or_parse(format!("cannot read {path}: {e}")))
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let direction = args
        .direction
        .parse()
        .map_err(|e| Failure::io_or_parse(format!("--direction: {e}")))?;
    let text = read_file(&args.input)?;
    let analysis = report::analyze(
        &text,
        direction,
        args.seed,
        args.tolerance,
        args.repair,
    )?;
    println!("{}", analysis.json);
    Ok(if analysis.violates {
        EXIT_STEERABLE
    } else {
        EXIT_OK
    })
}

fn cmd_werner_threshold(args: &WernerArgs) -> Result<u8, Failure> {
    let criterion = match args.criterion.as_str() {
        "steering" => ThresholdCriterion::Steering,
        "chsh" => ThresholdCriterion::Chsh,
        other => {
            return Err(Failure::io_or_parse(format!(
                "--criterion must be steering or chsh, got {other:?}"
            )))
        }
    };
    let threshold = werner_threshold(criterion);
    println!("{}", report::fmt_f64(threshold));
    Ok(EXIT_OK)
}

fn cmd_monogamy(args: &MonogamyArgs) -> Result<u8, Failure> {
    if let Some(kind_name) = &args.scan {
        let kind: EnsembleKind = kind_name
            .parse()
            .map_err(|e| Failure::io_or_parse(format!("--scan: {e}")))?;
        let samples = args
            .samples
            .ok_or_else(|| Failure::io_or_parse("--samples is required with --scan"))?;
        let seed = args
            .seed
            .ok_or_else(|| Failure::io_or_parse("--seed is required with --scan"))?;
        let spec = EnsembleSpec::new(kind, samples, seed)
            .map_err(|e| Failure::io_or_parse(e.to_string()))?;
        let summary = monogamy_scan(&spec).map_err(|e| Failure::invalid_state(e.to_string()))?;
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary serialises")
        );
        return Ok(if summary.violations > 0 {
            EXIT_MONOGAMY_VIOLATION
        } else {
            EXIT_OK
        });
    }

    let input = args
        .input
        .as_ref()
        .ok_or_else(|| Failure::io_or_parse("either --input or --scan is required"))?;
    let text = read_file(input)?;
    let state = report::parse_three_qubit(&text, args.repair)?;
    let check = monogamy_check(&state);
    println!("{}", report::monogamy_json(&text, &check));
    Ok(if check.lhs > MONOGAMY_BOUND + tolerances::BOUND_SLACK {
        EXIT_MONOGAMY_VIOLATION
    } else {
        EXIT_OK
    })
}

fn cmd_sample(args: &SampleArgs) -> Result<u8, Failure> {
    let kind: EnsembleKind = args
        .kind
        .parse()
        .map_err(|e| Failure::io_or_parse(format!("--kind: {e}")))?;
    let spec = EnsembleSpec::new(kind, args.samples, args.seed)
        .map_err(|e| Failure::io_or_parse(e.to_string()))?;
    let body = match args.format.as_str() {
        "json" => report::sample_json_lines(&spec),
        "csv" => report::sample_csv(&spec),
        other => {
            return Err(Failure::io_or_parse(format!(
                "--format must be json or csv, got {other:?}"
            )))
        }
    };
    match &args.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::io_or_parse(format!("cannot write {path}: {e}")))?,
        None => print!("{body}"),
    }
    Ok(EXIT_OK)
}
