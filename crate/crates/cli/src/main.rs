//! `bellgauge`: two-qubit state analysis from the command line.
//!
//! Exit codes: 0 ok, 1 verification failed, 2 invalid state or settings,
//! 3 unparsable input, 4 empty grid, 5 search exhausted, 6 I/O error,
//! 64 usage error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use bellgauge_core::explorer::GridRange;
use bellgauge_core::TracePolicy;
use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "bellgauge", version, about = "Entropy, concurrence and CHSH violation of two-qubit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Policy {
    Strict,
    Renormalize,
}

impl From<Policy> for TracePolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Strict => TracePolicy::Strict,
            Policy::Renormalize => TracePolicy::Renormalize,
        }
    }
}

#[derive(Debug, Args)]
struct StateInput {
    /// JSON state file: {"matrix": [[[re, im], ...], ...], "label": "..."}
    state: PathBuf,
    /// How to treat a trace that is not exactly one.
    #[arg(long, value_enum, default_value = "strict")]
    trace_policy: Policy,
}

#[derive(Debug, Args)]
struct BatchOutput {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear entropy, concurrence, CHSH maximum and spectrum of a state.
    Analyze {
        #[command(flatten)]
        input: StateInput,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Reproduce the published entropies and CHSH maxima of the two example
    /// states and check them against the entropy bound 1/√2 − 1/4.
    ///
    /// The second state's printed entries sum to 1.000003; it is rescaled to
    /// unit trace before analysis.
    VerifyPaper {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Add this amount to both couplings (negative control).
        #[arg(long, allow_negative_numbers = true)]
        perturb: Option<f64>,
    },
    /// Evaluate tr(ρB) for one set of measurement directions.
    Chsh {
        #[command(flatten)]
        input: StateInput,
        /// JSON settings file: {"a": [x, y, z], "a_prime": ..., "b": ..., "b_prime": ...}
        settings: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Numerically optimize the measurement directions.
    Optimize {
        #[command(flatten)]
        input: StateInput,
        /// Maximum refinement sweeps.
        #[arg(long, default_value_t = bellgauge_core::bell::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Analyse every feasible X-state on a (c, p22, p44) grid.
    Scan {
        /// Coupling range as lo:hi:steps, or a single value.
        #[arg(long = "c", value_parser = parse_range, default_value = "0:0.5:11")]
        c: GridRange,
        #[arg(long, value_parser = parse_range, default_value = "0:1:11")]
        p22: GridRange,
        #[arg(long, value_parser = parse_range, default_value = "0:1:11")]
        p44: GridRange,
        #[arg(long, default_value_t = 0.0)]
        p11: f64,
        #[command(flatten)]
        out: BatchOutput,
    },
    /// Draw random states from the Hilbert-Schmidt ensemble.
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=4))]
        rank: u64,
        #[arg(long, env = "BELLGAUGE_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: BatchOutput,
    },
    /// Sample the constant-entropy family through the first example state.
    Family {
        #[arg(long, default_value_t = 11, value_parser = clap::value_parser!(u64).range(1..))]
        points: u64,
        /// Target linear entropy; defaults to that of the first example state.
        #[arg(long)]
        entropy: Option<f64>,
        #[command(flatten)]
        out: BatchOutput,
    },
    /// Search for CHSH-violating X-states above an entropy threshold.
    Search {
        /// Defaults to 1/√2 − 1/4.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, env = "BELLGAUGE_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: BatchOutput,
    },
}

fn parse_range(s: &str) -> Result<GridRange, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    match parts.as_slice() {
        [v] => Ok(GridRange::fixed(num(v)?)),
        [lo, hi, steps] => {
            let steps = steps.trim().parse::<usize>().map_err(|e| format!("`{steps}`: {e}"))?;
            GridRange::new(num(lo)?, num(hi)?, steps).map_err(|e| e.to_string())
        }
        _ => Err("expected lo:hi:steps or a single value".into()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { input, format } => commands::analyze(&input.state, input.trace_policy.into(), format),
        Command::VerifyPaper { format, perturb } => commands::verify_paper(format, perturb),
        Command::Chsh { input, settings, format } => {
            commands::chsh(&input.state, input.trace_policy.into(), &settings, format)
        }
        Command::Optimize { input, budget, format } => {
            commands::optimize(&input.state, input.trace_policy.into(), budget, format)
        }
        Command::Scan { c, p22, p44, p11, out } => commands::scan(c, p22, p44, p11, &out),
        Command::Sample { count, rank, seed, out } => commands::sample(count as usize, rank as usize, seed, &out),
        Command::Family { points, entropy, out } => commands::family(points as usize, entropy, &out),
        Command::Search { threshold, count, seed, out } => commands::search(threshold, count as usize, seed, &out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
