use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Decide, construct and verify perfect discrimination strategies for pairs
/// of rank-one POVMs.
#[derive(Debug, Parser)]
#[command(name = "povmdisc", version, about)]
pub struct Cli {
    /// Absolute tolerance for algebraic identities (overrides POVMDISC_TOL).
    #[arg(long, global = true, value_name = "T")]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the SIC POVM paired with a relabelling of itself.
    Sic {
        #[arg(long)]
        dim: usize,
        /// One-based effect permutation, comma separated.
        #[arg(long, value_delimiter = ',')]
        perm: Option<Vec<usize>>,
        /// JSON file holding the fiducial as a list of [re, im] pairs.
        #[arg(long)]
        fiducial: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a pair of independent Haar-random rank-one POVMs.
    Random {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        effects: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the distinguishability verdict of a pair as JSON.
    Classify {
        pair: PathBuf,
        /// Numbers of uses for the parallel sufficient check, comma separated.
        #[arg(long = "parallel-n", value_delimiter = ',')]
        parallel_n: Vec<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Build the two-shot adaptive scheme for a pair.
    Synthesize {
        pair: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// How to choose the operator orthogonal to the span.
        #[arg(long = "a-choice", value_enum, default_value_t = AChoiceArg::Canonical)]
        a_choice: AChoiceArg,
        /// Random candidates tried by `match-overlap`.
        #[arg(long, default_value_t = 64)]
        candidates: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Evaluate a scheme on a pair; exact unless --shots is given.
    Simulate {
        scheme: PathBuf,
        pair: PathBuf,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Look for a parallel discrimination witness with N uses.
    ParallelCheck {
        pair: PathBuf,
        #[arg(long)]
        uses: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Tally verdicts over random pairs and write a CSV.
    Sweep {
        #[arg(long)]
        dim: usize,
        /// `M`, `M1..M2`, `M1..M2:STEP` or a comma-separated list.
        #[arg(long)]
        effects: String,
        /// Samples per effect count (default 10000 for d <= 3, 500 above).
        #[arg(long, conflicts_with = "full_scale")]
        samples: Option<u64>,
        /// Use 10^6 samples per point.
        #[arg(long = "full-scale")]
        full_scale: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the configuration and rows as JSON.
        #[arg(long)]
        sidecar: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long = "max-iter", default_value_t = 5000)]
        max_iter: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Random starts of the alternating-projection search.
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long = "max-iter", default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AChoiceArg {
    Canonical,
    MatchOverlap,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(1)
        }
    }
}

/// Joins the error chain, skipping causes already spelled out by the
/// message above them.
fn describe(e: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !out.contains(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
    }
    out
}
