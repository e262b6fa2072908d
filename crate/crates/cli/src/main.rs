//! `nbw`: command-line front end for the normal bundle workbench.
//!
//! Every command prints one JSON document (a [`report::CommandResult`]) on
//! stdout. Exit codes: 0 success, 2 input error, 3 engine error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand};
use nbw_core::FieldSpec;

#[derive(Parser, Debug)]
#[command(name = "nbw", version, about = "Splitting types and stability of normal bundles of space curves")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Report wall-clock time (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

/// A single seed `n` or a half-open range `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedSpec {
    One(u64),
    Range(u64, u64),
}

impl SeedSpec {
    pub fn seeds(self) -> Vec<u64> {
        match self {
            SeedSpec::One(s) => vec![s],
            SeedSpec::Range(a, b) => (a..b).collect(),
        }
    }
}

impl FromStr for SeedSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed {t:?}: {e}"));
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a >= b {
                    return Err(format!("empty seed range {s}"));
                }
                Ok(SeedSpec::Range(a, b))
            }
            None => num(s).map(SeedSpec::One),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normal and restricted tangent splitting of a curve file or random curves.
    Splitting {
        /// Curve file (JSON).
        #[arg(long, conflicts_with = "random")]
        curve: Option<PathBuf>,
        /// Random curve of degree D in P^R.
        #[arg(long, num_args = 2, value_names = ["D", "R"], required_unless_present = "curve")]
        random: Option<Vec<usize>>,
        #[arg(long, default_value = "q")]
        field: FieldSpec,
        /// Seed or seed range `a..b`.
        #[arg(long, env = "NBW_SEED", default_value = "0")]
        seed: SeedSpec,
        /// Highest kernel degree scanned (default 3d + 4).
        #[arg(long)]
        degree_bound: Option<usize>,
    },
    /// Stability of the normal bundle of a general curve of degree D and genus G in P^3.
    Classify {
        d: i64,
        g: i64,
        #[arg(long, default_value_t = 0)]
        char: u64,
    },
    /// Reduction plan of (D, G) to base cases.
    Plan {
        d: i64,
        g: i64,
        #[arg(long, default_value_t = 0)]
        char: u64,
    },
    /// Splitting type of a modified normal bundle.
    Modify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        modspec: PathBuf,
    },
    /// Slopes and gluing checks on a nodal configuration.
    Nodal {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep of random rational curves over F_2: parity and balancedness.
    #[command(name = "verify-char2")]
    VerifyChar2 {
        #[arg(long, default_value_t = 3)]
        dmin: usize,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
        #[arg(long, default_value_t = 50)]
        trials: u64,
        #[arg(long, env = "NBW_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, outcome) = commands::run(&cli.command);
    let elapsed = cli.timing.then(|| start.elapsed());
    match outcome {
        Ok((inputs, outputs)) => {
            let result = report::CommandResult::new(name, inputs, outputs, elapsed);
            println!("{}", report::render(&result, cli.pretty));
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = if err.is_input_error() { 2 } else { 3 };
            eprintln!("{}", report::render(&report::error_document(name, &err), cli.pretty));
            ExitCode::from(code)
        }
    }
}
