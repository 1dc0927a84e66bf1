//! Command-line front end: one subcommand per library capability, JSON on stdout.

use anyhow::Context;
use clap::{Parser, Subcommand};
use qhi::io::commands::{self, CommandError, Output};
use qhi::io::surgery::DEFAULT_HEIGHT;
use qhi::io::Mode;
use qhi::statesum::{ConventionProfile, CALIBRATION_N, CALIBRATION_SEED};
use qhi::triangulation::MoveSpec;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qhi", version, about = "Decorated triangulations, scissors classes and cyclic 6j state sums")]
struct Cli {
    /// Keep unknown document fields instead of rejecting them.
    #[arg(long, global = true)]
    lax: bool,
    /// Seed for numeric potentials of parabolic cocycles.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural report; exits 1 on a violation.
    Validate { file: String },
    /// Attach the branching of a total vertex order.
    Branch {
        file: String,
        #[arg(long, value_delimiter = ',')]
        order: Vec<usize>,
    },
    /// Solve for a charge, optionally with the lattice vectors w(e).
    Charges {
        file: String,
        #[arg(long)]
        lattice: bool,
    },
    /// Pseudo-moduli, pre-ideality and edge-modulus products.
    Idealize { file: String },
    /// Exact class invariant with symbolic potentials; exits 1 unless ZERO.
    Dehn {
        file: String,
        #[arg(long, default_value_t = true)]
        symbolic: bool,
    },
    /// Ψ, H and K for each N.
    Statesum {
        file: String,
        #[arg(long = "N", default_value = "3")]
        n: String,
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// Replay a move script and compare H along it; exits 1 above 1e-6.
    Invariance {
        file: String,
        /// Triangulation the script should reach.
        target: Option<String>,
        /// JSON list of moves, inline or as a path.
        #[arg(long)]
        moves: String,
        #[arg(long = "N", default_value_t = 3)]
        n: u32,
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// Rank convention profiles on the built-in transit suite; exits 1 if none passes the gate.
    Calibrate {
        #[arg(long = "N", default_value_t = CALIBRATION_N)]
        n: u32,
        #[arg(long = "suite-seed", default_value_t = CALIBRATION_SEED)]
        suite_seed: u64,
        /// JSON list of profiles; the full search space if absent.
        #[arg(long)]
        space: Option<String>,
        #[arg(long, default_value_t = 20)]
        keep: usize,
    },
    /// (2πi/N²) log K_N over a list of odd N.
    Probe {
        file: String,
        #[arg(long = "N", default_value = "3..13")]
        n: String,
        #[arg(long, default_value = "default")]
        profile: String,
    },
    /// Coprime (s, r) from holonomies such as parabolic:2 or cartan:4.
    Surgery {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: i64,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> anyhow::Result<T> {
    let text = if std::path::Path::new(arg).is_file() { std::fs::read_to_string(arg)? } else { arg.to_string() };
    serde_json::from_str(&text).with_context(|| format!("parsing {arg}"))
}

fn run(cli: Cli) -> anyhow::Result<Result<Output, CommandError>> {
    let mode = if cli.lax { Mode::Lax } else { Mode::Strict };
    let doc = |f: &str| commands::read_document(f, mode);
    let seed = cli.seed;
    Ok((|| match cli.command {
        Command::Validate { file } => commands::validate(&doc(&file)?),
        Command::Branch { file, order } => commands::branch(&doc(&file)?, &order),
        Command::Charges { file, lattice } => commands::charges(&doc(&file)?, lattice),
        Command::Idealize { file } => commands::idealize(&doc(&file)?, seed),
        Command::Dehn { file, .. } => commands::dehn(&doc(&file)?),
        Command::Statesum { file, n, profile } => {
            commands::statesum(&doc(&file)?, &commands::parse_n_list(&n)?, &commands::read_profile(&profile)?, seed)
        }
        Command::Invariance { file, target, moves, n, profile } => {
            let moves: Vec<MoveSpec> = read_json(&moves).map_err(|e| CommandError::Input(format!("{e:#}")))?;
            let target = target.map(|t| doc(&t)).transpose()?;
            commands::invariance(&doc(&file)?, &moves, n, &commands::read_profile(&profile)?, seed, target.as_ref())
        }
        Command::Calibrate { n, suite_seed, space, keep } => {
            let space: Option<Vec<ConventionProfile>> =
                space.map(|s| read_json(&s)).transpose().map_err(|e| CommandError::Input(format!("{e:#}")))?;
            commands::calibrate(n, suite_seed, space, keep)
        }
        Command::Probe { file, n, profile } => {
            commands::probe(&doc(&file)?, &commands::parse_n_list(&n)?, &commands::read_profile(&profile)?, seed)
        }
        Command::Surgery { alpha, beta, height } => commands::surgery(&alpha, &beta, height),
    })())
}

fn main() -> anyhow::Result<ExitCode> {
    match run(Cli::parse())? {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.report)?;
            if let Err(e) = writeln!(std::io::stdout(), "{text}") {
                // a closed pipe downstream is not an error of ours
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
            Ok(ExitCode::from(if out.ok { 0 } else { 1 }))
        }
        Err(e) => {
            eprintln!("{}", e.record());
            Ok(ExitCode::from(e.exit_code() as u8))
        }
    }
}
