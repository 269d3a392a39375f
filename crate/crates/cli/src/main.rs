//! Thin command shell over domlab-core. All analysis lives in the library;
//! this binary parses arguments, moves files around, and maps outcomes onto
//! the exit-code contract:
//!
//!   0  verified / clean / tables match
//!   1  refuted, or a regenerated table differs from the embedded one
//!   2  parse error in an input file or state string (with line and column)
//!   3  invalid flags, labels, caps, or other validation failures
//!   4  inconclusive verification
//!   5  search found counterexamples

mod construct;
mod golden;
mod reproduce;
mod search_cmd;
mod trace;
mod util;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use domlab_core::{Caps, CoreError, DEFAULT_ROOT_SEED};

#[derive(Parser)]
#[command(name = "domlab", version, about = "exact dominance analysis of finite mechanisms")]
struct Cli {
    /// Root seed for sampled utility representations.
    #[arg(long, global = true, default_value_t = DEFAULT_ROOT_SEED)]
    seed: u64,
    /// Also write the machine-readable report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render the deletion trace of a mechanism at one ordinal state.
    Trace {
        /// Mechanism file.
        mechanism: PathBuf,
        /// State in the text syntax, e.g. "i1:b>a>c;i2:c>a>b".
        state: String,
        /// "robust", or "cardinal:<u1;u2;...>" with comma-separated rational
        /// utilities per agent in outcome order.
        #[arg(long, default_value = "robust")]
        mode: String,
    },
    /// Rebuild a studied construction and compare it against the embedded
    /// reference tables.
    Reproduce {
        /// One of: lemma5, theorem4:<outcomes>, theorem5:<cap>.
        target: String,
        /// Extra sampled representations per state (theorem5 only).
        #[arg(long, default_value_t = 0)]
        samples: u32,
    },
    /// Decide whether a mechanism implements a problem's choice rule.
    Verify {
        mechanism: PathBuf,
        problem: PathBuf,
        /// "ud" or "udinf".
        #[arg(long, default_value = "ud")]
        notion: String,
        /// "file" keeps the problem's representation mode as written, "all"
        /// forces quantification over every representation, "explicit"
        /// requires the file to list its representations.
        #[arg(long, default_value = "file")]
        mode: String,
    },
    /// Exhaustively scan a discretized mechanism space for implementations.
    Search(search_cmd::SearchArgs),
    /// Emit a studied mechanism as a canonical file on standard output.
    Construct {
        /// One of: dictatorial:<agent>, hat:<a,b,c>, star:<a,b,c>,
        /// infinite:<cap>.
        target: String,
        /// Outcome labels "a,b,c" or a bare count.
        #[arg(long)]
        outcomes: Option<String>,
        #[arg(long, default_value_t = 2)]
        agents: usize,
        /// Crossing state for infinite:<cap>, in the state text syntax.
        #[arg(long)]
        state: Option<String>,
        /// Outcome chosen at the crossing state, for infinite:<cap>.
        #[arg(long, default_value = "a")]
        choice: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = || -> Result<u8, CoreError> {
        let caps = Caps::from_env()?;
        let out = cli.out.as_deref();
        match &cli.command {
            Command::Trace { mechanism, state, mode } => trace::run(mechanism, state, mode, out),
            Command::Reproduce { target, samples } => {
                reproduce::run(target, *samples, cli.seed, out, &caps)
            }
            Command::Verify { mechanism, problem, notion, mode } => {
                verify_cmd::run(mechanism, problem, notion, mode, out, &caps)
            }
            Command::Search(args) => search_cmd::run(args, out, &caps),
            Command::Construct { target, outcomes, agents, state, choice } => {
                construct::run(target, outcomes.as_deref(), *agents, state.as_deref(), choice, out)
            }
        }
    };
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CoreError::Parse { .. } => 2,
                _ => 3,
            })
        }
    }
}
