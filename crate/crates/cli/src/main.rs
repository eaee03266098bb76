//! Batch driver: JSON configs in, JSON reports and CSV grids out.
//!
//! Exit status: 0 success, 1 a check did not hold (or I/O failed),
//! 2 invalid configuration or flags, 3 non-convergence (a partial report is
//! still written), 64 unknown subcommand.

mod commands;
mod config;
mod context;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use gevrey::Execution;

use crate::commands::verify::Suite;
use crate::context::Ctx;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Parser)]
#[command(name = "gevrey", version, about = "Gevrey asymptotics experiments: transforms, type fits and checks")]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for reports; created when missing.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Seed for grid jitter (only used when a grid sets `jitter`).
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplace transform of a Borel sum, sampled on a grid.
    Transform,
    /// Empirical Gevrey or flat types along directions.
    TypeFit,
    /// Closed-form type laws over a grid of angles.
    PredictType,
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: SuiteArg,
    },
    /// Build a 2-variable function from a first-order family.
    Interpolate,
    /// Print the testbed registry.
    ListTestbed,
}

#[derive(Subcommand, Clone, Copy)]
enum SuiteArg {
    /// Coherence of a total family.
    Coherence,
    /// Maximum principle on a polysector.
    Pl,
    /// Decay of `f − App_N` along rays.
    Remainder,
    /// Decay of a flat function along rays.
    NullExpansion,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Coherence => Suite::Coherence,
            SuiteArg::Pl => Suite::Pl,
            SuiteArg::Remainder => Suite::Remainder,
            SuiteArg::NullExpansion => Suite::NullExpansion,
        }
    }
}

fn execution(threads: Option<usize>) -> CliResult<Execution> {
    match threads {
        None => Ok(Execution::default()),
        Some(0) => Err(CliError::schema("--threads must be at least 1")),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Runtime(format!("cannot start {n} threads: {e}")))?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Execution::Parallel)
        }
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let listing_to_file = cli.out.is_some();
    let ctx = Ctx {
        config: cli.config,
        out: cli.out.unwrap_or_else(|| PathBuf::from(".")),
        exec: execution(cli.threads)?,
        seed: cli.seed,
    };
    match cli.command {
        Command::Transform => commands::transform::run(&ctx),
        Command::TypeFit => commands::type_fit::run(&ctx),
        Command::PredictType => commands::predict::run(&ctx),
        Command::Verify { suite } => commands::verify::run(&ctx, suite.into()),
        Command::Interpolate => commands::interpolate::run(&ctx),
        Command::ListTestbed => {
            if ctx.config.is_some() {
                return Err(CliError::schema("list-testbed takes no config"));
            }
            commands::list::run(&ctx, listing_to_file)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 64,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            if outcome != Outcome::Passed {
                eprintln!("status: {}", outcome.label());
            }
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
