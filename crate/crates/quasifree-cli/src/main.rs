//! Batch interface for Gaussian quantum-noise models.
//!
//! ```text
//! quasifree <command> --config <path> [--t-max X] [--steps N] [--dt X] [--fock-dim N] [--output <path>]
//! ```
//!
//! Commands: `validate` (constraint report), `convert` (coefficient
//! presentations to normal order and back), `generator` (damping operator,
//! GKS matrix, Liouvillian spectrum), `evolve` (trajectory CSV), `oracle`
//! (collision-model comparison CSV + convergence table), `check`
//! (deterministic invariant suite).
//!
//! Exit codes: 0 success; 1 constraint or check failure; 2 malformed
//! config or usage error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Error carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable, or structurally invalid configuration (exit 2).
    Malformed(String),
    /// A domain constraint or invariant check failed (exit 1).
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Malformed(msg) | CliError::Failure(msg) => msg,
        }
    }
}

impl From<quasifree::Error> for CliError {
    fn from(e: quasifree::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "quasifree",
    version,
    about = "Gaussian quantum-noise models: validation, conversion, generators, trajectories, collision-model cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Model configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override run.t_max
    #[arg(long, value_name = "X")]
    t_max: Option<f64>,
    /// Override run.steps
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
    /// Override run.dt
    #[arg(long, value_name = "X")]
    dt: Option<f64>,
    /// Override run.fock_dim
    #[arg(long, value_name = "N")]
    fock_dim: Option<usize>,
    /// Write the primary output to a file instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Report which model constraints hold or fail
    Validate(CommonArgs),
    /// Convert a coefficient presentation to normal order; extract (W, H, L)
    Convert(CommonArgs),
    /// Report the damping operator, GKS matrix, and Liouvillian spectrum
    Generator(CommonArgs),
    /// Integrate the master equation and emit a trajectory CSV
    Evolve(CommonArgs),
    /// Compare the collision model against the master equation
    Oracle(CommonArgs),
    /// Run the deterministic invariant suite; nonzero exit on any failure
    Check(CommonArgs),
}

fn run(command: &Command) -> Result<(), CliError> {
    let args = match command {
        Command::Validate(a)
        | Command::Convert(a)
        | Command::Generator(a)
        | Command::Evolve(a)
        | Command::Oracle(a)
        | Command::Check(a) => a,
    };
    let cfg = config::load(&args.config)?;
    match command {
        Command::Validate(_) => commands::validate(&cfg),
        Command::Convert(_) => commands::convert(&cfg, args),
        Command::Generator(_) => commands::generator(&cfg, args),
        Command::Evolve(_) => commands::evolve(&cfg, args),
        Command::Oracle(_) => commands::oracle(&cfg, args),
        Command::Check(_) => commands::check(&cfg),
    }
}

/// Restore the default SIGPIPE disposition so piping into `head` and
/// friends truncates the process silently instead of panicking on a
/// broken-pipe write error.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
