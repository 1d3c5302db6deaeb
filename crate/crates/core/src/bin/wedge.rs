use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wedge_tracking::cli::{
    cmd_calibrate, cmd_converge, cmd_couple, cmd_oracle, cmd_simulate, Options,
};

/// Front tracking for supersonic flow past a wedge.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (flat `key = value`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the output files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides `tracking.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit nonzero on monitor violations and event-cap stops.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run one approximate solution.
    Simulate,
    /// Run two solutions and track the functional between them.
    Couple,
    /// Probe the interaction coefficients and choose the functional weights.
    Calibrate,
    /// Compare runs at decreasing eps.
    Converge,
    /// Self-check against the closed-form references.
    Oracle,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        config: cli.config,
        out_dir: cli.out_dir,
        seed: cli.seed,
        strict: cli.strict,
    };
    let outcome = match cli.command {
        Command::Simulate => cmd_simulate(&opts),
        Command::Couple => cmd_couple(&opts),
        Command::Calibrate => cmd_calibrate(&opts),
        Command::Converge => cmd_converge(&opts),
        Command::Oracle => cmd_oracle(&opts),
    };
    if outcome.code == 0 {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    ExitCode::from(outcome.code)
}
