//! `ulk`: calibrate, evaluate, cross-check, sweep, and plot the
//! closed-form solution of a two-sector optimal growth model.
//!
//! Exit codes are a stable contract: 0 success, 2 invalid input,
//! 3 calibration failure, 4 verification or invariant failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod csvout;
mod fail;
mod svg;

use config::CommonArgs;
use fail::Failure;

#[derive(Parser)]
#[command(
    name = "ulk",
    version,
    about = "Closed-form paths for a two-sector optimal growth model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the initial time allocation and write calibration.txt
    Calibrate(CommonArgs),
    /// Evaluate the calibrated paths on a grid and write trajectory.csv
    Solve(SolveArgs),
    /// Run the randomized self-check battery and write report.txt/.json
    Verify(VerifyArgs),
    /// Recalibrate along one parameter range and write sweep.csv
    Sweep(SweepArgs),
    /// Write line charts of the solved paths as SVG
    Plot(CommonArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Reuse a calibration snapshot instead of solving again
    #[arg(long)]
    calibration: Option<PathBuf>,
    /// Also write overlay charts for u and h
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Corrupt one derived coefficient to prove the battery can fail
    #[arg(long, hide = true)]
    inject_chi_error: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parameter to sweep (one of the eight model parameter keys)
    #[arg(long)]
    param: String,
    /// First swept value
    #[arg(long)]
    from: f64,
    /// Last swept value
    #[arg(long)]
    to: f64,
    /// Number of grid points including both ends
    #[arg(long)]
    steps: usize,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Calibrate(args) => {
            let cfg = config::resolve(&args)?;
            commands::cmd_calibrate(&cfg)
        }
        Command::Solve(args) => {
            let cfg = config::resolve(&args.common)?;
            commands::cmd_solve(&cfg, args.calibration.as_deref(), args.svg)
        }
        Command::Verify(args) => {
            let cfg = config::resolve(&args.common)?;
            commands::cmd_verify(&cfg, args.inject_chi_error)
        }
        Command::Sweep(args) => {
            let cfg = config::resolve(&args.common)?;
            commands::cmd_sweep(&cfg, &args.param, args.from, args.to, args.steps)
        }
        Command::Plot(args) => {
            let cfg = config::resolve(&args)?;
            commands::cmd_plot(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code as u8)
        }
    }
}
