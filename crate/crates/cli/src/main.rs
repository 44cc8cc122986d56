use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use commands::{CliError, Done, Options};

/// Time Distance collision prediction, path planning and simulation.
#[derive(Parser, Debug)]
#[command(name = "timedist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Time to collision of the vehicle against every obstacle.
    Predict(Args),
    /// One plan from the initial state: path CSV and SVG.
    Plan(Args),
    /// Closed-loop run: log JSON, trajectory CSV and SVG overlay.
    Simulate(Args),
    /// Tracked path length of both planners against grid A*.
    Compare(Args),
    /// SVG of a saved simulation log.
    Render(Args),
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Scenario file (TOML); for `render`, a log written by `simulate`.
    file: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the planner mode in the file.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Also write the composed field on the section grid (`plan`).
    #[arg(long)]
    field_dump: bool,
    /// Replace the scenario with generated scene N (sparse static family in
    /// static mode, moving-obstacle family in dynamic mode).
    #[arg(long)]
    seed: Option<u64>,
    /// Write one SVG per replan (`simulate`, `render`).
    #[arg(long)]
    frames: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Static,
    Dynamic,
}

impl From<ModeArg> for timedist_core::Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Static => timedist_core::Mode::Static,
            ModeArg::Dynamic => timedist_core::Mode::Dynamic,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (run, args): (fn(&Options) -> Result<Done, CliError>, Args) = match cli.command {
        Command::Predict(a) => (commands::predict, a),
        Command::Plan(a) => (commands::plan, a),
        Command::Simulate(a) => (commands::simulate, a),
        Command::Compare(a) => (commands::compare, a),
        Command::Render(a) => (commands::render, a),
    };
    let opts = Options {
        file: args.file,
        out: args.out,
        mode: args.mode.map(Into::into),
        field_dump: args.field_dump,
        seed: args.seed,
        frames: args.frames,
    };
    match run(&opts) {
        Ok(done) => {
            print!("{}", done.summary);
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
