use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use log::LevelFilter;
use strat_mech::{execute, Command, Invocation};

/// Stratified reduction experiments: classify phase points, simulate the
/// full and reduced dynamics, compare the two engines and plot trajectories.
///
/// Exit codes: 0 success, 2 input validation, 3 integrator failure,
/// 4 comparison failure. Logging is set by STRAT_MECH_LOG (quiet, info, debug).
#[derive(Debug, Parser)]
#[command(name = "strat-mech", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// TOML experiment config.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for random initial conditions; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Re-read emitted trajectories and check every row's invariants.
    #[arg(long)]
    validate: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Classify,
    Simulate,
    Compare,
    Plot,
}

impl From<CommandArg> for Command {
    fn from(c: CommandArg) -> Self {
        match c {
            CommandArg::Classify => Command::Classify,
            CommandArg::Simulate => Command::Simulate,
            CommandArg::Compare => Command::Compare,
            CommandArg::Plot => Command::Plot,
        }
    }
}

fn init_logging() {
    let level = match std::env::var("STRAT_MECH_LOG").as_deref() {
        Ok("quiet") => LevelFilter::Off,
        Ok("debug") => LevelFilter::Debug,
        Ok("info") | Err(_) => LevelFilter::Info,
        Ok(other) => {
            eprintln!("STRAT_MECH_LOG={other:?} not one of quiet, info, debug; using info");
            LevelFilter::Info
        }
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();
}

fn main() -> ExitCode {
    let args = Args::parse();
    init_logging();
    let inv = Invocation {
        command: args.command.into(),
        config: args.config,
        out: args.out,
        seed: args.seed,
        validate: args.validate,
    };
    match execute(&inv) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("strat-mech: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
