use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cli_harness::{run, Command, Options, EXIT_ACCEPTANCE};

#[derive(Debug, Parser)]
#[command(
    name = "transition-harness",
    version,
    about = "Uniform transition-point approximants for three-term recurrences"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Run configuration (`section.key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output path; overrides `output.csv`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Frame cache path; overrides `output.cache`.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Build the frame and print tau0, nu, t1, t2 and the window.
    Frame,
    /// Compare the approximant with the high-precision reference.
    Compare,
    /// Estimate the order of convergence in n.
    Convergence,
    /// Tabulate the Casoratian of the pair.
    Wronskian,
    /// Check the Bessel kernel Wronskian identities.
    BesselSelftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let command = match cli.command {
        Cmd::Frame => Command::Frame,
        Cmd::Compare => Command::Compare,
        Cmd::Convergence => Command::Convergence,
        Cmd::Wronskian => Command::Wronskian,
        Cmd::BesselSelftest => Command::BesselSelftest,
    };
    let opts = Options {
        config: cli.config,
        out: cli.out,
        cache: cli.cache,
    };
    match run(command, &opts) {
        Ok(outcome) => {
            for line in &outcome.report {
                println!("{line}");
            }
            if let Some(v) = &outcome.violation {
                eprintln!("check failed: {v}");
                return ExitCode::from(EXIT_ACCEPTANCE);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
