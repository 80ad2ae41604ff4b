use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nakarate_cli::commands::{cmd_allocate, cmd_outage, cmd_simulate, cmd_sweep, CommandOutput};
use nakarate_cli::config::RunConfig;
use nakarate_cli::CliError;

/// Rate outage probabilities for OFDMA links over Nakagami-m fading:
/// closed forms, Monte Carlo verification, parameter sweeps, and
/// QoS-constrained subcarrier allocation.
#[derive(Parser)]
#[command(name = "nakarate", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form outage probability (single-hop or multi-hop config)
    Outage(RunArgs),
    /// Sweep one parameter into plot-ready CSV
    Sweep(RunArgs),
    /// Monte Carlo simulation of the configured scenario
    Simulate(RunArgs),
    /// Subcarrier allocation under per-user rate-window constraints
    Allocate(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// Path to the TOML run configuration
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV payload here (overrides the config `output` field)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the simulation seed from the config
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &RunArgs) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", args.config.display()))
    })?;
    RunConfig::from_toml(&text)
}

fn deliver(args: &RunArgs, cfg: &RunConfig, out: CommandOutput) -> Result<(), CliError> {
    print!("{}", out.summary);
    let target = args
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match target {
        Some(path) => {
            let mut f = std::fs::File::create(&path)?;
            f.write_all(out.csv.as_bytes())?;
            println!("wrote {}", path.display());
        }
        None => print!("{}", out.csv),
    }
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Outage(args) => {
            let cfg = load(args)?;
            let out = cmd_outage(&cfg)?;
            deliver(args, &cfg, out)
        }
        Command::Sweep(args) => {
            let cfg = load(args)?;
            let out = cmd_sweep(&cfg, args.seed)?;
            deliver(args, &cfg, out)
        }
        Command::Simulate(args) => {
            let cfg = load(args)?;
            let out = cmd_simulate(&cfg, args.seed)?;
            deliver(args, &cfg, out)
        }
        Command::Allocate(args) => {
            let cfg = load(args)?;
            let out = cmd_allocate(&cfg)?;
            deliver(args, &cfg, out)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nakarate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
