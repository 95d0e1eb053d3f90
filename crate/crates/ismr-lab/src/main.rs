use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ismr_lab::{param, run_experiment, Command, ExperimentConfig, LabResult};

#[derive(Debug, Parser)]
#[command(name = "ismr-lab", version, about = "Experiments for inverted strict modular relations")]
struct Cli {
    /// Seed for every random stream; required unless the config carries one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (`.json` for JSON); stdout when absent.
    #[arg(long, global = true)]
    out: Option<String>,
    #[command(subcommand)]
    action: Action,
}

#[derive(Debug, Subcommand)]
enum Action {
    /// Run a JSON config, or replay an earlier output from its header.
    Run {
        #[arg(long)]
        config: String,
    },
    #[command(flatten)]
    Experiment(Command),
}

fn main() -> ExitCode {
    match go(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn go(cli: Cli) -> LabResult<()> {
    let mut cfg = match cli.action {
        Action::Run { config } => ExperimentConfig::from_text(&std::fs::read_to_string(&config)?)?,
        Action::Experiment(command) => {
            let seed = cli.seed.ok_or_else(|| param("seed", "--seed is required"))?;
            ExperimentConfig { command, seed, out: None }
        }
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    let report = run_experiment(&cfg)?;
    let text = report.write(cfg.out.as_deref())?;
    if cfg.out.is_none() {
        print!("{text}");
    }
    Ok(())
}
