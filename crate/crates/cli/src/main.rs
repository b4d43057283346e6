//! `pinlab`: batch experiments on disordered pinning models.
//!
//! ```text
//! pinlab <command> --config <file> [--seed S] [--workers W]
//! ```
//!
//! Exit status is 0 on success, 2 for configuration errors and 3 for
//! numerical failures; the error name is printed on stderr.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Command;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "pinlab", version, about = "Disordered polymer pinning experiments")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed` from the configuration.
    #[arg(long, env = "PINLAB_SEED")]
    seed: Option<u64>,
    /// Worker threads for replica parallelism (default: all cores).
    #[arg(long, env = "PINLAB_WORKERS")]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("pinlab: {}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &Args) -> Result<Vec<PathBuf>> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    }
    commands::run(args.command, &cfg)
}
