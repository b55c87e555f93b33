use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use kinmix_core::config::{Preset, RunConfig};
use kinmix_core::io::run;

/// Micro-macro particle simulator for two-species BGK gas mixtures.
#[derive(Debug, Parser)]
#[command(name = "kinmix", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a JSON configuration.
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides `particles.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// List the initial-condition presets, or print a preset's default
    /// configuration.
    Presets {
        /// Print the default configuration of this preset as JSON.
        name: Option<String>,
    },
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("KINMIX_THREADS") {
        let n: usize = v.parse().with_context(|| format!("KINMIX_THREADS={v} is not a count"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    Ok(())
}

fn main_inner() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    match cli.command {
        Command::Run { config, out, seed } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = RunConfig::from_json(&text)
                .with_context(|| format!("in {}", config.display()))?;
            if let Some(s) = seed {
                cfg.particles.seed = s;
            }
            let output = run(&cfg, &out)?;
            println!(
                "wrote {} rows to {} and {} snapshots",
                output.rows.len(),
                output.timeseries.display(),
                output.snapshots.len()
            );
            if output.unmatched_cells > 0 {
                eprintln!("warning: {} cell matchings were skipped (too few particles)", output.unmatched_cells);
            }
        }
        Command::Presets { name: None } => {
            for p in Preset::ALL {
                println!("{:32} {}", p.name(), p.description());
            }
        }
        Command::Presets { name: Some(name) } => {
            let preset = Preset::ALL
                .into_iter()
                .find(|p| p.name() == name)
                .with_context(|| format!("unknown preset `{name}`"))?;
            println!("{}", RunConfig::preset_default(preset).to_json());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
