use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use sliced_ae::harness::data::{synthetic_points, write_csv_points, SyntheticKind};
use sliced_ae::harness::{distance_cmd, evaluate_checkpoint, train, RunConfig};
use sliced_ae::metrics::METRICS_HEADER;
use sliced_ae::DistanceKind;

#[derive(Parser)]
#[command(name = "sliced-ae", about = "Sliced normality distances and autoencoder runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset as CSV, one point per row.
    GenData {
        /// gaussian_mixture, ring or checker
        #[arg(long, default_value = "gaussian_mixture")]
        kind: String,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train an autoencoder and log metrics per epoch.
    Train {
        /// key = value config file
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override a config key, e.g. --set epochs=10
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Evaluate a checkpoint on the test split of the configured dataset.
    Eval {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Sliced distance of a CSV point set to N(0, I), or SW to a second set.
    Distance {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value = "scfw")]
        kind: DistanceKind,
        #[arg(long, default_value_t = 50)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn load_config(path: Option<&PathBuf>, overrides: &[String]) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => RunConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => RunConfig::default(),
    };
    for o in overrides {
        cfg.apply_override(o)?;
    }
    Ok(cfg)
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::GenData {
            kind,
            n,
            dim,
            seed,
            out,
        } => {
            let kind: SyntheticKind = kind.parse()?;
            let points = synthetic_points(kind, n, dim, seed)?;
            write_csv_points(&out, &points)?;
            println!("wrote {n} points to {}", out.display());
        }
        Command::Train { config, overrides } => {
            let cfg = load_config(config.as_ref(), &overrides)?;
            let run = train(&cfg)?;
            println!("run directory: {}", run.dir.display());
            println!("{METRICS_HEADER}");
            println!("{}", run.first().to_csv());
            println!("{}", run.last().to_csv());
        }
        Command::Eval {
            checkpoint,
            config,
            overrides,
        } => {
            let cfg = load_config(config.as_ref(), &overrides)?;
            let row = evaluate_checkpoint(&checkpoint, &cfg)?;
            println!("{METRICS_HEADER}");
            println!("{}", row.to_csv());
        }
        Command::Distance { a, b, kind, k, seed } => {
            println!("{}", distance_cmd(&a, b.as_deref(), kind, k, seed)?);
        }
    }
    Ok(())
}
