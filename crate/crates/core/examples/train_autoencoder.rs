//! Trains a small sliced autoencoder on a synthetic ring and writes
//! metrics, checkpoints and scatter images to a run directory.
//!
//!     cargo run --release --example train_autoencoder -- [epochs] [output-dir]

use std::path::{Path, PathBuf};

use sliced_ae::harness::{evaluate_checkpoint, train, RunConfig};
use sliced_ae::metrics::METRICS_HEADER;

pub fn ring_config(epochs: usize, output: &Path) -> sliced_ae::Result<RunConfig> {
    let mut cfg = RunConfig::parse(
        "data = ring\n\
         data_n = 1000\n\
         latent = 2\n\
         hidden = 32,32\n\
         distance = scw\n\
         cost = log\n\
         batch_size = 50\n\
         checkpoint_every = 5\n\
         seed = 11\n",
    )?;
    cfg.epochs = epochs;
    cfg.output = output.to_path_buf();
    Ok(cfg)
}

pub fn run_example_with(epochs: usize, output: &Path) -> sliced_ae::Result<()> {
    let cfg = ring_config(epochs, output)?;
    let run = train(&cfg)?;
    println!("{METRICS_HEADER}");
    for row in &run.rows {
        println!("{}", row.to_csv());
    }
    let again = evaluate_checkpoint(run.dir.join("checkpoint-final.json"), &cfg)?;
    println!("reloaded checkpoint matches the last row: {}", &again == run.last());
    println!("run directory: {}", run.dir.display());
    Ok(())
}

pub fn run_example() -> sliced_ae::Result<()> {
    run_example_with(2, &std::env::temp_dir().join("sliced-ae-train-example"))
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().and_then(|s| s.parse().ok()).unwrap_or(30);
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs/ring"));
    run_example_with(epochs, &out)
}
