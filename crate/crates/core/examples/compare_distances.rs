//! Trains one autoencoder per distance kind on the same 2-D Gaussian mixture
//! and prints how the normality metrics moved between the first and last
//! epoch.
//!
//!     cargo run --release --example compare_distances -- [epochs] [output-dir]

use std::path::PathBuf;
use std::time::Instant;

use sliced_ae::harness::{train, RunConfig, RunSummary};
use sliced_ae::DistanceKind;

pub fn comparison_config(kind: DistanceKind, epochs: usize, root: &std::path::Path) -> RunConfig {
    let mut cfg = RunConfig::parse(
        "data = gaussian_mixture\n\
         data_n = 2000\n\
         data_dim = 2\n\
         latent = 2\n\
         hidden = 64,64\n\
         projections = 50\n\
         cost = log\n\
         batch_size = 100\n\
         seed = 7\n",
    )
    .expect("static config");
    cfg.distance = kind;
    cfg.epochs = epochs;
    cfg.output = root.join(kind.name());
    cfg
}

pub fn run_example_with(epochs: usize, root: &std::path::Path) -> sliced_ae::Result<Vec<RunSummary>> {
    let mut out = Vec::new();
    println!(
        "{:<5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>7}",
        "kind", "cost0", "cost", "sw0", "sw", "kurt0", "kurt", "secs"
    );
    for kind in DistanceKind::ALL {
        let t = Instant::now();
        let run = train(&comparison_config(kind, epochs, root))?;
        let (a, b) = (run.first(), run.last());
        println!(
            "{:<5} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>10.3} {:>10.3} {:>7.1}",
            kind.name(),
            a.cost,
            b.cost,
            a.sw_monitor,
            b.sw_monitor,
            a.mardia_kurtosis_normalized,
            b.mardia_kurtosis_normalized,
            t.elapsed().as_secs_f64()
        );
        out.push(run);
    }
    Ok(out)
}

pub fn run_example() -> sliced_ae::Result<()> {
    let dir = std::env::temp_dir().join("sliced-ae-compare");
    run_example_with(3, &dir).map(|_| ())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let root = args.next().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs/compare"));
    run_example_with(epochs, &root)?;
    println!("metrics and images under {}", root.display());
    Ok(())
}
