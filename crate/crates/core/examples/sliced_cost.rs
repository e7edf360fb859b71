//! Sliced distances of a latent batch to N(0, I) and the two ways of
//! combining them with a reconstruction error.
//!
//!     cargo run --release --example sliced_cost

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use sliced_ae::slicer::{composite_cost, sample_directions, sliced_distance};
use sliced_ae::{CostMode, DistanceKind, LatentBatch, Matrix};

fn gaussian_batch(n: usize, dim: usize, std: f64, rng: &mut ChaCha8Rng) -> sliced_ae::Result<LatentBatch> {
    let dist = Normal::new(0.0, std).expect("positive std");
    let v: Vec<f64> = dist.sample_iter(rng).take(n * dim).collect();
    LatentBatch::new(Matrix::from_vec(n, dim, v)?)
}

pub fn run_example() -> sliced_ae::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dirs = sample_directions(50, 8, &mut rng)?;
    println!("{:<6} {:>12} {:>12} {:>12}", "kind", "std 1.0", "std 0.5", "std 2.0");
    for kind in DistanceKind::ALL {
        let mut cells = Vec::new();
        for std in [1.0, 0.5, 2.0] {
            let batch = gaussian_batch(500, 8, std, &mut ChaCha8Rng::seed_from_u64(11))?;
            cells.push(sliced_distance(&batch, &dirs, kind, &mut rng)?.distance);
        }
        println!("{:<6} {:>12.6} {:>12.6} {:>12.6}", kind.name(), cells[0], cells[1], cells[2]);
    }

    let batch = gaussian_batch(500, 8, 0.5, &mut rng)?;
    let d = sliced_distance(&batch, &dirs, DistanceKind::Scfw, &mut rng)?;
    let mse = 0.2;
    for mode in [
        CostMode::lambda_weighted(10.0)?,
        CostMode::lambda_weighted(100.0)?,
        CostMode::log_composite(1e-12)?,
    ] {
        let c = composite_cost(mse, d.distance, mode)?;
        println!(
            "{mode:?}: total {:.6}, penalty term {:.6}, penalty slope {:.6}",
            c.total, c.penalty_term, c.penalty_slope
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    run_example()
}
