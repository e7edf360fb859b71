//! Writes point clouds to CSV and prints the same report as the
//! `distance` subcommand.
//!
//!     cargo run --release --example distance_report

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sliced_ae::harness::data::{synthetic_points, write_csv_points, SyntheticKind};
use sliced_ae::harness::distance_cmd;
use sliced_ae::{DistanceKind, Matrix};

pub fn run_example() -> sliced_ae::Result<()> {
    let dir = std::env::temp_dir().join("sliced-ae-distance-example");
    std::fs::create_dir_all(&dir).map_err(|e| sliced_ae::Error::io(&dir, e))?;

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let normal = Matrix::from_vec(4000, 3, StandardNormal.sample_iter(&mut rng).take(12_000).collect())?;
    let mixture = synthetic_points(SyntheticKind::gaussian_mixture(), 4000, 3, 9)?;
    let (a, b) = (dir.join("normal.csv"), dir.join("mixture.csv"));
    write_csv_points(&a, &normal)?;
    write_csv_points(&b, &mixture)?;

    for kind in [DistanceKind::Scfw, DistanceKind::Sks] {
        println!("== normal sample, {kind}\n{}\n", distance_cmd(&a, None, kind, 50, 0)?);
        println!("== mixture sample, {kind}\n{}\n", distance_cmd(&b, None, kind, 50, 0)?);
    }
    println!("== normal vs mixture\n{}", distance_cmd(&a, Some(&b), DistanceKind::Sw, 50, 0)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    run_example()
}
