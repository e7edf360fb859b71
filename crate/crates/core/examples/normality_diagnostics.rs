//! Mardia skewness and kurtosis, the Frechet proxy and the SW monitor on a
//! normal sample and on two non-normal ones.
//!
//!     cargo run --release --example normality_diagnostics

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal, Uniform};

use sliced_ae::metrics::{gaussian_frechet_proxy, mardia_kurtosis, mardia_skewness, sw_monitor};
use sliced_ae::{LatentBatch, Matrix};

const N: usize = 5000;
const DIM: usize = 4;

fn batch_from(values: Vec<f64>) -> sliced_ae::Result<LatentBatch> {
    LatentBatch::new(Matrix::from_vec(N, DIM, values)?)
}

pub fn run_example() -> sliced_ae::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let normal: Vec<f64> = StandardNormal.sample_iter(&mut rng).take(N * DIM).collect();
    let exponential: Vec<f64> = Exp1.sample_iter(&mut rng).take(N * DIM).map(|v: f64| v - 1.0).collect();
    let uniform = Uniform::new(-3f64.sqrt(), 3f64.sqrt()).expect("valid range");
    let flat: Vec<f64> = uniform.sample_iter(&mut rng).take(N * DIM).collect();
    let reference = Matrix::from_vec(N, DIM, StandardNormal.sample_iter(&mut rng).take(N * DIM).collect())?;

    println!(
        "{:<12} {:>10} {:>10} {:>10} {:>10}",
        "sample", "skewness", "kurt-D(D+2)", "sw", "frechet"
    );
    for (name, values) in [("normal", normal), ("exponential", exponential), ("uniform", flat)] {
        let b = batch_from(values)?;
        println!(
            "{:<12} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            name,
            mardia_skewness(&b),
            mardia_kurtosis(&b, true),
            sw_monitor(&b, 50, &mut rng)?,
            gaussian_frechet_proxy(b.matrix(), &reference)?,
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    run_example()
}
