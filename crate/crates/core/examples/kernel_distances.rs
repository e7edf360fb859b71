//! One-dimensional closed-form distances between a sample and N(0, 1), with
//! their gradients and a numerical cross-check.
//!
//!     cargo run --release --example kernel_distances

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use sliced_ae::kernels::{cvm_closed, cw_closed, ks_closed, sw_pairwise, w2_closed};
use sliced_ae::oracles::{cvm_numeric, cw_numeric, ks_numeric, w2_numeric, QuadratureSpec};
use sliced_ae::{KsVariant, SortedSample};

pub fn run_example() -> sliced_ae::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let normal: Vec<f64> = StandardNormal.sample_iter(&mut rng).take(64).collect();
    let shifted: Vec<f64> = normal.iter().map(|v| 1.5 * v + 0.5).collect();
    let q = QuadratureSpec::fast();

    println!("{:<20} {:>12} {:>12}", "distance to N(0,1)", "normal", "shifted");
    for (label, f) in [
        ("w2 (closed)", &(|y: &SortedSample| w2_closed(y).distance) as &dyn Fn(&SortedSample) -> f64),
        ("w2 (quadrature)", &|y: &SortedSample| w2_numeric(y, q)),
        ("cw (closed)", &|y: &SortedSample| cw_closed(y).distance),
        ("cw (quadrature)", &|y: &SortedSample| cw_numeric(y, q)),
        ("cvm (closed)", &|y: &SortedSample| cvm_closed(y).distance),
        ("cvm (quadrature)", &|y: &SortedSample| cvm_numeric(y, q)),
        ("ks (one-sided)", &|y: &SortedSample| ks_closed(y, KsVariant::Upper).distance),
        ("ks (supremum)", &|y: &SortedSample| ks_numeric(y)),
    ] {
        let a = f(&SortedSample::from_unsorted(&normal)?);
        let b = f(&SortedSample::from_unsorted(&shifted)?);
        println!("{label:<20} {a:>12.6} {b:>12.6}");
    }

    let y = SortedSample::from_unsorted(&shifted)?;
    let z = SortedSample::from_unsorted(&normal)?;
    println!("\nsw between the two samples: {:.6}", sw_pairwise(&y, &z)?.distance);

    let g = w2_closed(&y).gradient;
    println!("w2 gradient at the three smallest points: {:.4?}", &g[..3]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    run_example()
}
