#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sliced_ae::kernels::KernelResult;
use sliced_ae::net::{Autoencoder, Objective};
use sliced_ae::slicer::{sliced_distance, DirectionSet};
use sliced_ae::{CostMode, DistanceKind, LatentBatch, Matrix, MlpSpec, SortedSample};

pub const SIZES: [usize; 7] = [1, 2, 3, 5, 8, 16, 64];
pub const FD_STEP: f64 = 1e-5;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-9)
}

pub fn random_sample(rng: &mut ChaCha8Rng, n: usize) -> SortedSample {
    let scale = rng.random_range(0.3..2.5);
    let shift = rng.random_range(-1.0..1.0);
    let v: Vec<f64> = (0..n)
        .map(|_| shift + scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    SortedSample::from_unsorted(&v).unwrap()
}

/// A sample whose neighbours are at least 1e-3 apart, so a finite-difference
/// step keeps the order.
pub fn separated_sample(rng: &mut ChaCha8Rng, n: usize) -> SortedSample {
    loop {
        let y = random_sample(rng, n);
        if y.values().windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return y;
        }
    }
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let v = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_vec(rows, cols, v).unwrap()
}

pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut a = x.to_vec();
            let mut b = x.to_vec();
            a[i] += h;
            b[i] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

/// Largest entrywise gap between two gradients, relative to the largest
/// numeric entry.
pub fn gradient_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = numeric.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-8);
    analytic
        .iter()
        .zip(numeric)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs() / scale))
}

pub fn kernel_gradient_error(kernel: impl Fn(&SortedSample) -> KernelResult, y: &SortedSample) -> f64 {
    let numeric = central_difference(
        |v| kernel(&SortedSample::new(v.to_vec()).unwrap()).distance,
        y.values(),
        FD_STEP,
    );
    gradient_error(&kernel(y).gradient, &numeric)
}

/// Gradient error of `sliced_distance` over the batch entries, with the
/// directions and the SW comparison draws held fixed.
pub fn sliced_gradient_error(batch: &Matrix, dirs: &DirectionSet, kind: DistanceKind, seed: u64) -> f64 {
    let rng = ChaCha8Rng::seed_from_u64(seed);
    let eval = |m: Matrix| sliced_distance(&LatentBatch::new(m).unwrap(), dirs, kind, &mut rng.clone()).unwrap();
    let analytic = eval(batch.clone()).gradient;
    let numeric = central_difference(
        |v| eval(Matrix::from_vec(batch.rows(), batch.cols(), v.to_vec()).unwrap()).distance,
        batch.as_slice(),
        FD_STEP,
    );
    gradient_error(analytic.as_slice(), &numeric)
}

pub fn tiny_spec() -> MlpSpec {
    MlpSpec::symmetric(4, &[5], 2)
}

/// A seeded tiny network with every parameter jittered off zero.
pub fn tiny_net(rng: &mut ChaCha8Rng) -> Autoencoder {
    let mut net = Autoencoder::init(tiny_spec(), rng).unwrap();
    for p in net.params_mut() {
        *p += rng.random_range(-0.2..0.2);
    }
    net
}

/// Gradient error of the full cost over every network parameter.
pub fn net_gradient_error(net: &Autoencoder, x: &Matrix, dirs: &DirectionSet, kind: DistanceKind, seed: u64) -> f64 {
    let objective = Objective::new(kind, CostMode::default());
    let rng = ChaCha8Rng::seed_from_u64(seed);
    let (_, analytic) = net.loss_and_gradient(x, &objective, dirs, &mut rng.clone()).unwrap();
    let numeric = central_difference(
        |p| {
            let mut probe = net.clone();
            probe.params_mut().copy_from_slice(p);
            probe.loss_and_gradient(x, &objective, dirs, &mut rng.clone()).unwrap().0.cost
        },
        net.params(),
        FD_STEP,
    );
    gradient_error(&analytic, &numeric)
}
