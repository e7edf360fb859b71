//! Normality diagnostics tracked during training.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::slicer::{sample_directions, sliced_distance, DistanceKind, LatentBatch};

/// Column header of `metrics.csv`.
pub const METRICS_HEADER: &str =
    "epoch,mse,sliced_penalty,cost,mardia_skewness,mardia_kurtosis_normalized,sw_monitor,gfd_proxy";

/// One evaluation of a model on held-out data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsRow {
    pub epoch: usize,
    pub mse: f64,
    pub sliced_penalty: f64,
    pub cost: f64,
    pub mardia_skewness: f64,
    pub mardia_kurtosis_normalized: f64,
    pub sw_monitor: f64,
    pub gfd_proxy: f64,
}

impl MetricsRow {
    /// The row as one CSV line (no trailing newline).
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.epoch,
            self.mse,
            self.sliced_penalty,
            self.cost,
            self.mardia_skewness,
            self.mardia_kurtosis_normalized,
            self.sw_monitor,
            self.gfd_proxy
        )
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 8 {
            return Err(Error::Csv {
                line: 0,
                reason: format!("expected 8 fields, got {}", fields.len()),
            });
        }
        let num = |i: usize| -> Result<f64> {
            fields[i].parse().map_err(|_| Error::Csv {
                line: 0,
                reason: format!("bad number `{}`", fields[i]),
            })
        };
        Ok(Self {
            epoch: fields[0].parse().map_err(|_| Error::Csv {
                line: 0,
                reason: format!("bad epoch `{}`", fields[0]),
            })?,
            mse: num(1)?,
            sliced_penalty: num(2)?,
            cost: num(3)?,
            mardia_skewness: num(4)?,
            mardia_kurtosis_normalized: num(5)?,
            sw_monitor: num(6)?,
            gfd_proxy: num(7)?,
        })
    }
}

/// `(1/n^2) Σ_{j,k} (x_j . x_k)^3` about the origin.
///
/// Equal to the squared Frobenius norm of the mean third-moment tensor,
/// which is what gets computed when `D^2` is small next to `n`.
pub fn mardia_skewness(x: &LatentBatch) -> f64 {
    let n = x.n();
    let d = x.dim();
    if d * d * 2 < n {
        skewness_by_moment_tensor(x.matrix())
    } else {
        skewness_pairwise(x.matrix())
    }
}

fn skewness_pairwise(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut total = 0.0;
    for j in 0..n {
        let a = m.row(j);
        total += dot(a, a).powi(3);
        for k in (j + 1)..n {
            total += 2.0 * dot(a, m.row(k)).powi(3);
        }
    }
    total / (n * n) as f64
}

fn skewness_by_moment_tensor(m: &Matrix) -> f64 {
    let d = m.cols();
    let n = m.rows() as f64;
    // only the a <= b <= c entries; the rest follow by symmetry
    let mut t = vec![0.0; d * d * d];
    for r in m.row_iter() {
        for a in 0..d {
            for b in a..d {
                let ab = r[a] * r[b];
                for c in b..d {
                    t[(a * d + b) * d + c] += ab * r[c];
                }
            }
        }
    }
    let mut total = 0.0;
    for a in 0..d {
        for b in a..d {
            for c in b..d {
                let v = t[(a * d + b) * d + c] / n;
                let mult = match (a == b, b == c) {
                    (true, true) => 1.0,
                    (true, false) | (false, true) => 3.0,
                    (false, false) => 6.0,
                };
                total += mult * v * v;
            }
        }
    }
    total
}

/// `(1/n) Σ ‖x_j‖^4`, optionally minus its null expectation `D(D+2)`.
pub fn mardia_kurtosis(x: &LatentBatch, normalize: bool) -> f64 {
    let raw = x
        .matrix()
        .row_iter()
        .map(|r| dot(r, r).powi(2))
        .sum::<f64>()
        / x.n() as f64;
    if normalize {
        let d = x.dim() as f64;
        raw - d * (d + 2.0)
    } else {
        raw
    }
}

fn mean_and_cov(m: &Matrix) -> (DVector<f64>, DMatrix<f64>) {
    let d = m.cols();
    let n = m.rows() as f64;
    let mut mean = DVector::zeros(d);
    for r in m.row_iter() {
        mean += DVector::from_column_slice(r);
    }
    mean /= n;
    let mut cov = DMatrix::zeros(d, d);
    for r in m.row_iter() {
        let c = DVector::from_column_slice(r) - &mean;
        cov += &c * c.transpose();
    }
    cov /= n - 1.0;
    (mean, cov)
}

fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    &eig.eigenvectors * DMatrix::from_diagonal(&vals) * eig.eigenvectors.transpose()
}

/// Fréchet distance between Gaussians fitted to two point sets:
/// `‖μ_a − μ_b‖² + tr(Σ_a + Σ_b − 2 (Σ_a^{1/2} Σ_b Σ_a^{1/2})^{1/2})`.
pub fn gaussian_frechet_proxy(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.cols(),
            actual: b.cols(),
        });
    }
    if a.rows() < 2 || b.rows() < 2 {
        return Err(Error::invalid("rows", "need at least two points per set"));
    }
    let (ma, ca) = mean_and_cov(a);
    let (mb, cb) = mean_and_cov(b);
    let sa = psd_sqrt(&ca);
    let inner = &sa * &cb * &sa;
    let inner = (&inner + inner.transpose()) * 0.5;
    let cross: f64 = SymmetricEigen::new(inner)
        .eigenvalues
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum();
    let dm = ma - mb;
    let value = dm.dot(&dm) + ca.trace() + cb.trace() - 2.0 * cross;
    Ok(value.max(0.0))
}

/// Sliced SW distance to fresh normal draws, for monitoring only.
pub fn sw_monitor<R: Rng + ?Sized>(batch: &LatentBatch, k: usize, rng: &mut R) -> Result<f64> {
    let dirs = sample_directions(k, batch.dim(), rng)?;
    sliced_distance(batch, &dirs, DistanceKind::Sw, rng).map(|r| r.distance)
}
