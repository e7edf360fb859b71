//! Sliced aggregation of the one-dimensional kernels and the composite cost.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{
    cvm_closed, cw_closed, ks_closed, sort_with_permutation, sw_pairwise, w2_closed, KernelResult,
    KsVariant, SortedSample,
};
use crate::matrix::{dot, Matrix};

/// Default number of projections.
pub const DEFAULT_PROJECTIONS: usize = 50;
/// Default floor applied before taking the logarithm of the penalty.
pub const DEFAULT_LOG_FLOOR: f64 = 1e-12;

/// The per-projection distance used by the sliced penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceKind {
    /// Sorted-sample W2 against fresh normal draws.
    Sw,
    /// Closed-form W2 to the normal quantile function.
    Scfw,
    /// Cramér-Wold (smoothed L2 density distance).
    Scw,
    /// Cramér-von Mises.
    Scvm,
    /// Kolmogorov-Smirnov.
    Sks,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 5] = [
        DistanceKind::Sw,
        DistanceKind::Scfw,
        DistanceKind::Scw,
        DistanceKind::Scvm,
        DistanceKind::Sks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::Sw => "sw",
            DistanceKind::Scfw => "scfw",
            DistanceKind::Scw => "scw",
            DistanceKind::Scvm => "scvm",
            DistanceKind::Sks => "sks",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistanceKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownDistance(s.to_string()))
    }
}

/// `k` unit vectors in `R^D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl DirectionSet {
    pub fn new(vectors: Vec<Vec<f64>>) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).ok_or(Error::Empty)?;
        if dim == 0 {
            return Err(Error::invalid("dim", "directions must have positive dimension"));
        }
        for (index, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            let norm = dot(v, v).sqrt();
            if norm.is_nan() || (norm - 1.0).abs() > 1e-9 {
                return Err(Error::NotUnit { index, norm });
            }
        }
        Ok(Self { dim, vectors })
    }

    /// `k` directions drawn uniformly on the sphere by normalizing Gaussian draws.
    pub fn sample<R: Rng + ?Sized>(k: usize, dim: usize, rng: &mut R) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "need at least one projection"));
        }
        if dim == 0 {
            return Err(Error::invalid("dim", "need positive dimension"));
        }
        let mut vectors = Vec::with_capacity(k);
        while vectors.len() < k {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
            let norm = dot(&v, &v).sqrt();
            if norm.is_nan() || norm <= 1e-300 {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            vectors.push(v);
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }
}

/// See [`DirectionSet::sample`].
pub fn sample_directions<R: Rng + ?Sized>(k: usize, dim: usize, rng: &mut R) -> Result<DirectionSet> {
    DirectionSet::sample(k, dim, rng)
}

/// Encoder outputs, one row per point.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentBatch(Matrix);

impl LatentBatch {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows() == 0 || m.cols() == 0 {
            return Err(Error::Empty);
        }
        if let Some(&bad) = m.as_slice().iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(bad));
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn dim(&self) -> usize {
        self.0.cols()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Projections `x_j . v` for every row.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        self.0.row_iter().map(|r| dot(r, v)).collect()
    }
}

/// How the penalty enters the training cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CostMode {
    /// `mse + lambda * d`
    LambdaWeighted { lambda: f64 },
    /// `mse + log(max(d, floor))`
    LogComposite { floor: f64 },
}

impl CostMode {
    pub fn lambda_weighted(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(CostMode::LambdaWeighted { lambda })
    }

    pub fn log_composite(floor: f64) -> Result<Self> {
        if !floor.is_finite() || floor <= 0.0 {
            return Err(Error::invalid("floor", format!("must be positive, got {floor}")));
        }
        Ok(CostMode::LogComposite { floor })
    }

    /// Plain reconstruction loss (penalty weight zero), for ablations.
    pub fn reconstruction_only() -> Self {
        CostMode::LambdaWeighted { lambda: 0.0 }
    }
}

impl Default for CostMode {
    fn default() -> Self {
        CostMode::LogComposite {
            floor: DEFAULT_LOG_FLOOR,
        }
    }
}

/// Knobs that do not change the definition of the distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SliceOptions {
    pub ks_variant: KsVariant,
    /// Reuse one normal comparison sample for every projection (SW only).
    pub share_sw_sample: bool,
}

/// Output of [`sliced_distance`].
#[derive(Debug, Clone, PartialEq)]
pub struct SlicedDistance {
    pub distance: f64,
    /// d distance / d batch, same shape as the batch.
    pub gradient: Matrix,
    pub per_projection: Vec<f64>,
}

/// Mean of the selected kernel over the projections of `batch` onto `dirs`.
pub fn sliced_distance<R: Rng + ?Sized>(
    batch: &LatentBatch,
    dirs: &DirectionSet,
    kind: DistanceKind,
    rng: &mut R,
) -> Result<SlicedDistance> {
    sliced_distance_with(batch, dirs, kind, rng, SliceOptions::default())
}

pub fn sliced_distance_with<R: Rng + ?Sized>(
    batch: &LatentBatch,
    dirs: &DirectionSet,
    kind: DistanceKind,
    rng: &mut R,
    opts: SliceOptions,
) -> Result<SlicedDistance> {
    if dirs.dim() != batch.dim() {
        return Err(Error::DimensionMismatch {
            expected: batch.dim(),
            actual: dirs.dim(),
        });
    }
    let n = batch.n();
    // Each projection draws from its own substream of one base seed.
    let sw_seed = (kind == DistanceKind::Sw).then(|| rng.random::<u64>());

    let per: Vec<(KernelResult, Vec<usize>)> = dirs
        .vectors()
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let (sorted, perm) = sort_with_permutation(&batch.project(v))?;
            let res = match kind {
                DistanceKind::Sw => {
                    let stream = if opts.share_sw_sample { 0 } else { i as u64 };
                    let z = normal_sample(n, sw_seed.unwrap_or_default(), stream);
                    sw_pairwise(&sorted, &z)?
                }
                DistanceKind::Scfw => w2_closed(&sorted),
                DistanceKind::Scw => cw_closed(&sorted),
                DistanceKind::Scvm => cvm_closed(&sorted),
                DistanceKind::Sks => ks_closed(&sorted, opts.ks_variant),
            };
            Ok((res, perm))
        })
        .collect::<Result<_>>()?;

    let k = dirs.len() as f64;
    let mut gradient = Matrix::zeros(n, batch.dim());
    let mut per_projection = Vec::with_capacity(per.len());
    let mut total = 0.0;
    for ((res, perm), v) in per.iter().zip(dirs.vectors()) {
        total += res.distance;
        per_projection.push(res.distance);
        for (g, &orig) in res.gradient.iter().zip(perm) {
            let row = gradient.row_mut(orig);
            for (r, vd) in row.iter_mut().zip(v) {
                *r += g * vd / k;
            }
        }
    }
    Ok(SlicedDistance {
        distance: total / k,
        gradient,
        per_projection,
    })
}

/// Sliced SW distance between two equally sized point sets (no gradient).
pub fn sliced_sw_pairwise(a: &LatentBatch, b: &LatentBatch, dirs: &DirectionSet) -> Result<f64> {
    if a.dim() != b.dim() || dirs.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: if a.dim() != b.dim() { b.dim() } else { dirs.dim() },
        });
    }
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            actual: b.n(),
        });
    }
    let mut total = 0.0;
    for v in dirs.vectors() {
        let ya = SortedSample::from_unsorted(&a.project(v))?;
        let yb = SortedSample::from_unsorted(&b.project(v))?;
        total += sw_pairwise(&ya, &yb)?.distance;
    }
    Ok(total / dirs.len() as f64)
}

/// Sorted sample of `n` standard normal draws from substream `stream` of `seed`.
fn normal_sample(n: usize, seed: u64, stream: u64) -> SortedSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    z.sort_by(f64::total_cmp);
    SortedSample::new(z).expect("normal draws are finite")
}

/// Composite training cost and the derivative of the penalty term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeCost {
    pub total: f64,
    /// `lambda * d` or `log(max(d, floor))`.
    pub penalty_term: f64,
    /// d penalty_term / d sliced
    pub penalty_slope: f64,
}

pub fn composite_cost(mse: f64, sliced: f64, mode: CostMode) -> Result<CompositeCost> {
    if mse.is_nan() || mse < 0.0 {
        return Err(Error::invalid("mse", format!("must be nonnegative, got {mse}")));
    }
    if sliced.is_nan() || sliced < 0.0 {
        return Err(Error::invalid("sliced", format!("must be nonnegative, got {sliced}")));
    }
    let (penalty_term, penalty_slope) = match mode {
        CostMode::LambdaWeighted { lambda } => (lambda * sliced, lambda),
        CostMode::LogComposite { floor } => {
            let d = sliced.max(floor);
            let slope = if sliced >= floor { d.recip() } else { 0.0 };
            (d.ln(), slope)
        }
    };
    Ok(CompositeCost {
        total: mse + penalty_term,
        penalty_term,
        penalty_slope,
    })
}
