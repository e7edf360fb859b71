//! Standalone distance report for point files.

use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::harness::data::read_csv_points;
use crate::metrics::{mardia_kurtosis, mardia_skewness};
use crate::slicer::{sample_directions, sliced_distance, sliced_sw_pairwise, DistanceKind, LatentBatch};

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub kind: DistanceKind,
    pub projections: usize,
    pub seed: u64,
    pub n: usize,
    pub dim: usize,
    /// `true` when the distance is SW between two files rather than to `N(0, I)`.
    pub pairwise: bool,
    pub distance: f64,
    pub mardia_skewness: f64,
    pub mardia_kurtosis: f64,
    pub mardia_kurtosis_normalized: f64,
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let target = if self.pairwise { "file_b" } else { "N(0,I)" };
        let kind = if self.pairwise { DistanceKind::Sw } else { self.kind };
        writeln!(f, "points: {} x {}", self.n, self.dim)?;
        writeln!(f, "projections: {} (seed {})", self.projections, self.seed)?;
        writeln!(f, "sliced {} distance to {}: {}", kind, target, self.distance)?;
        writeln!(f, "mardia skewness: {}", self.mardia_skewness)?;
        writeln!(f, "mardia kurtosis: {}", self.mardia_kurtosis)?;
        write!(f, "mardia kurtosis (normalized): {}", self.mardia_kurtosis_normalized)
    }
}

/// Sliced distance of the points in `file_a` to `N(0, I)`, or sliced SW to
/// the points in `file_b` when given, plus Mardia statistics of `file_a`.
pub fn distance_cmd(
    file_a: impl AsRef<Path>,
    file_b: Option<&Path>,
    kind: DistanceKind,
    k: usize,
    seed: u64,
) -> Result<DistanceReport> {
    let a = LatentBatch::new(read_csv_points(file_a)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = sample_directions(k, a.dim(), &mut rng)?;
    let distance = match file_b {
        Some(pb) => {
            let b = LatentBatch::new(read_csv_points(pb)?)?;
            sliced_sw_pairwise(&a, &b, &dirs)?
        }
        None => sliced_distance(&a, &dirs, kind, &mut rng)?.distance,
    };
    Ok(DistanceReport {
        kind,
        projections: k,
        seed,
        n: a.n(),
        dim: a.dim(),
        pairwise: file_b.is_some(),
        distance,
        mardia_skewness: mardia_skewness(&a),
        mardia_kurtosis: mardia_kurtosis(&a, false),
        mardia_kurtosis_normalized: mardia_kurtosis(&a, true),
    })
}
