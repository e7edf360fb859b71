//! Datasets: seeded synthetic generators, IDX image files and plain CSV.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Fraction of points held out when a source has no explicit test split.
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

/// Train and test points in `R^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub train: Matrix,
    pub test: Matrix,
    /// `(height, width)` when the points are flattened grayscale images.
    pub image_shape: Option<(usize, usize)>,
}

impl Dataset {
    /// The first `1 - test_fraction` of the rows train, the rest test.
    pub fn split(points: Matrix, test_fraction: f64, image_shape: Option<(usize, usize)>) -> Result<Self> {
        if !(0.0..1.0).contains(&test_fraction) {
            return Err(Error::invalid("test_fraction", format!("must be in [0, 1), got {test_fraction}")));
        }
        let n = points.rows();
        let n_test = ((n as f64 * test_fraction).round() as usize).clamp(1, n.saturating_sub(1));
        if n < 2 {
            return Err(Error::invalid("points", "need at least two points to split"));
        }
        let n_train = n - n_test;
        let train: Vec<usize> = (0..n_train).collect();
        let test: Vec<usize> = (n_train..n).collect();
        Ok(Self {
            train: points.select_rows(&train),
            test: points.select_rows(&test),
            image_shape,
        })
    }

    pub fn dim(&self) -> usize {
        self.train.cols()
    }
}

/// Synthetic point clouds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SyntheticKind {
    /// `components` isotropic Gaussians with standard deviation `std`,
    /// centred on a circle of radius `radius` in the first two coordinates
    /// (a single component sits at the origin). Remaining coordinates are
    /// pure noise.
    GaussianMixture { components: usize, radius: f64, std: f64 },
    /// Uniform angle, radius uniform in `[radius - width/2, radius + width/2]`.
    Ring { radius: f64, width: f64 },
    /// Uniform over the dark cells of a `cells x cells` board on `[-2, 2]^2`.
    Checker { cells: usize },
}

impl SyntheticKind {
    pub fn gaussian_mixture() -> Self {
        SyntheticKind::GaussianMixture {
            components: 4,
            radius: 2.0,
            std: 0.5,
        }
    }

    pub fn ring() -> Self {
        SyntheticKind::Ring {
            radius: 2.0,
            width: 0.4,
        }
    }

    pub fn checker() -> Self {
        SyntheticKind::Checker { cells: 4 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SyntheticKind::GaussianMixture { .. } => "gaussian_mixture",
            SyntheticKind::Ring { .. } => "ring",
            SyntheticKind::Checker { .. } => "checker",
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian_mixture" | "gaussian-mixture" => Ok(Self::gaussian_mixture()),
            "ring" => Ok(Self::ring()),
            "checker" => Ok(Self::checker()),
            other => Err(Error::UnknownDatasetKind(other.to_string())),
        }
    }
}

/// `n` points of `kind` in `R^dim`; `dim >= 2`. Deterministic in `seed`.
pub fn synthetic_points(kind: SyntheticKind, n: usize, dim: usize, seed: u64) -> Result<Matrix> {
    if n < 10 {
        return Err(Error::invalid("n", format!("need at least 10 points, got {n}")));
    }
    if dim < 2 {
        return Err(Error::invalid("dim", "synthetic data needs at least two coordinates"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n, dim);
    for i in 0..n {
        let row = m.row_mut(i);
        match kind {
            SyntheticKind::GaussianMixture {
                components,
                radius,
                std,
            } => {
                let c = rng.random_range(0..components.max(1));
                let (cx, cy) = if components <= 1 {
                    (0.0, 0.0)
                } else {
                    let a = 2.0 * PI * c as f64 / components as f64;
                    (radius * a.cos(), radius * a.sin())
                };
                for v in row.iter_mut() {
                    *v = std * rng.sample::<f64, _>(StandardNormal);
                }
                row[0] += cx;
                row[1] += cy;
            }
            SyntheticKind::Ring { radius, width } => {
                let a = rng.random_range(0.0..2.0 * PI);
                let r = radius + width * (rng.random::<f64>() - 0.5);
                row[0] = r * a.cos();
                row[1] = r * a.sin();
            }
            SyntheticKind::Checker { cells } => {
                let cells = cells.max(1);
                let size = 4.0 / cells as f64;
                let (cx, cy) = loop {
                    let cx = rng.random_range(0..cells);
                    let cy = rng.random_range(0..cells);
                    if (cx + cy) % 2 == 0 {
                        break (cx, cy);
                    }
                };
                row[0] = -2.0 + size * (cx as f64 + rng.random::<f64>());
                row[1] = -2.0 + size * (cy as f64 + rng.random::<f64>());
            }
        }
    }
    Ok(m)
}

/// Two-dimensional synthetic dataset with the default parameters for
/// `kind` ("gaussian_mixture", "ring" or "checker").
pub fn gen_synthetic(kind: &str, n: usize, seed: u64) -> Result<Dataset> {
    let kind: SyntheticKind = kind.parse()?;
    Dataset::split(synthetic_points(kind, n, 2, seed)?, DEFAULT_TEST_FRACTION, None)
}

const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// Grayscale images from an IDX file, pixels scaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdxImages {
    pub points: Matrix,
    pub height: usize,
    pub width: usize,
}

fn be_u32(bytes: &[u8], at: usize) -> Result<u32> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(Error::IdxTruncated {
            needed: at + 4,
            available: bytes.len(),
        })
}

pub fn parse_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    let magic = be_u32(bytes, 0)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(Error::IdxMagic {
            found: magic,
            expected: IDX_IMAGES_MAGIC,
        });
    }
    let count = be_u32(bytes, 4)? as usize;
    let height = be_u32(bytes, 8)? as usize;
    let width = be_u32(bytes, 12)? as usize;
    if height == 0 || width == 0 {
        return Err(Error::IdxDimension(format!("image size {height}x{width}")));
    }
    let pixels = count * height * width;
    let needed = 16 + pixels;
    if bytes.len() < needed {
        return Err(Error::IdxTruncated {
            needed,
            available: bytes.len(),
        });
    }
    let data = bytes[16..needed].iter().map(|&b| b as f64 / 255.0).collect();
    Ok(IdxImages {
        points: Matrix::from_vec(count, height * width, data)?,
        height,
        width,
    })
}

pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = be_u32(bytes, 0)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(Error::IdxMagic {
            found: magic,
            expected: IDX_LABELS_MAGIC,
        });
    }
    let count = be_u32(bytes, 4)? as usize;
    let needed = 8 + count;
    if bytes.len() < needed {
        return Err(Error::IdxTruncated {
            needed,
            available: bytes.len(),
        });
    }
    Ok(bytes[8..needed].to_vec())
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

/// Loads an IDX image file (and, if given, its label file, which must have
/// one label per image). The last fifth of the images becomes the test split.
pub fn load_idx(images: impl AsRef<Path>, labels: Option<&Path>) -> Result<Dataset> {
    let imgs = parse_idx_images(&read(images.as_ref())?)?;
    if let Some(lp) = labels {
        let labels = parse_idx_labels(&read(lp)?)?;
        if labels.len() != imgs.points.rows() {
            return Err(Error::IdxDimension(format!(
                "{} labels for {} images",
                labels.len(),
                imgs.points.rows()
            )));
        }
    }
    Dataset::split(imgs.points, DEFAULT_TEST_FRACTION, Some((imgs.height, imgs.width)))
}

/// Points from CSV text: one point per line, comma-separated decimals.
/// Blank lines are skipped; all rows must have the same length.
pub fn parse_csv_points(text: &str) -> Result<Matrix> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Csv {
                    line: i + 1,
                    reason: format!("bad number `{}`", f.trim()),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Csv {
                    line: i + 1,
                    reason: format!("expected {} fields, got {}", first.len(), row.len()),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Empty);
    }
    Matrix::from_rows(&rows)
}

pub fn read_csv_points(path: impl AsRef<Path>) -> Result<Matrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_points(&text)
}

pub fn write_csv_points(path: impl AsRef<Path>, m: &Matrix) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in m.row_iter() {
        let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}
