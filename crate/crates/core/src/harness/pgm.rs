//! Binary PGM (P5) output for image grids and 2-D scatter plots.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, fill: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![fill; width * height],
        }
    }

    /// P5 encoding with maxval 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_pgm()).map_err(|e| Error::io(path, e))
    }
}

fn to_byte(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Tiles images (rows of `images`, each `h x w`, values in `[0, 1]`)
/// row-major into a grid with `cols` columns and 1-pixel white separators.
pub fn image_grid(images: &Matrix, (h, w): (usize, usize), cols: usize) -> Result<GrayImage> {
    if images.cols() != h * w {
        return Err(Error::DimensionMismatch {
            expected: h * w,
            actual: images.cols(),
        });
    }
    let cols = cols.max(1);
    let rows = images.rows().div_ceil(cols).max(1);
    let width = cols * w + cols - 1;
    let height = rows * h + rows - 1;
    let mut img = GrayImage::new(width, height, 255);
    for (k, px) in images.row_iter().enumerate() {
        let (gr, gc) = (k / cols, k % cols);
        let (oy, ox) = (gr * (h + 1), gc * (w + 1));
        for y in 0..h {
            for x in 0..w {
                img.pixels[(oy + y) * width + ox + x] = to_byte(px[y * w + x]);
            }
        }
    }
    Ok(img)
}

/// Scatter plot of the first two coordinates on a `size x size` canvas
/// covering `[-extent, extent]^2`. Points are black on white.
pub fn scatter(points: &Matrix, size: usize, extent: f64) -> GrayImage {
    let mut img = GrayImage::new(size, size, 255);
    if points.cols() < 2 || size == 0 {
        return img;
    }
    let scale = (size - 1) as f64 / (2.0 * extent);
    for r in points.row_iter() {
        let x = ((r[0] + extent) * scale).round();
        let y = ((extent - r[1]) * scale).round();
        if x >= 0.0 && y >= 0.0 && (x as usize) < size && (y as usize) < size {
            img.pixels[y as usize * size + x as usize] = 0;
        }
    }
    img
}

/// Places images side by side with a 1-pixel white separator.
pub fn hstack(images: &[GrayImage]) -> GrayImage {
    let height = images.iter().map(|i| i.height).max().unwrap_or(0);
    let width = images.iter().map(|i| i.width).sum::<usize>() + images.len().saturating_sub(1);
    let mut out = GrayImage::new(width, height, 255);
    let mut ox = 0;
    for im in images {
        for y in 0..im.height {
            let src = &im.pixels[y * im.width..(y + 1) * im.width];
            out.pixels[y * width + ox..y * width + ox + im.width].copy_from_slice(src);
        }
        ox += im.width + 1;
    }
    out
}
