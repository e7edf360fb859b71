//! Writes a tiny IDX image/label pair, loads it as a dataset and renders
//! the images as a PGM grid.
//!
//!     cargo run --example load_idx -- [images.idx] [labels.idx]

use std::path::{Path, PathBuf};

use sliced_ae::harness::load_idx;
use sliced_ae::harness::pgm::image_grid;

fn idx_header(magic: u32, dims: &[u32]) -> Vec<u8> {
    let mut out = magic.to_be_bytes().to_vec();
    for d in dims {
        out.extend_from_slice(&d.to_be_bytes());
    }
    out
}

/// Ten 6x6 images: image `i` has a vertical bar in column `i % 6`.
pub fn write_fixture(dir: &Path) -> std::io::Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let (count, side) = (10u32, 6u32);
    let mut images = idx_header(0x0803, &[count, side, side]);
    for i in 0..count {
        for _row in 0..side {
            for col in 0..side {
                images.push(if col == i % side { 255 } else { 0 });
            }
        }
    }
    let mut labels = idx_header(0x0801, &[count]);
    labels.extend((0..count).map(|i| (i % side) as u8));
    let (pi, pl) = (dir.join("images.idx"), dir.join("labels.idx"));
    std::fs::write(&pi, images)?;
    std::fs::write(&pl, labels)?;
    Ok((pi, pl))
}

pub fn run_example_with(images: &Path, labels: Option<&Path>, out: &Path) -> sliced_ae::Result<()> {
    let data = load_idx(images, labels)?;
    let shape = data.image_shape.expect("IDX data keeps its image shape");
    println!(
        "train {} x {}, test {} x {}, image shape {:?}",
        data.train.rows(),
        data.train.cols(),
        data.test.rows(),
        data.test.cols(),
        shape
    );
    let grid = image_grid(&data.train, shape, 4)?;
    grid.save(out)?;
    println!("wrote {}x{} grid to {}", grid.width, grid.height, out.display());
    Ok(())
}

pub fn run_example() -> sliced_ae::Result<()> {
    let dir = std::env::temp_dir().join("sliced-ae-idx-example");
    let (images, labels) = write_fixture(&dir).map_err(|e| sliced_ae::Error::io(&dir, e))?;
    run_example_with(&images, Some(&labels), &dir.join("grid.pgm"))
}

#[allow(dead_code)]
fn main() -> sliced_ae::Result<()> {
    let mut args = std::env::args().skip(1);
    match args.next() {
        Some(images) => {
            let labels = args.next().map(PathBuf::from);
            run_example_with(Path::new(&images), labels.as_deref(), Path::new("idx-grid.pgm"))
        }
        None => run_example(),
    }
}
