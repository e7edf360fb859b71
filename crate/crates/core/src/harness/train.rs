//! Training runs with per-epoch evaluation on the test split.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::harness::config::{DirectionSchedule, RunConfig};
use crate::harness::data::Dataset;
use crate::harness::pgm::{hstack, image_grid, scatter};
use crate::matrix::Matrix;
use crate::metrics::{
    gaussian_frechet_proxy, mardia_kurtosis, mardia_skewness, sw_monitor, MetricsRow,
    METRICS_HEADER,
};
use crate::net::{mse, TrainState};
use crate::slicer::{composite_cost, sample_directions, sliced_distance_with, DirectionSet};

/// What a finished run leaves behind.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub rows: Vec<MetricsRow>,
    pub state: TrainState,
}

impl RunSummary {
    pub fn first(&self) -> &MetricsRow {
        &self.rows[0]
    }

    pub fn last(&self) -> &MetricsRow {
        self.rows.last().expect("epoch 0 row is always present")
    }
}

// Evaluation draws use a stream separate from the training generator.
fn eval_rng(seed: u64, epoch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_e7a1_0000_0000);
    rng.set_stream(epoch as u64);
    rng
}

fn normal_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let v = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    Matrix::from_vec(rows, cols, v).expect("shape matches")
}

/// All metrics for `state` on `test`.
pub fn evaluate(state: &TrainState, test: &Matrix, epoch: usize, cfg: &RunConfig) -> Result<MetricsRow> {
    let mut rng = eval_rng(cfg.seed, epoch);
    let latent = state.encode(test)?;
    let recon = state.decode(&latent)?;
    let err = mse(test, &recon)?;
    let objective = cfg.objective();
    let dirs = sample_directions(cfg.projections, latent.dim(), &mut rng)?;
    let sliced = sliced_distance_with(&latent, &dirs, objective.kind, &mut rng, objective.slice)?;
    let cost = composite_cost(err, sliced.distance, objective.mode)?;
    let sw = sw_monitor(&latent, cfg.monitor_projections, &mut rng)?;
    let prior = normal_matrix(test.rows(), latent.dim(), &mut rng);
    let generated = state.net.decode_matrix(&prior)?;
    let gfd = gaussian_frechet_proxy(test, &generated)?;
    let row = MetricsRow {
        epoch,
        mse: err,
        sliced_penalty: sliced.distance,
        cost: cost.total,
        mardia_skewness: mardia_skewness(&latent),
        mardia_kurtosis_normalized: mardia_kurtosis(&latent, true),
        sw_monitor: sw,
        gfd_proxy: gfd,
    };
    if !row.cost.is_finite() || !row.mse.is_finite() {
        return Err(Error::NonFiniteLoss { epoch });
    }
    Ok(row)
}

fn divergence(e: Error, epoch: usize) -> Error {
    match e {
        Error::NonFinite(_) | Error::NonFiniteGradient { .. } => Error::NonFiniteLoss { epoch },
        other => other,
    }
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Trains with the dataset named in `cfg`.
pub fn train(cfg: &RunConfig) -> Result<RunSummary> {
    let data = cfg.load_dataset()?;
    train_on(cfg, &data)
}

/// Trains on `data`, writing `metrics.csv`, checkpoints and image dumps into
/// `cfg.output`.
pub fn train_on(cfg: &RunConfig, data: &Dataset) -> Result<RunSummary> {
    let dir = cfg.output.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_file(&dir.join("config.txt"), cfg.to_text())?;

    let mut state = TrainState::new(cfg.mlp_spec(data.dim()), cfg.optimizer, cfg.seed)?;
    let objective = cfg.objective();

    let metrics_path = dir.join("metrics.csv");
    let mut metrics = File::create(&metrics_path).map_err(|e| Error::io(&metrics_path, e))?;
    writeln!(metrics, "{METRICS_HEADER}").map_err(|e| Error::io(&metrics_path, e))?;
    let mut log_row = |row: &MetricsRow| -> Result<()> {
        writeln!(metrics, "{}", row.to_csv())
            .and_then(|_| metrics.flush())
            .map_err(|e| Error::io(&metrics_path, e))
    };
    let mut rows = Vec::with_capacity(cfg.epochs + 1);
    let row = evaluate(&state, &data.test, 0, cfg)?;
    log_row(&row)?;
    rows.push(row);

    let latent_dim = cfg.latent;
    let fixed: Option<DirectionSet> = match cfg.directions {
        DirectionSchedule::Fixed => Some(sample_directions(cfg.projections, latent_dim, &mut state.rng)?),
        DirectionSchedule::PerBatch => None,
    };
    let n = data.train.rows();
    let mut order: Vec<usize> = (0..n).collect();
    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut state.rng);
        for chunk in order.chunks(cfg.batch_size) {
            let batch = data.train.select_rows(chunk);
            let dirs = match &fixed {
                Some(d) => d.clone(),
                None => sample_directions(cfg.projections, latent_dim, &mut state.rng)?,
            };
            let c = state
                .backward_step(&batch, &objective, &dirs)
                .map_err(|e| divergence(e, epoch))?;
            if !c.cost.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
        }
        let row = evaluate(&state, &data.test, epoch, cfg).map_err(|e| divergence(e, epoch))?;
        log_row(&row)?;
        rows.push(row);
        if cfg.checkpoint_every > 0 && epoch % cfg.checkpoint_every == 0 {
            state.save(dir.join(format!("checkpoint-{epoch:05}.json")))?;
        }
    }
    state.save(dir.join("checkpoint-final.json"))?;
    dump_images(&state, data, cfg)?;
    let last = rows.last().expect("at least one row");
    write_file(&dir.join("summary.txt"), summary_text(cfg, last))?;
    Ok(RunSummary { dir, rows, state })
}

fn summary_text(cfg: &RunConfig, last: &MetricsRow) -> String {
    format!(
        "distance = {}\nepochs = {}\nseed = {}\n{}\n{}\n",
        cfg.distance,
        cfg.epochs,
        cfg.seed,
        METRICS_HEADER,
        last.to_csv()
    )
}

/// Writes reconstruction and prior-sample images for the final model.
pub fn dump_images(state: &TrainState, data: &Dataset, cfg: &RunConfig) -> Result<()> {
    let mut rng = eval_rng(cfg.seed, usize::MAX);
    let dir = &cfg.output;
    let latent_dim = cfg.latent;
    match data.image_shape {
        Some(shape) => {
            let cols = data.test.rows().clamp(1, 8);
            let count = data.test.rows().min(32) / cols * cols;
            let idx: Vec<usize> = (0..count).collect();
            let originals = data.test.select_rows(&idx);
            let recon = state.decode(&state.encode(&originals)?)?;
            // odd rows originals, even rows reconstructions
            let mut interleaved = Vec::new();
            for start in (0..count).step_by(cols) {
                let end = (start + cols).min(count);
                for i in start..end {
                    interleaved.push(originals.row(i).to_vec());
                }
                for i in start..end {
                    interleaved.push(recon.row(i).to_vec());
                }
            }
            let grid = Matrix::from_rows(&interleaved)?;
            image_grid(&grid, shape, cols)?.save(dir.join("reconstructions.pgm"))?;

            let prior = normal_matrix(64, latent_dim, &mut rng);
            let samples = state.net.decode_matrix(&prior)?;
            image_grid(&samples, shape, 8)?.save(dir.join("samples.pgm"))?;

            if data.test.rows() >= 2 {
                let ends = state.encode(&data.test.select_rows(&[0, 1]))?;
                let steps = 10;
                let mut path = Matrix::zeros(steps, latent_dim);
                for s in 0..steps {
                    let t = s as f64 / (steps - 1) as f64;
                    for j in 0..latent_dim {
                        let a = ends.matrix().get(0, j);
                        let b = ends.matrix().get(1, j);
                        path.set(s, j, (1.0 - t) * a + t * b);
                    }
                }
                let frames = state.net.decode_matrix(&path)?;
                image_grid(&frames, shape, steps)?.save(dir.join("interpolation.pgm"))?;
            }
        }
        None => {
            let size = 256;
            let extent = data
                .test
                .as_slice()
                .iter()
                .fold(1.0f64, |m, v| m.max(v.abs()))
                * 1.1;
            let recon = state.decode(&state.encode(&data.test)?)?;
            hstack(&[scatter(&data.test, size, extent), scatter(&recon, size, extent)])
                .save(dir.join("reconstructions.pgm"))?;
            let prior = normal_matrix(data.test.rows(), latent_dim, &mut rng);
            let samples = state.net.decode_matrix(&prior)?;
            let latent = state.encode(&data.test)?;
            hstack(&[scatter(&samples, size, extent), scatter(latent.matrix(), size, 4.0)])
                .save(dir.join("samples.pgm"))?;
        }
    }
    Ok(())
}

/// Loads a checkpoint and evaluates it on the test split of `cfg`'s dataset.
pub fn evaluate_checkpoint(checkpoint: impl AsRef<Path>, cfg: &RunConfig) -> Result<MetricsRow> {
    let state = TrainState::load(checkpoint)?;
    let data = cfg.load_dataset()?;
    evaluate(&state, &data.test, cfg.epochs, cfg)
}
