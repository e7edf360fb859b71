//! Run configuration as flat `key = value` text.
//!
//! Text after `#` and blank lines are ignored. Unknown keys are an error.
//! Later assignments override earlier ones, and command-line overrides are
//! applied after the file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::data::{
    load_idx, read_csv_points, synthetic_points, Dataset, SyntheticKind, DEFAULT_TEST_FRACTION,
};
use crate::kernels::KsVariant;
use crate::net::{MlpSpec, Objective, Optimizer};
use crate::slicer::{CostMode, DistanceKind, SliceOptions, DEFAULT_LOG_FLOOR, DEFAULT_PROJECTIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionSchedule {
    /// Fresh directions for every minibatch.
    PerBatch,
    /// One set drawn at the start of training.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Synthetic {
        kind: SyntheticKind,
        n: usize,
        dim: usize,
    },
    Csv {
        path: PathBuf,
        test_path: Option<PathBuf>,
    },
    Idx {
        images: PathBuf,
        labels: Option<PathBuf>,
    },
}

/// Everything a training run depends on. A run is a pure function of this.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub distance: DistanceKind,
    pub cost: CostMode,
    pub projections: usize,
    pub directions: DirectionSchedule,
    pub share_sw_sample: bool,
    pub ks_variant: KsVariant,
    pub hidden: Vec<usize>,
    pub latent: usize,
    pub optimizer: Optimizer,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub data_seed: Option<u64>,
    pub data: DataSource,
    pub test_fraction: f64,
    pub output: PathBuf,
    pub checkpoint_every: usize,
    pub monitor_projections: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            distance: DistanceKind::Scfw,
            cost: CostMode::default(),
            projections: DEFAULT_PROJECTIONS,
            directions: DirectionSchedule::PerBatch,
            share_sw_sample: false,
            ks_variant: KsVariant::Upper,
            hidden: vec![64, 64],
            latent: 20,
            optimizer: Optimizer::default(),
            batch_size: 100,
            epochs: 50,
            seed: 0,
            data_seed: None,
            data: DataSource::Synthetic {
                kind: SyntheticKind::gaussian_mixture(),
                n: 2000,
                dim: 2,
            },
            test_fraction: DEFAULT_TEST_FRACTION,
            output: PathBuf::from("runs/default"),
            checkpoint_every: 0,
            monitor_projections: DEFAULT_PROJECTIONS,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

fn positive<T: PartialOrd + Default + std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    let v: T = parse(key, value)?;
    if v > T::default() {
        Ok(v)
    } else {
        Err(format!("`{key}` must be positive, got `{value}`"))
    }
}

fn parse_bool(key: &str, value: &str) -> std::result::Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("invalid boolean `{value}` for `{key}`")),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
                line: i + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(k.trim(), v.trim()).map_err(|e| match e {
                Error::Config { reason, .. } => Error::Config { line: i + 1, reason },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Applies a single `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment.split_once('=').ok_or_else(|| Error::Config {
            line: 0,
            reason: format!("expected `key=value`, got `{assignment}`"),
        })?;
        self.set(k.trim(), v.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_inner(key, value)
            .map_err(|reason| Error::Config { line: 0, reason })?
            .then_some(())
            .ok_or_else(|| Error::UnknownConfigKey(key.to_string()))
    }

    // Ok(false) for an unknown key.
    fn set_inner(&mut self, key: &str, value: &str) -> std::result::Result<bool, String> {
        match key {
            "distance" => self.distance = value.parse().map_err(|e: Error| e.to_string())?,
            "cost" => {
                self.cost = match value {
                    "log" => CostMode::LogComposite {
                        floor: self.log_floor().unwrap_or(DEFAULT_LOG_FLOOR),
                    },
                    "lambda" => CostMode::LambdaWeighted {
                        lambda: self.lambda().unwrap_or(1.0),
                    },
                    _ => return Err(format!("`cost` must be `log` or `lambda`, got `{value}`")),
                }
            }
            "lambda" => {
                let lambda = positive(key, value)?;
                self.cost = CostMode::LambdaWeighted { lambda };
            }
            "log_floor" => {
                let floor = positive(key, value)?;
                self.cost = CostMode::LogComposite { floor };
            }
            "projections" => self.projections = positive(key, value)?,
            "directions" => {
                self.directions = match value {
                    "per-batch" | "per_batch" => DirectionSchedule::PerBatch,
                    "fixed" => DirectionSchedule::Fixed,
                    _ => return Err(format!("`directions` must be `per-batch` or `fixed`, got `{value}`")),
                }
            }
            "share_sw_sample" => self.share_sw_sample = parse_bool(key, value)?,
            "ks_variant" => {
                self.ks_variant = match value {
                    "upper" => KsVariant::Upper,
                    "two-sided" | "two_sided" => KsVariant::TwoSided,
                    _ => return Err(format!("`ks_variant` must be `upper` or `two-sided`, got `{value}`")),
                }
            }
            "hidden" => {
                self.hidden = if value.is_empty() {
                    Vec::new()
                } else {
                    value
                        .split(',')
                        .map(|w| positive::<usize>(key, w.trim()))
                        .collect::<std::result::Result<_, _>>()?
                }
            }
            "latent" => self.latent = positive(key, value)?,
            "optimizer" => {
                let lr = self.lr();
                self.optimizer = match value {
                    "adam" => Optimizer::adam(lr),
                    "sgd" => Optimizer::Sgd { lr },
                    _ => return Err(format!("`optimizer` must be `adam` or `sgd`, got `{value}`")),
                }
            }
            "lr" => {
                let v = positive(key, value)?;
                match &mut self.optimizer {
                    Optimizer::Adam { lr, .. } | Optimizer::Sgd { lr } => *lr = v,
                }
            }
            "beta1" | "beta2" | "eps" => {
                let v: f64 = positive(key, value)?;
                if key != "eps" && v >= 1.0 {
                    return Err(format!("`{key}` must be below 1"));
                }
                match &mut self.optimizer {
                    Optimizer::Adam { beta1, beta2, eps, .. } => match key {
                        "beta1" => *beta1 = v,
                        "beta2" => *beta2 = v,
                        _ => *eps = v,
                    },
                    Optimizer::Sgd { .. } => return Err(format!("`{key}` only applies to adam")),
                }
            }
            "batch_size" => self.batch_size = positive(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "data_seed" => self.data_seed = Some(parse(key, value)?),
            "data" => {
                self.data = match value {
                    "csv" => DataSource::Csv {
                        path: PathBuf::new(),
                        test_path: None,
                    },
                    "idx" => DataSource::Idx {
                        images: PathBuf::new(),
                        labels: None,
                    },
                    other => {
                        let kind: SyntheticKind = other.parse().map_err(|e: Error| e.to_string())?;
                        let (n, dim) = match &self.data {
                            DataSource::Synthetic { n, dim, .. } => (*n, *dim),
                            _ => (2000, 2),
                        };
                        DataSource::Synthetic { kind, n, dim }
                    }
                }
            }
            "data_n" | "data_dim" => {
                let v: usize = positive(key, value)?;
                match &mut self.data {
                    DataSource::Synthetic { n, dim, .. } => {
                        if key == "data_n" {
                            *n = v
                        } else {
                            *dim = v
                        }
                    }
                    _ => return Err(format!("`{key}` only applies to synthetic data")),
                }
            }
            "mixture_components" | "mixture_radius" | "mixture_std" => match &mut self.data {
                DataSource::Synthetic {
                    kind: SyntheticKind::GaussianMixture { components, radius, std },
                    ..
                } => match key {
                    "mixture_components" => *components = positive(key, value)?,
                    "mixture_radius" => *radius = parse(key, value)?,
                    _ => *std = positive(key, value)?,
                },
                _ => return Err(format!("`{key}` only applies to gaussian_mixture data")),
            },
            "data_path" | "test_path" | "labels_path" => {
                let p = PathBuf::from(value);
                match (&mut self.data, key) {
                    (DataSource::Csv { path, .. }, "data_path") => *path = p,
                    (DataSource::Csv { test_path, .. }, "test_path") => *test_path = Some(p),
                    (DataSource::Idx { images, .. }, "data_path") => *images = p,
                    (DataSource::Idx { labels, .. }, "labels_path") => *labels = Some(p),
                    _ => return Err(format!("`{key}` does not apply to the selected data source")),
                }
            }
            "test_fraction" => {
                let v: f64 = positive(key, value)?;
                if v >= 1.0 {
                    return Err("`test_fraction` must be below 1".into());
                }
                self.test_fraction = v;
            }
            "output" => self.output = PathBuf::from(value),
            "checkpoint_every" => self.checkpoint_every = parse(key, value)?,
            "monitor_projections" => self.monitor_projections = positive(key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn lr(&self) -> f64 {
        match self.optimizer {
            Optimizer::Adam { lr, .. } | Optimizer::Sgd { lr } => lr,
        }
    }

    fn lambda(&self) -> Option<f64> {
        match self.cost {
            CostMode::LambdaWeighted { lambda } => Some(lambda),
            _ => None,
        }
    }

    fn log_floor(&self) -> Option<f64> {
        match self.cost {
            CostMode::LogComposite { floor } => Some(floor),
            _ => None,
        }
    }

    /// Canonical text form; `parse(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("distance", self.distance.to_string());
        match self.cost {
            CostMode::LambdaWeighted { lambda } => kv("lambda", lambda.to_string()),
            CostMode::LogComposite { floor } => kv("log_floor", floor.to_string()),
        }
        kv("projections", self.projections.to_string());
        kv(
            "directions",
            match self.directions {
                DirectionSchedule::PerBatch => "per-batch",
                DirectionSchedule::Fixed => "fixed",
            }
            .into(),
        );
        kv("share_sw_sample", self.share_sw_sample.to_string());
        kv(
            "ks_variant",
            match self.ks_variant {
                KsVariant::Upper => "upper",
                KsVariant::TwoSided => "two-sided",
            }
            .into(),
        );
        let hidden: Vec<String> = self.hidden.iter().map(|w| w.to_string()).collect();
        kv("hidden", hidden.join(","));
        kv("latent", self.latent.to_string());
        match self.optimizer {
            Optimizer::Adam { lr, beta1, beta2, eps } => {
                kv("optimizer", "adam".into());
                kv("lr", lr.to_string());
                kv("beta1", beta1.to_string());
                kv("beta2", beta2.to_string());
                kv("eps", eps.to_string());
            }
            Optimizer::Sgd { lr } => {
                kv("optimizer", "sgd".into());
                kv("lr", lr.to_string());
            }
        }
        kv("batch_size", self.batch_size.to_string());
        kv("epochs", self.epochs.to_string());
        kv("seed", self.seed.to_string());
        if let Some(ds) = self.data_seed {
            kv("data_seed", ds.to_string());
        }
        match &self.data {
            DataSource::Synthetic { kind, n, dim } => {
                kv("data", kind.name().into());
                kv("data_n", n.to_string());
                kv("data_dim", dim.to_string());
                if let SyntheticKind::GaussianMixture { components, radius, std } = kind {
                    kv("mixture_components", components.to_string());
                    kv("mixture_radius", radius.to_string());
                    kv("mixture_std", std.to_string());
                }
            }
            DataSource::Csv { path, test_path } => {
                kv("data", "csv".into());
                kv("data_path", path.display().to_string());
                if let Some(t) = test_path {
                    kv("test_path", t.display().to_string());
                }
            }
            DataSource::Idx { images, labels } => {
                kv("data", "idx".into());
                kv("data_path", images.display().to_string());
                if let Some(l) = labels {
                    kv("labels_path", l.display().to_string());
                }
            }
        }
        kv("test_fraction", self.test_fraction.to_string());
        kv("output", self.output.display().to_string());
        kv("checkpoint_every", self.checkpoint_every.to_string());
        kv("monitor_projections", self.monitor_projections.to_string());
        s
    }

    pub fn mlp_spec(&self, input: usize) -> MlpSpec {
        MlpSpec::symmetric(input, &self.hidden, self.latent)
    }

    pub fn objective(&self) -> Objective {
        Objective {
            kind: self.distance,
            mode: self.cost,
            slice: SliceOptions {
                ks_variant: self.ks_variant,
                share_sw_sample: self.share_sw_sample,
            },
        }
    }

    pub fn load_dataset(&self) -> Result<Dataset> {
        match &self.data {
            DataSource::Synthetic { kind, n, dim } => {
                let seed = self.data_seed.unwrap_or(self.seed);
                Dataset::split(synthetic_points(*kind, *n, *dim, seed)?, self.test_fraction, None)
            }
            DataSource::Csv { path, test_path } => {
                let points = read_csv_points(path)?;
                match test_path {
                    Some(t) => {
                        let test = read_csv_points(t)?;
                        if test.cols() != points.cols() {
                            return Err(Error::DimensionMismatch {
                                expected: points.cols(),
                                actual: test.cols(),
                            });
                        }
                        Ok(Dataset {
                            train: points,
                            test,
                            image_shape: None,
                        })
                    }
                    None => Dataset::split(points, self.test_fraction, None),
                }
            }
            DataSource::Idx { images, labels } => load_idx(images, labels.as_deref()),
        }
    }
}
