//! End-to-end harness: datasets, run configuration, training with
//! per-epoch metrics, image dumps and standalone distance reports.

pub mod config;
pub mod data;
pub mod distance;
pub mod pgm;
pub mod train;

pub use config::{DataSource, DirectionSchedule, RunConfig};
pub use data::{gen_synthetic, load_idx, Dataset, SyntheticKind};
pub use distance::{distance_cmd, DistanceReport};
pub use train::{evaluate, evaluate_checkpoint, train, train_on, RunSummary};
