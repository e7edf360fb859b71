//! Sliced one-dimensional distances between an encoded sample and the
//! standard normal prior, the autoencoder cost built from them, and the
//! normality diagnostics used to compare them.
//!
//! The five per-projection kernels live in [`kernels`]; [`slicer`] averages
//! them over random directions and combines the result with a reconstruction
//! loss. [`oracles`] holds slow numerical references for every closed form.
//! [`harness`] drives complete training runs.

pub mod error;
pub mod harness;
pub mod kernels;
pub mod matrix;
pub mod metrics;
pub mod net;
pub mod normal_math;
pub mod oracles;
pub mod slicer;

pub use error::{Error, Result};
pub use kernels::{KernelResult, KsVariant, SortedSample};
pub use matrix::Matrix;
pub use metrics::MetricsRow;
pub use net::{MlpSpec, Objective, Optimizer, TrainState};
pub use slicer::{CostMode, DirectionSet, DistanceKind, LatentBatch};
