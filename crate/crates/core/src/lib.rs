//! Toolkit for sparse point-supervised video object segmentation.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`mask`]: pixel grids, run-length codec, exact Euclidean distance
//!   transform, boundary extraction and dilation, plus the PNG / `PVPM`
//!   file readers.
//! - [`sampling`]: min-distance random sampling, distance-transform seeded
//!   farthest point sampling, probability-map partitioning, verification
//!   candidate generation and temporal sub-sampling.
//! - [`dataset`]: the annotation schema (`pv-schema/1`), validation-set
//!   construction rules, statistics and the grounding export.
//! - [`metrics`]: J, F, J&F, the multi-initialization benchmark report,
//!   seen/unseen aggregation and sparse-vs-dense rank correlation.
//! - [`train`]: point rasterization, bilinear sampling and point-wise
//!   losses with analytic gradients.
//!
//! Batch entry points take an [`Execution`] so callers can pick between the
//! rayon-backed path and the sequential one. Without the `parallel` feature
//! both variants run sequentially.

pub mod dataset;
pub mod error;
pub mod exec;
pub mod mask;
pub mod metrics;
pub mod rng;
pub mod sampling;
pub mod train;

pub use error::{Error, Result};
pub use exec::Execution;
pub use mask::{BinaryMask, DistanceField, ProbabilityMap, Rle};
pub use sampling::{Pixel, Point};
