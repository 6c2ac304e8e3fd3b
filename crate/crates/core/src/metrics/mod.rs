//! Region and contour accuracy, their aggregation, and ranking analysis.

mod correlation;
mod report;
pub mod study;

pub use correlation::{ranks, sparse_dense_correlation, spearman};
pub use report::{
    benchmark_report, evaluate_object, evaluate_objects, split_report, BenchmarkReport,
    FrameScore, ObjectEval, SplitReport, INIT_SIZES,
};

use crate::error::Result;
use crate::mask::{boundary, dilate, BinaryMask};

/// Intersection over union; two empty masks score 1.
pub fn jaccard(pred: &BinaryMask, gt: &BinaryMask) -> Result<f64> {
    pred.same_shape(gt)?;
    let (mut inter, mut union) = (0usize, 0usize);
    for (&p, &g) in pred.bits().iter().zip(gt.bits()) {
        inter += (p && g) as usize;
        union += (p || g) as usize;
    }
    Ok(if union == 0 { 1.0 } else { inter as f64 / union as f64 })
}

/// Boundary matching tolerance: `ceil(0.008 * diagonal)` pixels.
pub fn default_boundary_tolerance(width: u32, height: u32) -> f64 {
    (0.008 * (width as f64).hypot(height as f64)).ceil()
}

/// Contour F-measure.
///
/// Boundary pixels of each mask count as matched when they fall inside the
/// other boundary dilated by a disc of radius `tol`; this approximates a
/// bipartite contour matching. Scores 1 when both boundaries are empty and 0
/// when exactly one is.
pub fn boundary_f(pred: &BinaryMask, gt: &BinaryMask, tol: f64) -> Result<f64> {
    pred.same_shape(gt)?;
    let pb = boundary(pred);
    let gb = boundary(gt);
    let (np, ng) = (pb.area(), gb.area());
    match (np, ng) {
        (0, 0) => return Ok(1.0),
        (0, _) | (_, 0) => return Ok(0.0),
        _ => {}
    }
    let gd = dilate(&gb, tol);
    let pd = dilate(&pb, tol);
    let precision = pb.intersection(&gd)?.area() as f64 / np as f64;
    let recall = gb.intersection(&pd)?.area() as f64 / ng as f64;
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}
