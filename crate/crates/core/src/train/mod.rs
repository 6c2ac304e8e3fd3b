//! Reference numerics for point-supervised training.
//!
//! Continuous coordinates place pixel `(i, j)` at center `(i + 0.5, j + 0.5)`;
//! integer pixel coordinates are read at their centers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{BinaryMask, ProbabilityMap};
use crate::sampling::Point;

/// Default stabilizer inside the logarithms of [`pointwise_ce`].
pub const DEFAULT_EPS: f64 = 1e-7;
/// Default linearization threshold of [`huberised_ce`].
pub const DEFAULT_TAU: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Positive,
    Negative,
}

impl Target {
    #[inline]
    pub fn y(self) -> f64 {
        match self {
            Target::Positive => 1.0,
            Target::Negative => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledPoint {
    #[serde(flatten)]
    pub point: Point,
    pub label: Target,
}

impl LabeledPoint {
    pub fn new(x: f64, y: f64, label: Target) -> Self {
        LabeledPoint { point: Point::new(x, y), label }
    }
}

fn check_bounds(p: Point, width: u32, height: u32) -> Result<()> {
    if !p.in_bounds(width, height) {
        return Err(Error::OutOfBounds { x: p.x, y: p.y, width, height });
    }
    Ok(())
}

/// Mask with foreground exactly at the pixels of the positive points.
pub fn rasterize_points(points: &[LabeledPoint], width: u32, height: u32) -> Result<BinaryMask> {
    let mut mask = BinaryMask::new(width, height)?;
    for lp in points {
        check_bounds(lp.point, width, height)?;
        if lp.label == Target::Positive {
            let px = lp.point.pixel();
            mask.set(px.x, px.y, true);
        }
    }
    Ok(mask)
}

/// The four pixel taps of a bilinear lookup: `(row-major index, weight)`.
pub type Taps = [(usize, f64); 4];

/// Bilinear interpolation between the four surrounding pixel centers, with
/// border pixels replicated outward.
pub fn bilinear_taps(width: u32, height: u32, pt: Point) -> Result<Taps> {
    check_bounds(pt, width, height)?;
    let u = pt.x - 0.5;
    let v = pt.y - 0.5;
    let (x0, y0) = (u.floor(), v.floor());
    let (fx, fy) = (u - x0, v - y0);
    let clamp_x = |i: f64| i.clamp(0.0, (width - 1) as f64) as usize;
    let clamp_y = |i: f64| i.clamp(0.0, (height - 1) as f64) as usize;
    let (xa, xb) = (clamp_x(x0), clamp_x(x0 + 1.0));
    let (ya, yb) = (clamp_y(y0), clamp_y(y0 + 1.0));
    let w = width as usize;
    Ok([
        (ya * w + xa, (1.0 - fx) * (1.0 - fy)),
        (ya * w + xb, fx * (1.0 - fy)),
        (yb * w + xa, (1.0 - fx) * fy),
        (yb * w + xb, fx * fy),
    ])
}

pub fn bilinear_sample(p: &ProbabilityMap, pt: Point) -> Result<f64> {
    let taps = bilinear_taps(p.width(), p.height(), pt)?;
    let v = p.values();
    Ok(taps.iter().map(|&(i, w)| w * v[i]).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossResult {
    pub loss: f64,
    /// Sampled probability `q` per point.
    pub samples: Vec<f64>,
    /// `d loss / d q` per point.
    pub gradients: Vec<f64>,
}

/// Mean binary cross-entropy over already-sampled probabilities.
pub fn cross_entropy_mean(q: &[f64], y: &[f64], eps: f64) -> (f64, Vec<f64>) {
    let n = q.len() as f64;
    let mut loss = 0.0;
    let grads = q
        .iter()
        .zip(y)
        .map(|(&q, &y)| {
            // zero-weight terms are skipped so eps = 0 stays finite at q in {0, 1}
            let mut g = 0.0;
            if y != 0.0 {
                loss -= y * (q + eps).ln();
                g -= y / (q + eps);
            }
            if y != 1.0 {
                loss -= (1.0 - y) * (1.0 - q + eps).ln();
                g += (1.0 - y) / (1.0 - q + eps);
            }
            g / n
        })
        .collect();
    (loss / n, grads)
}

/// Cross-entropy evaluated only at the given points, on bilinearly sampled
/// probabilities, averaged over points.
pub fn pointwise_ce(p: &ProbabilityMap, pts: &[LabeledPoint], eps: f64) -> Result<LossResult> {
    if pts.is_empty() {
        return Err(Error::Empty("labeled points"));
    }
    let samples = pts
        .iter()
        .map(|lp| bilinear_sample(p, lp.point))
        .collect::<Result<Vec<_>>>()?;
    let y: Vec<f64> = pts.iter().map(|lp| lp.label.y()).collect();
    let (loss, gradients) = cross_entropy_mean(&samples, &y, eps);
    Ok(LossResult { loss, samples, gradients })
}

/// Chain rule through the bilinear taps: `d loss / d pixel`, row-major.
pub fn pixel_gradients(p: &ProbabilityMap, pts: &[LabeledPoint], result: &LossResult) -> Result<Vec<f64>> {
    let mut out = vec![0.0; p.values().len()];
    for (lp, g) in pts.iter().zip(&result.gradients) {
        for (i, w) in bilinear_taps(p.width(), p.height(), lp.point)? {
            out[i] += w * g;
        }
    }
    Ok(out)
}

/// Cross-entropy whose log branch is replaced by its tangent below `tau`.
///
/// With `p` the probability assigned to the true class, the loss is
/// `-ln p` for `p >= tau` and `-ln tau + (tau - p) / tau` below, so the
/// gradient magnitude never exceeds `1 / tau`. Returns `(loss, d loss / d q)`.
pub fn huberised_ce(q: f64, label: Target, tau: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Config(format!("tau must lie in (0, 1), got {tau}")));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::Malformed(format!("probability {q} outside [0, 1]")));
    }
    let (p, sign) = match label {
        Target::Positive => (q, 1.0),
        Target::Negative => (1.0 - q, -1.0),
    };
    let (loss, dp) = if p >= tau {
        (-p.ln(), -1.0 / p)
    } else {
        (-tau.ln() + (tau - p) / tau, -1.0 / tau)
    };
    Ok((loss, sign * dp))
}
