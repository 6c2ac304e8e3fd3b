//! Keyframe choice and validation-set construction rules.

use serde::{Deserialize, Serialize};

use super::{ObjectAnnotation, PointLabel, ReferenceInit, TraceSegment};
use crate::error::{Error, Result};
use crate::sampling::{subsample_frames_even, Point};

/// A reference frame needs at least this many positive points.
pub const MIN_REFERENCE_POSITIVES: usize = 7;
/// Some later frame needs at least this many positives...
pub const MIN_CONTINUATION_POSITIVES: usize = 3;
/// ...and at least this many negatives.
pub const MIN_CONTINUATION_NEGATIVES: usize = 1;

const EVAL_FRAMES: usize = 3;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceArea {
    #[default]
    BoundingBox,
    ConvexHull,
}

pub fn trace_area(trace: &[Point], mode: TraceArea) -> f64 {
    match mode {
        TraceArea::BoundingBox => bbox_area(trace),
        TraceArea::ConvexHull => hull_area(trace),
    }
}

fn bbox_area(trace: &[Point]) -> f64 {
    if trace.is_empty() {
        return 0.0;
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in trace {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    (x1 - x0) * (y1 - y0)
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

// Andrew's monotone chain, then shoelace.
fn hull_area(trace: &[Point]) -> f64 {
    let mut pts: Vec<Point> = trace.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return 0.0;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() * 2);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    twice.abs() / 2.0
}

/// The segment with the largest trace area; earliest frame wins ties.
pub fn select_keyframe(segments: &[TraceSegment], mode: TraceArea) -> Result<&TraceSegment> {
    let mut best: Option<(&TraceSegment, f64)> = None;
    for seg in segments {
        let area = trace_area(&seg.trace, mode);
        best = match best {
            Some((b, ba)) if ba > area || (ba == area && b.frame <= seg.frame) => Some((b, ba)),
            _ => Some((seg, area)),
        };
    }
    best.map(|(s, _)| s).ok_or(Error::Empty("trace segments"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rejection {
    /// No annotated frame has enough positive points.
    NoReferenceFrame,
    /// No frame after the reference has enough positives and negatives.
    NoContinuationFrame,
    /// The trace key-frame is on or before the reference frame.
    TraceNotAfterReference,
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rejection::NoReferenceFrame => "no frame with enough positive points",
            Rejection::NoContinuationFrame => "no usable frame after the reference",
            Rejection::TraceNotAfterReference => "trace frame is not after the reference",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceFrame {
    pub frame: u32,
    /// Annotated frames from the reference onward.
    pub retained_frames: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReferenceOutcome {
    Selected(ReferenceFrame),
    Rejected(Rejection),
}

/// Picks the earliest annotated frame with enough positives and checks that
/// a later frame can still be evaluated.
pub fn select_reference_frame(obj: &ObjectAnnotation) -> ReferenceOutcome {
    let Some(pos) = obj
        .annotated_frames
        .iter()
        .position(|&f| obj.count_on_frame(f, PointLabel::Positive) >= MIN_REFERENCE_POSITIVES)
    else {
        return ReferenceOutcome::Rejected(Rejection::NoReferenceFrame);
    };
    let later_ok = obj.annotated_frames[pos + 1..].iter().any(|&f| {
        obj.count_on_frame(f, PointLabel::Positive) >= MIN_CONTINUATION_POSITIVES
            && obj.count_on_frame(f, PointLabel::Negative) >= MIN_CONTINUATION_NEGATIVES
    });
    if !later_ok {
        return ReferenceOutcome::Rejected(Rejection::NoContinuationFrame);
    }
    ReferenceOutcome::Selected(ReferenceFrame {
        frame: obj.annotated_frames[pos],
        retained_frames: obj.annotated_frames[pos..].to_vec(),
    })
}

/// Drops frames before the reference and records its positives as the
/// initialization.
pub fn apply_reference(obj: &ObjectAnnotation, reference: &ReferenceFrame) -> ObjectAnnotation {
    let mut out = obj.clone();
    out.annotated_frames = reference.retained_frames.clone();
    out.points.retain(|p| p.frame >= reference.frame);
    out.reference_init = Some(ReferenceInit {
        frame: reference.frame,
        points: obj
            .points
            .iter()
            .filter(|p| p.frame == reference.frame && p.label == PointLabel::Positive)
            .map(|p| p.point)
            .collect(),
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalFrames {
    /// Ascending frame indices, always including the trace frame.
    Selected(Vec<u32>),
    Rejected(Rejection),
}

/// Chooses up to three ground-truth frames after the reference, always
/// including the trace key-frame.
///
/// Three post-reference annotated frames are sampled evenly. If the trace
/// frame is not among them, the sampled frame closest to it (earlier on
/// ties) is swapped for the trace frame.
pub fn select_eval_frames(obj: &ObjectAnnotation, trace_frame: u32, reference: u32) -> EvalFrames {
    if trace_frame <= reference {
        return EvalFrames::Rejected(Rejection::TraceNotAfterReference);
    }
    let after: Vec<u32> = obj
        .annotated_frames
        .iter()
        .copied()
        .filter(|&f| f > reference)
        .collect();
    let mut sampled: Vec<u32> = if after.is_empty() {
        Vec::new()
    } else {
        subsample_frames_even(after.len(), EVAL_FRAMES)
            .into_iter()
            .map(|i| after[i])
            .collect()
    };
    if !sampled.contains(&trace_frame) {
        if sampled.len() == EVAL_FRAMES {
            let closest = sampled
                .iter()
                .enumerate()
                .min_by_key(|(_, &f)| f.abs_diff(trace_frame))
                .map(|(i, _)| i)
                .unwrap();
            sampled.remove(closest);
        }
        sampled.push(trace_frame);
        sampled.sort_unstable();
    }
    EvalFrames::Selected(sampled)
}
