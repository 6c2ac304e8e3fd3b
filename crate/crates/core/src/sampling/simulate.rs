//! Point annotations simulated from dense ground truth.

use serde::{Deserialize, Serialize};

use super::{
    sample_fps, sample_random_min_dist_with, subsample_frames_even, subsample_frames_random, Pixel,
};
use crate::dataset::{ObjectAnnotation, ObjectId, PointAnnotation, PointLabel, PointSource};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mask::BinaryMask;
use crate::rng::{derive_seed, stream_rng};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Random,
    Fps,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameSampling {
    #[default]
    Even,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub n_positive: usize,
    pub n_negative: usize,
    pub d: f64,
    pub k_frames: usize,
    pub strategy: Strategy,
    pub frame_sampling: FrameSampling,
    pub seed: u64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n_positive: 10,
            n_negative: 10,
            d: 20.0,
            k_frames: 10,
            strategy: Strategy::Random,
            frame_sampling: FrameSampling::Even,
            seed: 0,
        }
    }
}

/// Dense ground truth of one object, one mask per video frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectMasks {
    pub object_id: ObjectId,
    pub masks: Vec<BinaryMask>,
}

fn pick(
    region: &BinaryMask,
    n: usize,
    cfg: &SimulationConfig,
    stream: &[u64],
) -> Vec<Pixel> {
    match cfg.strategy {
        Strategy::Random => {
            let mut rng = stream_rng(cfg.seed, stream);
            sample_random_min_dist_with(region, n, cfg.d, &[], &mut rng)
        }
        Strategy::Fps if region.is_empty() || n == 0 => Vec::new(),
        Strategy::Fps => sample_fps(region, n).expect("region is non-empty"),
    }
}

fn points(frame: u32, object_id: ObjectId, label: PointLabel, px: Vec<Pixel>) -> impl Iterator<Item = PointAnnotation> {
    px.into_iter().map(move |point| PointAnnotation {
        frame,
        object_id,
        point,
        label,
        source: PointSource::Simulated,
    })
}

pub fn simulate_point_annotations(gt: &[ObjectMasks], cfg: &SimulationConfig) -> Result<Vec<ObjectAnnotation>> {
    simulate_point_annotations_with(gt, cfg, Execution::Sequential)
}

/// Samples positives inside each object's mask and negatives outside the
/// union of all objects, on `k_frames` sub-sampled frames shared by every
/// object of the video. Every `(object, frame, label)` group draws from its
/// own RNG stream.
pub fn simulate_point_annotations_with(
    gt: &[ObjectMasks],
    cfg: &SimulationConfig,
    exec: Execution,
) -> Result<Vec<ObjectAnnotation>> {
    let first = gt.first().ok_or(Error::Empty("ground-truth objects"))?;
    let t_total = first.masks.len();
    if t_total == 0 {
        return Err(Error::Empty("ground-truth frames"));
    }
    let shape = &first.masks[0];
    for obj in gt {
        if obj.masks.len() != t_total {
            return Err(Error::LengthMismatch(t_total, obj.masks.len()));
        }
        for m in &obj.masks {
            shape.same_shape(m)?;
        }
    }
    if cfg.k_frames == 0 {
        return Err(Error::Config("k_frames must be at least 1".into()));
    }

    let frames = match cfg.frame_sampling {
        FrameSampling::Even => subsample_frames_even(t_total, cfg.k_frames),
        FrameSampling::Random => {
            subsample_frames_random(t_total, cfg.k_frames, derive_seed(cfg.seed, &[u64::MAX]))
        }
    };
    let background: Vec<BinaryMask> = exec.map(&frames, |&t| {
        gt.iter()
            .fold(shape.complement(), |acc, o| acc.difference(&o.masks[t]).unwrap())
    });

    Ok(exec.map(gt, |obj| {
        let id = obj.object_id;
        let mut ann = ObjectAnnotation::new(id);
        ann.annotated_frames = frames.iter().map(|&t| t as u32).collect();
        for (&t, bg) in frames.iter().zip(&background) {
            let f = t as u32;
            let pos = pick(&obj.masks[t], cfg.n_positive, cfg, &[id as u64, t as u64, 0]);
            let neg = pick(bg, cfg.n_negative, cfg, &[id as u64, t as u64, 1]);
            ann.points.extend(points(f, id, PointLabel::Positive, pos));
            ann.points.extend(points(f, id, PointLabel::Negative, neg));
        }
        ann
    }))
}
