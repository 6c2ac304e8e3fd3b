//! Synthetic check that sparse-frame evaluation preserves method rankings.
//!
//! Each synthetic "method" is a mask degrader with a fixed quality level.
//! Its predictions drift, erode or dilate, and occasionally fail outright,
//! with severity growing over the clip the way propagation errors
//! accumulate. Methods are scored on every frame and on an evenly
//! sub-sampled handful of frames, and the two rankings are compared.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{evaluate_object, sparse_dense_correlation};
use crate::error::Result;
use crate::exec::Execution;
use crate::mask::{dilate, BinaryMask};
use crate::rng::{stream_rng, SampleRng};
use crate::sampling::subsample_frames_even;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StudyConfig {
    pub methods: usize,
    pub videos: usize,
    pub frames: usize,
    pub width: u32,
    pub height: u32,
    pub sparse_frames: usize,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            methods: 18,
            videos: 30,
            frames: 40,
            width: 80,
            height: 60,
            sparse_frames: 3,
            seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    /// Mean J&F per method over all frames.
    pub dense: Vec<f64>,
    /// Mean J&F per method over the sparse frame subset.
    pub sparse: Vec<f64>,
    pub spearman: f64,
}

struct Clip {
    masks: Vec<BinaryMask>,
}

fn ellipse(w: u32, h: u32, cx: f64, cy: f64, rx: f64, ry: f64) -> BinaryMask {
    BinaryMask::from_fn(w, h, |x, y| {
        let dx = (x as f64 + 0.5 - cx) / rx;
        let dy = (y as f64 + 0.5 - cy) / ry;
        dx * dx + dy * dy <= 1.0
    })
    .unwrap()
}

fn synth_clip(cfg: &StudyConfig, video: usize) -> Clip {
    let mut rng = stream_rng(cfg.seed, &[0, video as u64]);
    let (w, h) = (cfg.width as f64, cfg.height as f64);
    let rx0 = rng.random_range(0.12..0.25) * w;
    let ry0 = rng.random_range(0.15..0.3) * h;
    let (x0, y0) = (rng.random_range(0.3..0.7) * w, rng.random_range(0.3..0.7) * h);
    let (vx, vy) = (rng.random_range(-0.3..0.3), rng.random_range(-0.2..0.2));
    let pulse = rng.random_range(0.0..0.3);
    let masks = (0..cfg.frames)
        .map(|t| {
            let t = t as f64;
            let scale = 1.0 + pulse * (t / 6.0).sin();
            ellipse(
                cfg.width,
                cfg.height,
                (x0 + vx * t).clamp(rx0, w - rx0),
                (y0 + vy * t).clamp(ry0, h - ry0),
                rx0 * scale,
                ry0 * scale,
            )
        })
        .collect();
    Clip { masks }
}

fn shift(m: &BinaryMask, dx: i64, dy: i64) -> BinaryMask {
    BinaryMask::from_fn(m.width(), m.height(), |x, y| m.get_signed(x as i64 - dx, y as i64 - dy)).unwrap()
}

fn erode(m: &BinaryMask, r: f64) -> BinaryMask {
    dilate(&m.complement(), r).complement()
}

/// `severity` in `[0, 1]`; 0 reproduces the ground truth.
fn degrade(gt: &BinaryMask, severity: f64, progress: f64, drift: (f64, f64), rng: &mut SampleRng) -> BinaryMask {
    let growth = 0.3 + progress;
    if rng.random_bool((0.25 * severity * growth).min(1.0)) {
        // lost track: an unrelated blob elsewhere
        let (w, h) = (gt.width() as f64, gt.height() as f64);
        return ellipse(
            gt.width(),
            gt.height(),
            rng.random_range(0.0..w),
            rng.random_range(0.0..h),
            0.1 * w,
            0.1 * h,
        );
    }
    let jitter = 2.0 * severity;
    let dx = (drift.0 * severity * growth + rng.random_range(-jitter..=jitter)).round() as i64;
    let dy = (drift.1 * severity * growth + rng.random_range(-jitter..=jitter)).round() as i64;
    let moved = shift(gt, dx, dy);
    let r = severity * growth * rng.random_range(-4.0..4.0);
    if r >= 0.5 {
        dilate(&moved, r)
    } else if r <= -0.5 {
        erode(&moved, -r)
    } else {
        moved
    }
}

fn method_severity(cfg: &StudyConfig, method: usize) -> f64 {
    if cfg.methods <= 1 {
        return 0.5;
    }
    0.05 + 0.9 * method as f64 / (cfg.methods - 1) as f64
}

/// Scores every method densely and sparsely and correlates the rankings.
pub fn run_sparse_dense_study(cfg: &StudyConfig, exec: Execution) -> Result<StudyResult> {
    let clips: Vec<Clip> = exec.map_range(cfg.videos, |v| synth_clip(cfg, v));
    let sparse_idx = subsample_frames_even(cfg.frames, cfg.sparse_frames);
    let jobs: Vec<(usize, usize)> = (0..cfg.methods)
        .flat_map(|m| (0..cfg.videos).map(move |v| (m, v)))
        .collect();

    let scores: Vec<Result<(f64, f64)>> = exec.map(&jobs, |&(m, v)| {
        let mut rng = stream_rng(cfg.seed, &[1, m as u64, v as u64]);
        let severity = method_severity(cfg, m);
        let drift = (rng.random_range(-6.0..6.0), rng.random_range(-6.0..6.0));
        let clip = &clips[v];
        let n = clip.masks.len();
        let preds: BTreeMap<u32, BinaryMask> = clip
            .masks
            .iter()
            .enumerate()
            .map(|(t, gt)| (t as u32, degrade(gt, severity, t as f64 / n as f64, drift, &mut rng)))
            .collect();
        let gts: BTreeMap<u32, BinaryMask> = clip
            .masks
            .iter()
            .enumerate()
            .map(|(t, m)| (t as u32, m.clone()))
            .collect();
        let dense = evaluate_object(&preds, &gts, None)?.jf;
        let pick = |src: &BTreeMap<u32, BinaryMask>| -> BTreeMap<u32, BinaryMask> {
            sparse_idx.iter().map(|&t| (t as u32, src[&(t as u32)].clone())).collect()
        };
        let sparse = evaluate_object(&pick(&preds), &pick(&gts), None)?.jf;
        Ok((dense, sparse))
    });

    let mut dense = vec![0.0; cfg.methods];
    let mut sparse = vec![0.0; cfg.methods];
    for (&(m, _), s) in jobs.iter().zip(scores) {
        let (d, sp) = s?;
        dense[m] += 100.0 * d / cfg.videos as f64;
        sparse[m] += 100.0 * sp / cfg.videos as f64;
    }
    let spearman = sparse_dense_correlation(&dense, &sparse)?;
    Ok(StudyResult { dense, sparse, spearman })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_severity_is_perfect() {
        let gt = ellipse(40, 30, 20.0, 15.0, 8.0, 6.0);
        let mut rng = stream_rng(1, &[]);
        assert_eq!(degrade(&gt, 0.0, 0.5, (5.0, 5.0), &mut rng), gt);
    }

    #[test]
    fn small_study_is_deterministic_across_modes() {
        let cfg = StudyConfig { methods: 4, videos: 3, frames: 8, ..Default::default() };
        let a = run_sparse_dense_study(&cfg, Execution::Sequential).unwrap();
        let b = run_sparse_dense_study(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.dense[0] > a.dense[3]);
    }
}
