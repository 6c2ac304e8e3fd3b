//! Verification candidates from propagated probability maps.

use serde::{Deserialize, Serialize};

use super::{sample_random_min_dist_with, subsample_frames_even, Pixel};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mask::{BinaryMask, ProbabilityMap};
use crate::rng::stream_rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionPartition {
    pub foreground: BinaryMask,
    pub background: BinaryMask,
    pub uncertain: BinaryMask,
}

/// Splits a map into `p >= hi`, `p <= lo` and everything in between.
pub fn partition_probability(p: &ProbabilityMap, lo: f64, hi: f64) -> Result<RegionPartition> {
    check_thresholds(lo, hi)?;
    Ok(RegionPartition {
        foreground: p.select(|v| v >= hi),
        background: p.select(|v| v <= lo),
        uncertain: p.select(|v| v > lo && v < hi),
    })
}

fn check_thresholds(lo: f64, hi: f64) -> Result<()> {
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::Config(format!(
            "thresholds must satisfy 0 <= lo < hi <= 1, got lo={lo} hi={hi}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    /// Minimum pairwise distance in pixels.
    pub d: f64,
    pub n_fg: usize,
    pub n_bg: usize,
    pub n_unc: usize,
    pub k_frames: usize,
    pub hi_threshold: f64,
    pub lo_threshold: f64,
    pub rng_seed: u64,
    /// Enforce `d` across all candidate types of a frame rather than within
    /// each type only.
    pub joint_min_distance: bool,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            d: 20.0,
            n_fg: 7,
            n_bg: 10,
            n_unc: 3,
            k_frames: 10,
            hi_threshold: 0.8,
            lo_threshold: 0.2,
            rng_seed: 0,
            joint_min_distance: true,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        check_thresholds(self.lo_threshold, self.hi_threshold)?;
        if !self.d.is_finite() || self.d < 0.0 {
            return Err(Error::Config(format!("d must be a finite value >= 0, got {}", self.d)));
        }
        if self.k_frames == 0 {
            return Err(Error::Config("k_frames must be at least 1".into()));
        }
        Ok(())
    }

    pub fn per_frame_budget(&self) -> usize {
        self.n_fg + self.n_bg + self.n_unc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposedLabel {
    Foreground,
    Background,
    Uncertain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Candidate {
    pub point: Pixel,
    pub proposed: ProposedLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameCandidates {
    pub frame: u32,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSet {
    pub object_id: u32,
    /// Ascending by frame.
    pub frames: Vec<FrameCandidates>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.frames.iter().map(|f| f.candidates.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, label: ProposedLabel) -> usize {
        self.frames
            .iter()
            .flat_map(|f| &f.candidates)
            .filter(|c| c.proposed == label)
            .count()
    }
}

fn frame_candidates(
    map: &ProbabilityMap,
    frame: u32,
    object_id: u32,
    cfg: &SamplerConfig,
) -> FrameCandidates {
    let parts = partition_probability(map, cfg.lo_threshold, cfg.hi_threshold)
        .expect("thresholds validated by caller");
    let mut rng = stream_rng(cfg.rng_seed, &[object_id as u64, frame as u64]);
    let mut candidates = Vec::with_capacity(cfg.per_frame_budget());
    let mut accepted: Vec<Pixel> = Vec::new();
    for (region, n, label) in [
        (&parts.foreground, cfg.n_fg, ProposedLabel::Foreground),
        (&parts.background, cfg.n_bg, ProposedLabel::Background),
        (&parts.uncertain, cfg.n_unc, ProposedLabel::Uncertain),
    ] {
        let against: &[Pixel] = if cfg.joint_min_distance { &accepted } else { &[] };
        let picked = sample_random_min_dist_with(region, n, cfg.d, against, &mut rng);
        accepted.extend_from_slice(&picked);
        candidates.extend(picked.into_iter().map(|point| Candidate { point, proposed: label }));
    }
    FrameCandidates { frame, candidates }
}

/// Candidates for one object on evenly sub-sampled frames.
///
/// `maps[t]` is the probability map of frame `t`. Each retained frame is
/// sampled with its own RNG stream derived from `(rng_seed, object, frame)`.
pub fn generate_candidates(
    object_id: u32,
    maps: &[ProbabilityMap],
    cfg: &SamplerConfig,
) -> Result<CandidateSet> {
    generate_candidates_with(object_id, maps, cfg, Execution::Sequential)
}

pub fn generate_candidates_with(
    object_id: u32,
    maps: &[ProbabilityMap],
    cfg: &SamplerConfig,
    exec: Execution,
) -> Result<CandidateSet> {
    cfg.validate()?;
    if maps.is_empty() {
        return Err(Error::Empty("probability maps"));
    }
    let frames = subsample_frames_even(maps.len(), cfg.k_frames);
    let frames = exec.map(&frames, |&t| frame_candidates(&maps[t], t as u32, object_id, cfg));
    Ok(CandidateSet { object_id, frames })
}
