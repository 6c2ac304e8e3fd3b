//! Point and frame sampling.
//!
//! Sampled points are pixel indices ([`Pixel`]). Continuous coordinates
//! ([`Point`]) place pixel `(i, j)` at center `(i + 0.5, j + 0.5)`.

mod candidates;
mod frames;
mod points;
mod simulate;

pub use candidates::{
    generate_candidates, generate_candidates_with, partition_probability, Candidate,
    CandidateSet, FrameCandidates, ProposedLabel, RegionPartition, SamplerConfig,
};
pub use frames::{subsample_frames_even, subsample_frames_random};
pub use points::{
    mask_center, sample_fps, sample_fps_from, sample_random_min_dist, sample_random_min_dist_with,
};
pub use simulate::{
    simulate_point_annotations, simulate_point_annotations_with, FrameSampling, ObjectMasks,
    SimulationConfig, Strategy,
};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pixel {
    pub x: u32,
    pub y: u32,
}

impl Pixel {
    pub const fn new(x: u32, y: u32) -> Self {
        Pixel { x, y }
    }

    pub fn center(self) -> Point {
        Point::new(self.x as f64 + 0.5, self.y as f64 + 0.5)
    }

    pub fn dist2(self, other: Pixel) -> u64 {
        let dx = self.x.abs_diff(other.x) as u64;
        let dy = self.y.abs_diff(other.y) as u64;
        dx * dx + dy * dy
    }
}

/// Sub-pixel image coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Pixel containing this point.
    pub fn pixel(self) -> Pixel {
        Pixel::new(self.x.floor().max(0.0) as u32, self.y.floor().max(0.0) as u32)
    }

    pub fn in_bounds(self, width: u32, height: u32) -> bool {
        self.x >= 0.0 && self.y >= 0.0 && self.x < width as f64 && self.y < height as f64
    }
}

impl From<Pixel> for Point {
    fn from(p: Pixel) -> Self {
        p.center()
    }
}
