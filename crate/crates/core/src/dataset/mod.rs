//! Annotation schema (`pv-schema/1`) and the rules that operate on it.
//!
//! A dataset file is a single JSON document:
//!
//! ```json
//! { "schema": "pv-schema/1", "videos": [ { "video_id": "...", ... } ] }
//! ```
//!
//! Points serialize as integer pixel coordinates. Ground-truth masks for
//! evaluation frames are inlined as column-major run-length counts.

mod io;
mod rules;
mod stats;
mod vng;

pub use io::{from_json_str, load_dataset, save_dataset, to_json_string, validate};
pub use rules::{
    apply_reference, select_eval_frames, select_keyframe, select_reference_frame, trace_area,
    EvalFrames, ReferenceFrame, ReferenceOutcome, Rejection, TraceArea, MIN_CONTINUATION_NEGATIVES,
    MIN_CONTINUATION_POSITIVES, MIN_REFERENCE_POSITIVES,
};
pub use stats::{dataset_stats, DatasetStats};
pub use vng::{export_vng, MaskSource, VngExport, VngRecord};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::mask::Rle;
use crate::sampling::{Pixel, Point};

pub const SCHEMA_VERSION: &str = "pv-schema/1";

pub type ObjectId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointLabel {
    Positive,
    Negative,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSource {
    Simulated,
    Verified,
    RejectedCandidate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointAnnotation {
    pub frame: u32,
    pub object_id: ObjectId,
    pub point: Pixel,
    pub label: PointLabel,
    pub source: PointSource,
}

/// Character span `[start, end)` of a noun inside the video caption.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NounSpan {
    pub start: usize,
    pub end: usize,
}

impl NounSpan {
    pub fn text<'a>(&self, caption: &'a str) -> Option<&'a str> {
        let mut idx = caption.char_indices().map(|(i, _)| i).chain([caption.len()]);
        let start = idx.clone().nth(self.start)?;
        let end = idx.nth(self.end)?;
        (start < end).then(|| &caption[start..end])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassSplit {
    Seen,
    Unseen,
}

/// Frame and positive points initializing inference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceInit {
    pub frame: u32,
    pub points: Vec<Pixel>,
}

/// A mouse-trace segment localizing one object on one key-frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSegment {
    pub object_id: ObjectId,
    pub frame: u32,
    pub trace: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameMask {
    pub frame: u32,
    pub mask: Rle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectAnnotation {
    pub object_id: ObjectId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noun: Option<NounSpan>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_split: Option<ClassSplit>,
    /// Sparse annotated frame set, strictly ascending.
    pub annotated_frames: Vec<u32>,
    pub points: Vec<PointAnnotation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_init: Option<ReferenceInit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<TraceSegment>,
    /// Dense ground truth on evaluation frames, ascending by frame.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gt_masks: Vec<FrameMask>,
}

impl ObjectAnnotation {
    pub fn new(object_id: ObjectId) -> Self {
        ObjectAnnotation {
            object_id,
            noun: None,
            class_split: None,
            annotated_frames: Vec::new(),
            points: Vec::new(),
            reference_init: None,
            traces: Vec::new(),
            gt_masks: Vec::new(),
        }
    }

    /// Number of points with `label` on `frame`.
    pub fn count_on_frame(&self, frame: u32, label: PointLabel) -> usize {
        self.points
            .iter()
            .filter(|p| p.frame == frame && p.label == label)
            .count()
    }

    pub fn count(&self, label: PointLabel) -> usize {
        self.points.iter().filter(|p| p.label == label).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Resolution {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VideoRecord {
    pub video_id: String,
    pub frame_count: u32,
    pub resolution: Resolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
    pub objects: Vec<ObjectAnnotation>,
}

impl VideoRecord {
    pub fn object(&self, id: ObjectId) -> Option<&ObjectAnnotation> {
        self.objects.iter().find(|o| o.object_id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dataset {
    pub schema: String,
    /// Free-form provenance (generator, seeds, thresholds).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub videos: Vec<VideoRecord>,
}

impl Dataset {
    pub fn new(videos: Vec<VideoRecord>) -> Self {
        Dataset {
            schema: SCHEMA_VERSION.to_string(),
            metadata: BTreeMap::new(),
            videos,
        }
    }
}
