//! Grounding export: caption noun span plus per-frame masks per object.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{FrameMask, NounSpan, ObjectId, VideoRecord};

/// Per-object mask sequences keyed by `(video_id, object_id)`.
pub type MaskSource = HashMap<(String, ObjectId), Vec<FrameMask>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VngRecord {
    pub video_id: String,
    pub object_id: ObjectId,
    pub caption: String,
    pub noun: NounSpan,
    pub noun_text: String,
    pub masks: Vec<FrameMask>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VngExport {
    pub records: Vec<VngRecord>,
    pub skipped_without_noun: usize,
    pub skipped_without_masks: usize,
}

pub fn export_vng(videos: &[VideoRecord], masks: &MaskSource) -> VngExport {
    let mut out = VngExport::default();
    for video in videos {
        for obj in &video.objects {
            let noun = match (obj.noun, video.caption.as_deref()) {
                (Some(span), Some(caption)) => span.text(caption).map(|t| (span, caption, t)),
                _ => None,
            };
            let Some((span, caption, text)) = noun else {
                out.skipped_without_noun += 1;
                continue;
            };
            let frames = masks
                .get(&(video.video_id.clone(), obj.object_id))
                .filter(|m| !m.is_empty());
            let Some(frames) = frames else {
                out.skipped_without_masks += 1;
                continue;
            };
            let mut frames = frames.clone();
            frames.sort_by_key(|m| m.frame);
            out.records.push(VngRecord {
                video_id: video.video_id.clone(),
                object_id: obj.object_id,
                caption: caption.to_string(),
                noun: span,
                noun_text: text.to_string(),
                masks: frames,
            });
        }
    }
    let skipped = out.skipped_without_noun + out.skipped_without_masks;
    if skipped > 0 {
        log::warn!(
            "grounding export skipped {skipped} objects ({} without noun span, {} without masks)",
            out.skipped_without_noun,
            out.skipped_without_masks
        );
    }
    out
}
