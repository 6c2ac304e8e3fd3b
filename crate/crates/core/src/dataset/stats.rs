use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{PointLabel, VideoRecord};
use crate::exec::Execution;

/// Counts over a dataset split.
///
/// `annotations` sums, over objects, the number of frames each object is
/// annotated in. Histograms map a count to how many items have it:
/// `frames_with_positive` is per video (frames carrying at least one
/// positive point of any object), the point histograms are per annotated
/// object-frame.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub videos: u64,
    pub objects: u64,
    pub annotations: u64,
    pub positive_points: u64,
    pub negative_points: u64,
    pub ambiguous_points: u64,
    pub frames_with_positive: BTreeMap<u32, u64>,
    pub positives_per_frame: BTreeMap<u32, u64>,
    pub negatives_per_frame: BTreeMap<u32, u64>,
}

fn merge_hist(into: &mut BTreeMap<u32, u64>, from: BTreeMap<u32, u64>) {
    for (k, v) in from {
        *into.entry(k).or_default() += v;
    }
}

impl DatasetStats {
    fn of_video(video: &VideoRecord) -> Self {
        let mut s = DatasetStats {
            videos: 1,
            objects: video.objects.len() as u64,
            ..Default::default()
        };
        let mut positive_frames = BTreeSet::new();
        for obj in &video.objects {
            s.annotations += obj.annotated_frames.len() as u64;
            for p in &obj.points {
                match p.label {
                    PointLabel::Positive => {
                        s.positive_points += 1;
                        positive_frames.insert(p.frame);
                    }
                    PointLabel::Negative => s.negative_points += 1,
                    PointLabel::Ambiguous => s.ambiguous_points += 1,
                }
            }
            for &f in &obj.annotated_frames {
                let pos = obj.count_on_frame(f, PointLabel::Positive) as u32;
                let neg = obj.count_on_frame(f, PointLabel::Negative) as u32;
                *s.positives_per_frame.entry(pos).or_default() += 1;
                *s.negatives_per_frame.entry(neg).or_default() += 1;
            }
        }
        s.frames_with_positive
            .insert(positive_frames.len() as u32, 1);
        s
    }

    fn merge(mut self, other: DatasetStats) -> Self {
        self.videos += other.videos;
        self.objects += other.objects;
        self.annotations += other.annotations;
        self.positive_points += other.positive_points;
        self.negative_points += other.negative_points;
        self.ambiguous_points += other.ambiguous_points;
        merge_hist(&mut self.frames_with_positive, other.frames_with_positive);
        merge_hist(&mut self.positives_per_frame, other.positives_per_frame);
        merge_hist(&mut self.negatives_per_frame, other.negatives_per_frame);
        self
    }

    pub fn total_points(&self) -> u64 {
        self.positive_points + self.negative_points + self.ambiguous_points
    }
}

pub fn dataset_stats(videos: &[VideoRecord], exec: Execution) -> DatasetStats {
    exec.map_reduce(videos, DatasetStats::default, DatasetStats::of_video, DatasetStats::merge)
}
