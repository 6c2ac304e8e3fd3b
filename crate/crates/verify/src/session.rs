//! Session state as a pure fold over the verdict log.

use std::collections::HashSet;

use pointvos_core::dataset::{ObjectId, PointAnnotation, PointLabel, PointSource, TraceSegment};
use pointvos_core::sampling::{CandidateSet, ProposedLabel};
use pointvos_core::Pixel;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueueItem {
    /// Position in the queue; verdicts refer to items by this value.
    pub item: usize,
    pub frame: u32,
    pub point: Pixel,
    pub proposed: ProposedLabel,
}

/// Rough localization shown alongside every candidate.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Overlay {
    #[default]
    None,
    Trace { segment: TraceSegment },
    Points { frame: u32, points: Vec<Pixel> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verdict {
    pub item: usize,
    pub decision: Decision,
    /// Seconds the annotator spent on the item.
    pub duration: f64,
    /// Unix milliseconds at which the verdict was persisted.
    #[serde(default)]
    pub recorded_at: u64,
}

/// Immutable part of a session, written once at creation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionHeader {
    pub session_id: String,
    pub video_id: String,
    pub object_id: ObjectId,
    pub created_at: u64,
    pub overlay: Overlay,
    pub items: Vec<QueueItem>,
}

/// Orders candidates foreground, background, then uncertain; ascending frame
/// within each type, sampling order within a frame.
pub fn build_queue(candidates: &CandidateSet) -> Result<Vec<QueueItem>> {
    if candidates.is_empty() {
        return Err(VerifyError::Invalid("candidate set is empty".into()));
    }
    let mut seen = HashSet::new();
    for f in &candidates.frames {
        for c in &f.candidates {
            if !seen.insert((f.frame, c.point)) {
                return Err(VerifyError::Invalid(format!(
                    "duplicate candidate at ({}, {}) on frame {}",
                    c.point.x, c.point.y, f.frame
                )));
            }
        }
    }
    let mut frames: Vec<_> = candidates.frames.iter().collect();
    frames.sort_by_key(|f| f.frame);
    let mut items = Vec::with_capacity(candidates.len());
    for label in [ProposedLabel::Foreground, ProposedLabel::Background, ProposedLabel::Uncertain] {
        for f in &frames {
            for c in f.candidates.iter().filter(|c| c.proposed == label) {
                items.push(QueueItem {
                    item: items.len(),
                    frame: f.frame,
                    point: c.point,
                    proposed: label,
                });
            }
        }
    }
    Ok(items)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum NextItem {
    Item {
        session_id: String,
        video_id: String,
        object_id: ObjectId,
        item: QueueItem,
        position: usize,
        total: usize,
        image: String,
        overlay: Overlay,
    },
    Done {
        session_id: String,
        total: usize,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub accept: usize,
    pub reject: usize,
    pub ambiguous: usize,
}

impl Tally {
    fn add(&mut self, d: Decision) {
        match d {
            Decision::Accept => self.accept += 1,
            Decision::Reject => self.reject += 1,
            Decision::Ambiguous => self.ambiguous += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub session_id: String,
    pub cursor: usize,
    pub total: usize,
    pub remaining: usize,
    /// Proposed type of the item at the cursor, if any.
    pub current_batch: Option<ProposedLabel>,
    pub foreground: Tally,
    pub background: Tally,
    pub uncertain: Tally,
    pub total_seconds: f64,
    pub seconds_per_point: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExportOptions {
    /// Keep rejected foreground candidates as negatives and rejected
    /// background candidates as positives.
    pub label_flip: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionExport {
    pub session_id: String,
    pub video_id: String,
    pub object_id: ObjectId,
    pub points: Vec<PointAnnotation>,
    /// Rejected candidates that did not become points.
    pub rejected: Vec<QueueItem>,
}

impl SessionExport {
    pub fn count(&self, label: PointLabel) -> usize {
        self.points.iter().filter(|p| p.label == label).count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionState {
    pub header: SessionHeader,
    pub verdicts: Vec<Verdict>,
}

impl SessionState {
    pub fn new(header: SessionHeader) -> Self {
        SessionState { header, verdicts: Vec::new() }
    }

    pub fn id(&self) -> &str {
        &self.header.session_id
    }

    /// Index of the next item awaiting a verdict.
    pub fn cursor(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_complete(&self) -> bool {
        self.cursor() == self.header.items.len()
    }

    pub fn next_item(&self, frame_url_template: &str) -> NextItem {
        let h = &self.header;
        match h.items.get(self.cursor()) {
            None => NextItem::Done { session_id: h.session_id.clone(), total: h.items.len() },
            Some(&item) => NextItem::Item {
                session_id: h.session_id.clone(),
                video_id: h.video_id.clone(),
                object_id: h.object_id,
                item,
                position: self.cursor(),
                total: h.items.len(),
                image: frame_url(frame_url_template, &h.video_id, item.frame),
                overlay: h.overlay.clone(),
            },
        }
    }

    /// Checks that `verdict` may be appended now, without mutating anything.
    pub fn check(&self, verdict: &Verdict) -> Result<()> {
        if !(verdict.duration >= 0.0 && verdict.duration.is_finite()) {
            return Err(VerifyError::Invalid(format!(
                "duration must be a finite number >= 0, got {}",
                verdict.duration
            )));
        }
        let cursor = self.cursor();
        if verdict.item < cursor {
            return Err(VerifyError::Conflict(format!(
                "item {} already has a verdict; next item is {cursor}",
                verdict.item
            )));
        }
        if cursor == self.header.items.len() {
            return Err(VerifyError::Conflict(format!(
                "session is complete; item {} is not pending",
                verdict.item
            )));
        }
        if verdict.item != cursor {
            return Err(VerifyError::Conflict(format!(
                "verdict for item {} out of order; next item is {cursor}",
                verdict.item
            )));
        }
        Ok(())
    }

    pub fn apply(&mut self, verdict: Verdict) -> Result<()> {
        self.check(&verdict)?;
        self.verdicts.push(verdict);
        Ok(())
    }

    pub fn progress(&self) -> Progress {
        let items = &self.header.items;
        let mut tallies = [Tally::default(); 3];
        let mut total_seconds = 0.0;
        for v in &self.verdicts {
            let slot = match items[v.item].proposed {
                ProposedLabel::Foreground => 0,
                ProposedLabel::Background => 1,
                ProposedLabel::Uncertain => 2,
            };
            tallies[slot].add(v.decision);
            total_seconds += v.duration;
        }
        let n = self.verdicts.len();
        Progress {
            session_id: self.header.session_id.clone(),
            cursor: n,
            total: items.len(),
            remaining: items.len() - n,
            current_batch: items.get(n).map(|i| i.proposed),
            foreground: tallies[0],
            background: tallies[1],
            uncertain: tallies[2],
            total_seconds,
            seconds_per_point: (n > 0).then(|| total_seconds / n as f64),
        }
    }

    /// Converts the verdict log into point annotations.
    ///
    /// Accepted foreground and background candidates become positives and
    /// negatives. For uncertain candidates the annotator answers whether the
    /// point lies on the object, so accept / reject map to positive /
    /// negative. Ambiguous verdicts always yield ambiguous points. Rejected
    /// foreground / background candidates are only kept, with flipped
    /// labels, under [`ExportOptions::label_flip`].
    pub fn export(&self, opts: ExportOptions) -> Result<SessionExport> {
        if !self.is_complete() {
            return Err(VerifyError::Incomplete {
                remaining: (self.cursor()..self.header.items.len()).collect(),
            });
        }
        let h = &self.header;
        let mut points = Vec::new();
        let mut rejected = Vec::new();
        for v in &self.verdicts {
            let item = h.items[v.item];
            use Decision::*;
            use ProposedLabel::*;
            let labelled = match (item.proposed, v.decision) {
                (_, Ambiguous) => Some((PointLabel::Ambiguous, PointSource::Verified)),
                (Foreground | Uncertain, Accept) => Some((PointLabel::Positive, PointSource::Verified)),
                (Background, Accept) | (Uncertain, Reject) => {
                    Some((PointLabel::Negative, PointSource::Verified))
                }
                (Foreground, Reject) if opts.label_flip => {
                    Some((PointLabel::Negative, PointSource::RejectedCandidate))
                }
                (Background, Reject) if opts.label_flip => {
                    Some((PointLabel::Positive, PointSource::RejectedCandidate))
                }
                (Foreground | Background, Reject) => None,
            };
            match labelled {
                Some((label, source)) => points.push(PointAnnotation {
                    frame: item.frame,
                    object_id: h.object_id,
                    point: item.point,
                    label,
                    source,
                }),
                None => rejected.push(item),
            }
        }
        Ok(SessionExport {
            session_id: h.session_id.clone(),
            video_id: h.video_id.clone(),
            object_id: h.object_id,
            points,
            rejected,
        })
    }
}

/// Expands `{video}` and `{frame}` (zero-padded to five digits).
pub fn frame_url(template: &str, video_id: &str, frame: u32) -> String {
    template
        .replace("{video}", video_id)
        .replace("{frame}", &format!("{frame:05}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use pointvos_core::sampling::{Candidate, FrameCandidates};

    pub(crate) fn full_size_set() -> CandidateSet {
        let frames = (0..10)
            .map(|f| {
                let mut candidates = Vec::new();
                let mut push = |n: u32, label, row: u32| {
                    for i in 0..n {
                        candidates.push(Candidate { point: Pixel::new(i * 25, row + f), proposed: label });
                    }
                };
                // interleave types to check the queue reorders them
                push(3, ProposedLabel::Uncertain, 200);
                push(10, ProposedLabel::Background, 100);
                push(7, ProposedLabel::Foreground, 0);
                FrameCandidates { frame: (9 - f) * 3, candidates }
            })
            .collect();
        CandidateSet { object_id: 4, frames }
    }

    fn state(set: &CandidateSet) -> SessionState {
        SessionState::new(SessionHeader {
            session_id: "s".into(),
            video_id: "v".into(),
            object_id: set.object_id,
            created_at: 0,
            overlay: Overlay::None,
            items: build_queue(set).unwrap(),
        })
    }

    fn verdict(item: usize, decision: Decision) -> Verdict {
        Verdict { item, decision, duration: 0.9, recorded_at: 0 }
    }

    #[test]
    fn queue_order() {
        let q = build_queue(&full_size_set()).unwrap();
        assert_eq!(q.len(), 200);
        assert!(q[..70].iter().all(|i| i.proposed == ProposedLabel::Foreground));
        assert!(q[70..170].iter().all(|i| i.proposed == ProposedLabel::Background));
        assert!(q[170..].iter().all(|i| i.proposed == ProposedLabel::Uncertain));
        assert!(q[..70].windows(2).all(|w| w[0].frame <= w[1].frame));
        assert!(q.iter().enumerate().all(|(i, it)| it.item == i));
    }

    #[test]
    fn background_only_queue() {
        let set = CandidateSet {
            object_id: 1,
            frames: vec![FrameCandidates {
                frame: 0,
                candidates: vec![Candidate { point: Pixel::new(1, 1), proposed: ProposedLabel::Background }],
            }],
        };
        assert_eq!(build_queue(&set).unwrap()[0].proposed, ProposedLabel::Background);
    }

    #[test]
    fn rejects_empty_and_duplicates() {
        assert!(build_queue(&CandidateSet { object_id: 1, frames: vec![] }).is_err());
        let c = Candidate { point: Pixel::new(2, 2), proposed: ProposedLabel::Foreground };
        let dup = CandidateSet {
            object_id: 1,
            frames: vec![FrameCandidates { frame: 0, candidates: vec![c, c] }],
        };
        assert!(matches!(build_queue(&dup), Err(VerifyError::Invalid(_))));
    }

    #[test]
    fn next_is_idempotent_until_verdict() {
        let mut s = state(&full_size_set());
        let a = s.next_item("/f/{video}/{frame}.jpg");
        assert_eq!(a, s.next_item("/f/{video}/{frame}.jpg"));
        let NextItem::Item { item, image, .. } = &a else { panic!() };
        assert_eq!(item.proposed, ProposedLabel::Foreground);
        assert_eq!(image, "/f/v/00000.jpg");
        s.apply(verdict(0, Decision::Accept)).unwrap();
        assert_ne!(a, s.next_item("/f/{video}/{frame}.jpg"));
    }

    #[test]
    fn conflicts_leave_state_unchanged() {
        let mut s = state(&full_size_set());
        s.apply(verdict(0, Decision::Accept)).unwrap();
        let before = s.clone();
        assert!(matches!(s.apply(verdict(0, Decision::Reject)), Err(VerifyError::Conflict(_))));
        assert!(matches!(s.apply(verdict(5, Decision::Reject)), Err(VerifyError::Conflict(_))));
        let bad = Verdict { duration: -1.0, ..verdict(1, Decision::Accept) };
        assert!(matches!(s.apply(bad), Err(VerifyError::Invalid(_))));
        assert_eq!(s, before);
    }

    #[test]
    fn export_mapping() {
        let set = full_size_set();
        let mut s = state(&set);
        assert!(matches!(s.export(ExportOptions::default()), Err(VerifyError::Incomplete { .. })));
        for i in 0..200 {
            let d = match i {
                0 => Decision::Reject,
                1 => Decision::Ambiguous,
                _ => Decision::Accept,
            };
            s.apply(verdict(i, d)).unwrap();
        }
        let e = s.export(ExportOptions::default()).unwrap();
        assert_eq!(e.count(PointLabel::Positive), 68 + 30);
        assert_eq!(e.count(PointLabel::Negative), 100);
        assert_eq!(e.count(PointLabel::Ambiguous), 1);
        assert_eq!(e.rejected.len(), 1);

        let flipped = s.export(ExportOptions { label_flip: true }).unwrap();
        assert_eq!(flipped.count(PointLabel::Negative), 101);
        assert!(flipped.rejected.is_empty());
        let p = s.progress();
        assert_eq!(p.foreground, Tally { accept: 68, reject: 1, ambiguous: 1 });
        assert!((p.seconds_per_point.unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn complete_session_rejects_more_verdicts() {
        let set = CandidateSet {
            object_id: 1,
            frames: vec![FrameCandidates {
                frame: 0,
                candidates: vec![Candidate { point: Pixel::new(1, 1), proposed: ProposedLabel::Foreground }],
            }],
        };
        let mut s = state(&set);
        s.apply(verdict(0, Decision::Accept)).unwrap();
        assert!(matches!(s.next_item(""), NextItem::Done { total: 1, .. }));
        assert!(matches!(s.apply(verdict(1, Decision::Accept)), Err(VerifyError::Conflict(_))));
    }
}
