//! Many sessions under one data root.
//!
//! Each session has a writer mutex that serializes verdict appends and a
//! published `Arc<SessionState>` snapshot that readers clone without waiting
//! on writers.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use parking_lot::{Mutex, RwLock};
use pointvos_core::dataset::ObjectId;
use pointvos_core::sampling::CandidateSet;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VerifyError};
use crate::log::{self, RecoveryReport, SessionLog};
use crate::session::{
    build_queue, Decision, ExportOptions, NextItem, Overlay, Progress, SessionExport,
    SessionHeader, SessionState, Verdict,
};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const DEFAULT_FRAME_URL: &str = "/frames/{video}/{frame}.jpg";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub session_id: String,
    pub video_id: String,
    pub object_id: ObjectId,
    pub created_at: u64,
    pub items: usize,
}

impl ManifestEntry {
    fn of(h: &SessionHeader) -> Self {
        ManifestEntry {
            session_id: h.session_id.clone(),
            video_id: h.video_id.clone(),
            object_id: h.object_id,
            created_at: h.created_at,
            items: h.items.len(),
        }
    }
}

#[derive(Debug)]
struct Slot {
    writer: Mutex<SessionLog>,
    snapshot: RwLock<Arc<SessionState>>,
}

#[derive(Debug)]
pub struct SessionStore {
    root: PathBuf,
    frame_url: String,
    sessions: RwLock<BTreeMap<String, Arc<Slot>>>,
    /// Serializes manifest rewrites.
    manifest: Mutex<()>,
}

pub fn now_millis() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

impl SessionStore {
    /// Opens `root`, recovering every session found under it.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        let dir = log::sessions_dir(&root);
        fs::create_dir_all(&dir).map_err(|e| VerifyError::io(&dir, e))?;
        let mut sessions = BTreeMap::new();
        let entries = fs::read_dir(&dir).map_err(|e| VerifyError::io(&dir, e))?;
        for entry in entries {
            let entry = entry.map_err(|e| VerifyError::io(&dir, e))?;
            let path = entry.path();
            if !path.join(log::HEADER_FILE).is_file() {
                continue;
            }
            let (state, report) = log::crash_recover(&path)?;
            if let Some(w) = &report.warning {
                ::log::warn!("{w}");
            }
            let writer = SessionLog::open(&path, &report)?;
            sessions.insert(
                state.id().to_string(),
                Arc::new(Slot { writer: Mutex::new(writer), snapshot: RwLock::new(Arc::new(state)) }),
            );
        }
        let store = SessionStore {
            root,
            frame_url: DEFAULT_FRAME_URL.to_string(),
            sessions: RwLock::new(sessions),
            manifest: Mutex::new(()),
        };
        store.write_manifest()?;
        Ok(store)
    }

    pub fn with_frame_url(mut self, template: impl Into<String>) -> Self {
        self.frame_url = template.into();
        self
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn frames_dir(&self) -> PathBuf {
        self.root.join("frames")
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| VerifyError::UnknownSession(id.to_string()))
    }

    /// Builds the queue, persists the header and registers the session.
    pub fn create(
        &self,
        video_id: &str,
        candidates: &CandidateSet,
        overlay: Overlay,
    ) -> Result<Arc<SessionState>> {
        let items = build_queue(candidates)?;
        if video_id.is_empty() {
            return Err(VerifyError::Invalid("video_id is empty".into()));
        }
        let header = SessionHeader {
            session_id: uuid::Uuid::new_v4().simple().to_string(),
            video_id: video_id.to_string(),
            object_id: candidates.object_id,
            created_at: now_millis(),
            overlay,
            items,
        };
        let writer = SessionLog::create(&self.root, &header)?;
        let state = Arc::new(SessionState::new(header));
        self.sessions.write().insert(
            state.id().to_string(),
            Arc::new(Slot { writer: Mutex::new(writer), snapshot: RwLock::new(state.clone()) }),
        );
        self.write_manifest()?;
        Ok(state)
    }

    pub fn snapshot(&self, id: &str) -> Result<Arc<SessionState>> {
        Ok(self.slot(id)?.snapshot.read().clone())
    }

    pub fn list(&self) -> Vec<ManifestEntry> {
        let slots: Vec<_> = self.sessions.read().values().cloned().collect();
        slots.iter().map(|s| ManifestEntry::of(&s.snapshot.read().header)).collect()
    }

    pub fn next_item(&self, id: &str) -> Result<NextItem> {
        Ok(self.snapshot(id)?.next_item(&self.frame_url))
    }

    pub fn progress(&self, id: &str) -> Result<Progress> {
        Ok(self.snapshot(id)?.progress())
    }

    /// Validates, durably appends, then publishes the new state.
    pub fn record(&self, id: &str, item: usize, decision: Decision, duration: f64) -> Result<Progress> {
        let slot = self.slot(id)?;
        let mut writer = slot.writer.lock();
        let current = slot.snapshot.read().clone();
        let verdict = Verdict { item, decision, duration, recorded_at: now_millis() };
        current.check(&verdict)?;
        writer.append(&verdict)?;
        let mut next = (*current).clone();
        next.verdicts.push(verdict);
        let progress = next.progress();
        *slot.snapshot.write() = Arc::new(next);
        Ok(progress)
    }

    pub fn export(&self, id: &str, opts: ExportOptions) -> Result<SessionExport> {
        self.snapshot(id)?.export(opts)
    }

    /// Re-reads a session from disk, bypassing the in-memory snapshot.
    pub fn replay_from_disk(&self, id: &str) -> Result<(SessionState, RecoveryReport)> {
        self.slot(id)?;
        log::crash_recover(&log::session_dir(&self.root, id))
    }

    fn write_manifest(&self) -> Result<()> {
        let _guard = self.manifest.lock();
        let entries = self.list();
        log::write_atomic(&self.root.join(MANIFEST_FILE), &serde_json::to_vec_pretty(&entries)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pointvos_core::sampling::{Candidate, FrameCandidates, ProposedLabel};
    use pointvos_core::Pixel;

    fn set(n: u32) -> CandidateSet {
        CandidateSet {
            object_id: 3,
            frames: vec![FrameCandidates {
                frame: 2,
                candidates: (0..n)
                    .map(|i| Candidate { point: Pixel::new(i, 1), proposed: ProposedLabel::Foreground })
                    .collect(),
            }],
        }
    }

    #[test]
    fn reopen_restores_sessions_and_manifest() {
        let tmp = tempfile::tempdir().unwrap();
        let id = {
            let store = SessionStore::open(tmp.path()).unwrap();
            let s = store.create("vid", &set(4), Overlay::None).unwrap();
            store.record(s.id(), 0, Decision::Accept, 0.5).unwrap();
            store.record(s.id(), 1, Decision::Reject, 0.5).unwrap();
            s.id().to_string()
        };
        let store = SessionStore::open(tmp.path()).unwrap();
        assert_eq!(store.snapshot(&id).unwrap().cursor(), 2);
        let manifest: Vec<ManifestEntry> =
            serde_json::from_slice(&fs::read(tmp.path().join(MANIFEST_FILE)).unwrap()).unwrap();
        assert_eq!(manifest.len(), 1);
        assert_eq!(manifest[0].items, 4);
    }

    #[test]
    fn concurrent_posts_are_serialized() {
        let tmp = tempfile::tempdir().unwrap();
        let store = Arc::new(SessionStore::open(tmp.path()).unwrap());
        let id = store.create("vid", &set(16), Overlay::None).unwrap().id().to_string();
        // Every thread races for every item; exactly one verdict per item wins.
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let store = store.clone();
                let id = id.clone();
                std::thread::spawn(move || {
                    let mut wins = 0;
                    for item in 0..16 {
                        while store.snapshot(&id).unwrap().cursor() < item {
                            std::thread::yield_now();
                        }
                        if store.record(&id, item, Decision::Accept, 0.1).is_ok() {
                            wins += 1;
                        }
                    }
                    wins
                })
            })
            .collect();
        let wins: usize = handles.into_iter().map(|h| h.join().unwrap()).sum();
        assert_eq!(wins, 16);
        let (disk, _) = store.replay_from_disk(&id).unwrap();
        assert_eq!(disk, *store.snapshot(&id).unwrap());
    }

    #[test]
    fn unknown_session() {
        let tmp = tempfile::tempdir().unwrap();
        let store = SessionStore::open(tmp.path()).unwrap();
        assert!(matches!(store.next_item("nope"), Err(VerifyError::UnknownSession(_))));
    }
}
