//! Verification stage: annotators accept, reject or flag sampled point
//! candidates one at a time, batched by proposed type.
//!
//! - [`session`] holds the pure state machine: queue construction, verdict
//!   validation, progress and export are all folds over the verdict log.
//! - [`log`] persists each session as an immutable header plus an
//!   append-only, fsync'd JSON-lines verdict log, and replays it.
//! - [`store`] manages many sessions under one data root with per-session
//!   writer locks.
//! - [`http`] exposes the store as a JSON API.

pub mod error;
pub mod http;
pub mod log;
pub mod session;
pub mod store;

pub use error::{Result, VerifyError};
pub use session::{
    build_queue, Decision, ExportOptions, NextItem, Overlay, Progress, QueueItem, SessionExport,
    SessionHeader, SessionState, Verdict,
};
pub use store::SessionStore;
