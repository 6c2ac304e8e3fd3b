//! On-disk session log.
//!
//! ```text
//! <root>/sessions/<id>/header.json     written once, atomically
//! <root>/sessions/<id>/verdicts.jsonl  one verdict per line, fsync'd per append
//! ```
//!
//! A crash can at worst leave a torn final line. Replay keeps the longest
//! prefix of lines that parse and validate against the session state, and
//! reopening for write truncates the file to that prefix.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use crate::error::{Result, VerifyError};
use crate::session::{SessionHeader, SessionState, Verdict};

pub const HEADER_FILE: &str = "header.json";
pub const VERDICT_FILE: &str = "verdicts.jsonl";

pub fn sessions_dir(root: &Path) -> PathBuf {
    root.join("sessions")
}

pub fn session_dir(root: &Path, id: &str) -> PathBuf {
    sessions_dir(root).join(id)
}

/// What replay found beyond the valid prefix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecoveryReport {
    pub verdicts: usize,
    /// Byte length of the valid prefix.
    pub valid_bytes: u64,
    /// Bytes past the valid prefix that were dropped.
    pub discarded_bytes: u64,
    pub warning: Option<String>,
}

/// Writes `bytes` to `path` via a synced temporary file and rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = File::create(&tmp).map_err(|e| VerifyError::io(&tmp, e))?;
        f.write_all(bytes).map_err(|e| VerifyError::io(&tmp, e))?;
        f.sync_all().map_err(|e| VerifyError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| VerifyError::io(path, e))?;
    if let Some(dir) = path.parent() {
        sync_dir(dir);
    }
    Ok(())
}

fn sync_dir(dir: &Path) {
    // Not supported on every platform; best effort.
    if let Ok(d) = File::open(dir) {
        let _ = d.sync_all();
    }
}

pub fn read_header(dir: &Path) -> Result<SessionHeader> {
    let path = dir.join(HEADER_FILE);
    let text = fs::read_to_string(&path).map_err(|e| VerifyError::io(&path, e))?;
    serde_json::from_str(&text).map_err(|e| VerifyError::Corrupt { path, message: e.to_string() })
}

/// Replays the verdict log against `header`.
pub fn replay(dir: &Path, header: SessionHeader) -> Result<(SessionState, RecoveryReport)> {
    let path = dir.join(VERDICT_FILE);
    let mut state = SessionState::new(header);
    let mut report = RecoveryReport::default();
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((state, report)),
        Err(e) => return Err(VerifyError::io(&path, e)),
    };
    let total = file.metadata().map_err(|e| VerifyError::io(&path, e))?.len();
    let mut reader = BufReader::new(file);
    let mut line = Vec::new();
    loop {
        line.clear();
        let n = reader.read_until(b'\n', &mut line).map_err(|e| VerifyError::io(&path, e))?;
        if n == 0 {
            break;
        }
        let problem = if line.last() != Some(&b'\n') {
            Some("torn final line".to_string())
        } else {
            match serde_json::from_slice::<Verdict>(&line[..n - 1]) {
                Err(e) => Some(format!("unparseable verdict: {e}")),
                Ok(v) => state.apply(v).err().map(|e| format!("inconsistent verdict: {e}")),
            }
        };
        if let Some(p) = problem {
            report.warning = Some(format!(
                "{}: {p} at byte {}; keeping {} verdicts",
                path.display(),
                report.valid_bytes,
                state.verdicts.len()
            ));
            break;
        }
        report.valid_bytes += n as u64;
    }
    report.verdicts = state.verdicts.len();
    report.discarded_bytes = total - report.valid_bytes;
    Ok((state, report))
}

/// Loads a session directory, tolerating a damaged log tail.
pub fn crash_recover(dir: &Path) -> Result<(SessionState, RecoveryReport)> {
    let header = read_header(dir)?;
    replay(dir, header)
}

/// Append handle for one session's verdict log.
#[derive(Debug)]
pub struct SessionLog {
    path: PathBuf,
    file: File,
}

impl SessionLog {
    /// Creates the session directory and header. Fails if it already exists.
    pub fn create(root: &Path, header: &SessionHeader) -> Result<Self> {
        let dir = session_dir(root, &header.session_id);
        fs::create_dir_all(sessions_dir(root)).map_err(|e| VerifyError::io(root, e))?;
        fs::create_dir(&dir).map_err(|e| match e.kind() {
            std::io::ErrorKind::AlreadyExists => {
                VerifyError::Conflict(format!("session `{}` already exists", header.session_id))
            }
            _ => VerifyError::io(&dir, e),
        })?;
        write_atomic(&dir.join(HEADER_FILE), &serde_json::to_vec_pretty(header)?)?;
        Self::open_at(&dir, 0)
    }

    /// Opens for append after truncating to the valid prefix found by replay.
    pub fn open(dir: &Path, report: &RecoveryReport) -> Result<Self> {
        Self::open_at(dir, report.valid_bytes)
    }

    fn open_at(dir: &Path, valid_bytes: u64) -> Result<Self> {
        let path = dir.join(VERDICT_FILE);
        let mut file = OpenOptions::new()
            .create(true)
            .read(true)
            .write(true)
            .truncate(false)
            .open(&path)
            .map_err(|e| VerifyError::io(&path, e))?;
        let len = file.metadata().map_err(|e| VerifyError::io(&path, e))?.len();
        if len != valid_bytes {
            file.set_len(valid_bytes).map_err(|e| VerifyError::io(&path, e))?;
            file.sync_all().map_err(|e| VerifyError::io(&path, e))?;
        }
        file.seek(SeekFrom::End(0)).map_err(|e| VerifyError::io(&path, e))?;
        Ok(SessionLog { path, file })
    }

    /// Appends one verdict and returns once it is durable.
    pub fn append(&mut self, verdict: &Verdict) -> Result<()> {
        let mut line = serde_json::to_vec(verdict)?;
        line.push(b'\n');
        self.file.write_all(&line).map_err(|e| VerifyError::io(&self.path, e))?;
        self.file.sync_data().map_err(|e| VerifyError::io(&self.path, e))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

/// Raw bytes of a verdict log, for tests and diagnostics.
pub fn read_log_bytes(dir: &Path) -> Result<Vec<u8>> {
    let path = dir.join(VERDICT_FILE);
    let mut buf = Vec::new();
    File::open(&path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| VerifyError::io(&path, e))?;
    Ok(buf)
}
