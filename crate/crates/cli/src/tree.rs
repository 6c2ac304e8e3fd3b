//! Directory layouts of the form `<video>/<object>/<frame>.<ext>`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// `frame -> path` for the files directly under `dir` whose stem is a frame
/// index and whose extension is one of `exts`.
pub fn frame_files(dir: &Path, exts: &[&str]) -> Result<BTreeMap<u32, PathBuf>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if !exts.iter().any(|e| e.eq_ignore_ascii_case(ext)) {
            continue;
        }
        let Some(frame) = path.file_stem().and_then(|s| s.to_str()).and_then(|s| s.parse().ok()) else {
            log::warn!("ignoring {}: file name is not a frame index", path.display());
            continue;
        };
        if out.insert(frame, path.clone()).is_some() {
            bail!("frame {frame} appears twice in {}", dir.display());
        }
    }
    Ok(out)
}

/// Sub-directories of `dir`, sorted by name.
pub fn subdirs(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let entry = entry?;
        if entry.file_type()?.is_dir() {
            out.push((entry.file_name().to_string_lossy().into_owned(), entry.path()));
        }
    }
    out.sort();
    Ok(out)
}

pub type ObjectFrames = BTreeMap<u32, BTreeMap<u32, PathBuf>>;

/// `video -> object -> frame -> path`.
pub fn video_tree(root: &Path, exts: &[&str]) -> Result<BTreeMap<String, ObjectFrames>> {
    let mut out = BTreeMap::new();
    for (video, vdir) in subdirs(root)? {
        let mut objects = BTreeMap::new();
        for (name, odir) in subdirs(&vdir)? {
            let id: u32 = name
                .parse()
                .with_context(|| format!("{}: object directory must be numeric", odir.display()))?;
            objects.insert(id, frame_files(&odir, exts)?);
        }
        out.insert(video, objects);
    }
    Ok(out)
}
