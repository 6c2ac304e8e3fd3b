use std::collections::HashSet;
use std::fs;
use std::path::Path;

use super::{Dataset, ObjectAnnotation, VideoRecord, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::sampling::{Pixel, Point};

/// Parses and validates a dataset document. Unknown fields and type errors
/// are reported with their JSON path.
pub fn from_json_str(text: &str) -> Result<Dataset> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let dataset: Dataset = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::schema(path, e.into_inner().to_string())
    })?;
    validate(&dataset)?;
    Ok(dataset)
}

pub fn to_json_string(dataset: &Dataset) -> Result<String> {
    validate(dataset)?;
    Ok(serde_json::to_string_pretty(dataset)?)
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_json_str(&text)
}

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = to_json_string(dataset)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Checks every cross-field invariant of the schema.
pub fn validate(dataset: &Dataset) -> Result<()> {
    if dataset.schema != SCHEMA_VERSION {
        return Err(Error::schema(
            "schema",
            format!("unsupported schema `{}`, expected `{SCHEMA_VERSION}`", dataset.schema),
        ));
    }
    let mut ids = HashSet::new();
    for (vi, video) in dataset.videos.iter().enumerate() {
        let at = format!("videos[{vi}]");
        if !ids.insert(video.video_id.as_str()) {
            return Err(Error::schema(
                format!("{at}.video_id"),
                format!("duplicate video id `{}`", video.video_id),
            ));
        }
        validate_video(video, &at)?;
    }
    Ok(())
}

fn check_pixel(p: &Pixel, video: &VideoRecord, at: &str) -> Result<()> {
    let r = video.resolution;
    if p.x >= r.width {
        return Err(Error::schema(
            format!("{at}.x"),
            format!("x = {} outside width {}", p.x, r.width),
        ));
    }
    if p.y >= r.height {
        return Err(Error::schema(
            format!("{at}.y"),
            format!("y = {} outside height {}", p.y, r.height),
        ));
    }
    Ok(())
}

fn check_point(p: &Point, video: &VideoRecord, at: &str) -> Result<()> {
    let r = video.resolution;
    if !(p.x >= 0.0 && p.x < r.width as f64) {
        return Err(Error::schema(
            format!("{at}.x"),
            format!("x = {} outside [0, {})", p.x, r.width),
        ));
    }
    if !(p.y >= 0.0 && p.y < r.height as f64) {
        return Err(Error::schema(
            format!("{at}.y"),
            format!("y = {} outside [0, {})", p.y, r.height),
        ));
    }
    Ok(())
}

fn check_frame(frame: u32, video: &VideoRecord, at: &str) -> Result<()> {
    if frame >= video.frame_count {
        return Err(Error::schema(
            at.to_string(),
            format!("frame {frame} beyond frame_count {}", video.frame_count),
        ));
    }
    Ok(())
}

fn validate_video(video: &VideoRecord, at: &str) -> Result<()> {
    if video.frame_count == 0 {
        return Err(Error::schema(format!("{at}.frame_count"), "must be at least 1"));
    }
    if video.resolution.width == 0 || video.resolution.height == 0 {
        return Err(Error::schema(format!("{at}.resolution"), "dimensions must be positive"));
    }
    let mut ids = HashSet::new();
    for (oi, obj) in video.objects.iter().enumerate() {
        let at = format!("{at}.objects[{oi}]");
        if !ids.insert(obj.object_id) {
            return Err(Error::schema(
                format!("{at}.object_id"),
                format!("duplicate object id {}", obj.object_id),
            ));
        }
        validate_object(obj, video, &at)?;
    }
    Ok(())
}

fn validate_object(obj: &ObjectAnnotation, video: &VideoRecord, at: &str) -> Result<()> {
    for (i, w) in obj.annotated_frames.windows(2).enumerate() {
        if w[0] >= w[1] {
            return Err(Error::schema(
                format!("{at}.annotated_frames[{}]", i + 1),
                "annotated frames must be strictly ascending",
            ));
        }
    }
    if let Some(&last) = obj.annotated_frames.last() {
        check_frame(last, video, &format!("{at}.annotated_frames"))?;
    }
    if let Some(noun) = obj.noun {
        let ok = video
            .caption
            .as_deref()
            .is_some_and(|c| noun.text(c).is_some());
        if !ok {
            return Err(Error::schema(
                format!("{at}.noun"),
                format!("span [{}, {}) does not lie inside the caption", noun.start, noun.end),
            ));
        }
    }
    for (pi, p) in obj.points.iter().enumerate() {
        let at = format!("{at}.points[{pi}]");
        if p.object_id != obj.object_id {
            return Err(Error::schema(
                format!("{at}.object_id"),
                format!("point belongs to object {}, found under {}", p.object_id, obj.object_id),
            ));
        }
        check_frame(p.frame, video, &format!("{at}.frame"))?;
        if obj.annotated_frames.binary_search(&p.frame).is_err() {
            return Err(Error::schema(
                format!("{at}.frame"),
                format!("frame {} is not an annotated frame", p.frame),
            ));
        }
        check_pixel(&p.point, video, &format!("{at}.point"))?;
    }
    if let Some(init) = &obj.reference_init {
        check_frame(init.frame, video, &format!("{at}.reference_init.frame"))?;
        for (i, p) in init.points.iter().enumerate() {
            check_pixel(p, video, &format!("{at}.reference_init.points[{i}]"))?;
        }
    }
    for (ti, seg) in obj.traces.iter().enumerate() {
        let at = format!("{at}.traces[{ti}]");
        if seg.object_id != obj.object_id {
            return Err(Error::schema(
                format!("{at}.object_id"),
                "trace belongs to another object",
            ));
        }
        check_frame(seg.frame, video, &format!("{at}.frame"))?;
        if seg.trace.is_empty() {
            return Err(Error::schema(format!("{at}.trace"), "trace needs at least one point"));
        }
        for (i, p) in seg.trace.iter().enumerate() {
            check_point(p, video, &format!("{at}.trace[{i}]"))?;
        }
    }
    for (mi, fm) in obj.gt_masks.iter().enumerate() {
        let at = format!("{at}.gt_masks[{mi}]");
        check_frame(fm.frame, video, &format!("{at}.frame"))?;
        if mi > 0 && obj.gt_masks[mi - 1].frame >= fm.frame {
            return Err(Error::schema(
                format!("{at}.frame"),
                "ground-truth frames must be strictly ascending",
            ));
        }
        let r = video.resolution;
        if fm.mask.width != r.width || fm.mask.height != r.height {
            return Err(Error::schema(
                format!("{at}.mask"),
                format!(
                    "mask is {}x{}, video is {}x{}",
                    fm.mask.width, fm.mask.height, r.width, r.height
                ),
            ));
        }
        fm.mask
            .validate()
            .map_err(|e| Error::schema(format!("{at}.mask.counts"), e.to_string()))?;
    }
    Ok(())
}
