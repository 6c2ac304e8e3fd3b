use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use pointvos_core::dataset::{
    apply_reference, dataset_stats, export_vng, load_dataset, save_dataset, select_eval_frames,
    select_keyframe, select_reference_frame, EvalFrames, FrameMask, MaskSource, ReferenceOutcome,
    TraceArea,
};
use pointvos_core::mask::io::read_mask_png;
use pointvos_core::mask::rle_encode;
use pointvos_core::Execution;
use serde_json::json;

use crate::tree::video_tree;

#[derive(Debug, Subcommand)]
pub enum DatasetCmd {
    /// Print video, object, annotation and point counts as JSON.
    Stats { input: PathBuf },
    /// Build a validation split: reference frames and evaluation frames.
    BuildVal(BuildValArgs),
    /// Join noun spans with per-object masks into grounding records.
    ExportVng(ExportVngArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Rules {
    /// 7 positives on the reference frame; a later frame with 3 positives and
    /// 1 negative; 3 evaluation frames including the trace key-frame.
    Supplement2,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AreaArg {
    Bbox,
    Hull,
}

#[derive(Debug, Args)]
pub struct BuildValArgs {
    #[arg(long, value_enum, default_value = "supplement2")]
    rules: Rules,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Area used to pick the trace key-frame.
    #[arg(long, value_enum, default_value = "bbox")]
    trace_area: AreaArg,
}

#[derive(Debug, Args)]
pub struct ExportVngArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Mask tree `<video>/<object>/<frame>.png`; defaults to the dataset's
    /// inline ground-truth masks.
    #[arg(long)]
    masks: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: DatasetCmd, exec: Execution) -> Result<()> {
    match cmd {
        DatasetCmd::Stats { input } => {
            let ds = load_dataset(&input)?;
            let stats = dataset_stats(&ds.videos, exec);
            println!("{}", serde_json::to_string_pretty(&stats)?);
            Ok(())
        }
        DatasetCmd::BuildVal(a) => build_val(a),
        DatasetCmd::ExportVng(a) => export(a),
    }
}

fn build_val(a: BuildValArgs) -> Result<()> {
    let Rules::Supplement2 = a.rules;
    let area = match a.trace_area {
        AreaArg::Bbox => TraceArea::BoundingBox,
        AreaArg::Hull => TraceArea::ConvexHull,
    };
    let mut ds = load_dataset(&a.input)?;
    let mut rejected: BTreeMap<String, usize> = BTreeMap::new();
    let mut eval_frames = serde_json::Map::new();
    let mut kept = 0usize;
    for video in &mut ds.videos {
        let mut objects = Vec::new();
        for obj in &video.objects {
            let reference = match select_reference_frame(obj) {
                ReferenceOutcome::Selected(r) => r,
                ReferenceOutcome::Rejected(why) => {
                    *rejected.entry(serde_json::to_value(why)?.as_str().unwrap_or_default().to_string()).or_default() += 1;
                    continue;
                }
            };
            let mut out = apply_reference(obj, &reference);
            if let Ok(trace) = select_keyframe(&obj.traces, area) {
                match select_eval_frames(&out, trace.frame, reference.frame) {
                    EvalFrames::Selected(frames) => {
                        out.gt_masks.retain(|m| frames.contains(&m.frame));
                        eval_frames.insert(format!("{}/{}", video.video_id, obj.object_id), json!(frames));
                    }
                    EvalFrames::Rejected(why) => {
                        *rejected.entry(serde_json::to_value(why)?.as_str().unwrap_or_default().to_string()).or_default() += 1;
                        continue;
                    }
                }
            } else {
                log::warn!("{}/{}: no trace segment, evaluation frames not selected", video.video_id, obj.object_id);
            }
            kept += 1;
            objects.push(out);
        }
        video.objects = objects;
    }
    ds.videos.retain(|v| !v.objects.is_empty());
    ds.metadata.insert("generator".into(), json!("dataset build-val"));
    ds.metadata.insert("rules".into(), json!("supplement2"));
    ds.metadata.insert("eval_frames".into(), serde_json::Value::Object(eval_frames));
    ds.metadata.insert("rejected".into(), json!(rejected));
    save_dataset(&ds, &a.out)?;
    println!("{}", json!({ "kept_objects": kept, "rejected": rejected }));
    Ok(())
}

fn export(a: ExportVngArgs) -> Result<()> {
    let ds = load_dataset(&a.input)?;
    let mut masks: MaskSource = HashMap::new();
    match &a.masks {
        Some(dir) => {
            for (video, objects) in video_tree(dir, &["png"])? {
                for (object, frames) in objects {
                    let seq = frames
                        .iter()
                        .map(|(&frame, path)| Ok(FrameMask { frame, mask: rle_encode(&read_mask_png(path)?) }))
                        .collect::<Result<Vec<_>>>()?;
                    masks.insert((video.clone(), object), seq);
                }
            }
        }
        None => {
            for v in &ds.videos {
                for o in &v.objects {
                    masks.insert((v.video_id.clone(), o.object_id), o.gt_masks.clone());
                }
            }
        }
    }
    let export = export_vng(&ds.videos, &masks);
    fs::write(&a.out, serde_json::to_string_pretty(&export)?).with_context(|| format!("writing {}", a.out.display()))?;
    println!(
        "{}",
        json!({
            "records": export.records.len(),
            "skipped_without_noun": export.skipped_without_noun,
            "skipped_without_masks": export.skipped_without_masks,
        })
    );
    Ok(())
}
