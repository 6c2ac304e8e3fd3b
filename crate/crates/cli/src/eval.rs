use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Subcommand};
use pointvos_core::dataset::{load_dataset, ClassSplit};
use pointvos_core::mask::io::read_mask_png;
use pointvos_core::mask::rle_decode;
use pointvos_core::metrics::{
    benchmark_report, evaluate_objects, sparse_dense_correlation, split_report, FrameScore,
    ObjectEval, INIT_SIZES,
};
use pointvos_core::{BinaryMask, Execution};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Subcommand)]
pub enum EvalCmd {
    /// Score predictions against inline ground-truth masks.
    Run(RunArgs),
    /// Spearman rank correlation between two per-method score files.
    Correlate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Prediction tree `<init>/<video>/<object>/<frame>.png`. Missing files
    /// count as empty predictions.
    #[arg(long)]
    pred: PathBuf,
    /// Dataset JSON with `gt_masks` on the evaluated objects.
    #[arg(long)]
    gt: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = INIT_SIZES)]
    inits: Vec<u32>,
    /// Boundary tolerance in pixels; defaults to 0.8% of the image diagonal.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct ObjectRow {
    init: u32,
    video_id: String,
    object_id: u32,
    j: f64,
    f: f64,
    jf: f64,
}

pub fn run(cmd: EvalCmd, exec: Execution) -> Result<()> {
    match cmd {
        EvalCmd::Run(a) => run_eval(a, exec),
        EvalCmd::Correlate { a, b } => correlate(&a, &b),
    }
}

fn pred_mask(path: &Path, like: &BinaryMask) -> Result<BinaryMask> {
    if !path.exists() {
        return Ok(BinaryMask::new(like.width(), like.height())?);
    }
    let m = read_mask_png(path)?;
    like.same_shape(&m).with_context(|| path.display().to_string())?;
    Ok(m)
}

fn run_eval(a: RunArgs, exec: Execution) -> Result<()> {
    ensure!(!a.inits.is_empty(), "--inits is empty");
    let ds = load_dataset(&a.gt)?;
    let mut gts = Vec::new();
    for v in &ds.videos {
        for o in v.objects.iter().filter(|o| !o.gt_masks.is_empty()) {
            let masks = o
                .gt_masks
                .iter()
                .map(|m| Ok((m.frame, rle_decode(&m.mask)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            gts.push((v.video_id.as_str(), o.object_id, o.class_split, masks));
        }
    }
    if gts.is_empty() {
        bail!("{}: no object carries ground-truth masks", a.gt.display());
    }

    let mut per_init = BTreeMap::new();
    let mut splits = BTreeMap::new();
    let mut rows = Vec::new();
    for &init in &a.inits {
        let evals = gts
            .iter()
            .map(|(video, object, _, masks)| {
                let dir = a.pred.join(init.to_string()).join(video).join(object.to_string());
                let preds = masks
                    .iter()
                    .map(|(&f, gt)| Ok((f, pred_mask(&dir.join(format!("{f}.png")), gt)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(ObjectEval { preds, gts: masks.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        let scores = evaluate_objects(&evals, a.tol, exec)?;
        let mean = scores.iter().map(|s| s.jf).sum::<f64>() / scores.len() as f64 * 100.0;
        per_init.insert(init, mean);
        if gts.iter().all(|g| g.2.is_some()) {
            let labelled: Vec<(FrameScore, Option<ClassSplit>)> =
                scores.iter().zip(&gts).map(|(s, g)| (*s, g.2)).collect();
            match split_report(&labelled) {
                Ok(r) => {
                    splits.insert(init.to_string(), r);
                }
                Err(e) => log::warn!("split report for {init}-point skipped: {e}"),
            }
        }
        for (s, (video, object, _, _)) in scores.iter().zip(&gts) {
            rows.push(ObjectRow { init, video_id: video.to_string(), object_id: *object, j: s.j, f: s.f, jf: s.jf });
        }
    }

    let mut report = json!({
        "per_init": per_init.iter().map(|(k, v)| (format!("{k}-point"), json!(v))).collect::<serde_json::Map<_, _>>(),
        "objects": rows,
    });
    let mut sorted = a.inits.clone();
    sorted.sort_unstable();
    if sorted == INIT_SIZES {
        let b = benchmark_report(&per_init)?;
        println!("{b}");
        report["benchmark"] = serde_json::to_value(b)?;
    } else {
        for (k, v) in &per_init {
            println!("{k}-point: {:.1}", (v * 10.0).round() / 10.0);
        }
    }
    if !splits.is_empty() {
        for (k, s) in &splits {
            println!("{k}-point split\n{s}");
        }
        report["split"] = serde_json::to_value(&splits)?;
    }
    if let Some(out) = &a.out {
        fs::write(out, serde_json::to_string_pretty(&report)?).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

/// Scores as a JSON array, or an object keyed by method name.
fn read_scores(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    ensure!(v.is_array() || v.is_object(), "{}: expected an array or object of scores", path.display());
    Ok(v)
}

fn numbers(v: &[&Value], path: &Path) -> Result<Vec<f64>> {
    v.iter()
        .map(|x| x.as_f64().with_context(|| format!("{}: non-numeric score {x}", path.display())))
        .collect()
}

fn correlate(a: &Path, b: &Path) -> Result<()> {
    let (va, vb) = (read_scores(a)?, read_scores(b)?);
    let (xs, ys, methods) = match (&va, &vb) {
        (Value::Array(x), Value::Array(y)) => {
            (numbers(&x.iter().collect::<Vec<_>>(), a)?, numbers(&y.iter().collect::<Vec<_>>(), b)?, None)
        }
        (Value::Object(x), Value::Object(y)) => {
            ensure!(
                x.keys().eq(y.keys()),
                "method names differ between {} and {}",
                a.display(),
                b.display()
            );
            let keys: Vec<String> = x.keys().cloned().collect();
            (
                numbers(&x.values().collect::<Vec<_>>(), a)?,
                numbers(&y.values().collect::<Vec<_>>(), b)?,
                Some(keys),
            )
        }
        _ => bail!("both score files must be arrays or both objects"),
    };
    let rho = sparse_dense_correlation(&xs, &ys)?;
    println!("{}", json!({ "n": xs.len(), "spearman": rho, "methods": methods }));
    Ok(())
}
