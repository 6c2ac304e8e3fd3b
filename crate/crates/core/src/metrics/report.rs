//! Per-object evaluation and report tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{boundary_f, default_boundary_tolerance, jaccard};
use crate::dataset::ClassSplit;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::mask::BinaryMask;

/// Initialization sizes of the benchmark, in points.
pub const INIT_SIZES: [u32; 4] = [1, 2, 5, 10];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameScore {
    pub j: f64,
    pub f: f64,
    pub jf: f64,
}

impl FrameScore {
    pub fn new(j: f64, f: f64) -> Self {
        FrameScore { j, f, jf: (j + f) / 2.0 }
    }
}

/// Predictions and ground truth of one object, keyed by frame.
#[derive(Debug, Clone, Default)]
pub struct ObjectEval {
    pub preds: BTreeMap<u32, BinaryMask>,
    pub gts: BTreeMap<u32, BinaryMask>,
}

/// Averages J and F over the evaluation frames, then takes their mean.
///
/// `tol` defaults to the diagonal-based tolerance of the frame size.
pub fn evaluate_object(
    preds: &BTreeMap<u32, BinaryMask>,
    gts: &BTreeMap<u32, BinaryMask>,
    tol: Option<f64>,
) -> Result<FrameScore> {
    if gts.is_empty() {
        return Err(Error::Empty("evaluation frames"));
    }
    if !preds.keys().eq(gts.keys()) {
        return Err(Error::Malformed(format!(
            "frame-set mismatch: predictions {:?}, ground truth {:?}",
            preds.keys().collect::<Vec<_>>(),
            gts.keys().collect::<Vec<_>>()
        )));
    }
    let (mut js, mut fs) = (0.0, 0.0);
    for (pred, gt) in preds.values().zip(gts.values()) {
        let tol = tol.unwrap_or_else(|| default_boundary_tolerance(gt.width(), gt.height()));
        js += jaccard(pred, gt)?;
        fs += boundary_f(pred, gt, tol)?;
    }
    let n = gts.len() as f64;
    Ok(FrameScore::new(js / n, fs / n))
}

pub fn evaluate_objects(objects: &[ObjectEval], tol: Option<f64>, exec: Execution) -> Result<Vec<FrameScore>> {
    exec.map(objects, |o| evaluate_object(&o.preds, &o.gts, tol))
        .into_iter()
        .collect()
}

fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Mean J&F per initialization size, in percent, and their mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    #[serde(rename = "Mean")]
    pub mean: f64,
    #[serde(rename = "1-point")]
    pub one_point: f64,
    #[serde(rename = "2-point")]
    pub two_point: f64,
    #[serde(rename = "5-point")]
    pub five_point: f64,
    #[serde(rename = "10-point")]
    pub ten_point: f64,
}

impl BenchmarkReport {
    /// Values rounded to one decimal, as printed in tables.
    pub fn rounded(&self) -> Self {
        BenchmarkReport {
            mean: round1(self.mean),
            one_point: round1(self.one_point),
            two_point: round1(self.two_point),
            five_point: round1(self.five_point),
            ten_point: round1(self.ten_point),
        }
    }
}

impl fmt::Display for BenchmarkReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rounded();
        writeln!(f, "Mean | 1-point | 2-point | 5-point | 10-point")?;
        write!(
            f,
            "{:.1} | {:.1} | {:.1} | {:.1} | {:.1}",
            r.mean, r.one_point, r.two_point, r.five_point, r.ten_point
        )
    }
}

/// Builds the report from per-init mean J&F (percent). The mean uses the
/// unrounded inputs.
pub fn benchmark_report(per_init: &BTreeMap<u32, f64>) -> Result<BenchmarkReport> {
    if let Some(k) = per_init.keys().find(|k| !INIT_SIZES.contains(k)) {
        return Err(Error::Malformed(format!("unexpected initialization size {k}")));
    }
    let get = |k: u32| {
        per_init
            .get(&k)
            .copied()
            .ok_or_else(|| Error::Missing(format!("{k}-point initialization score")))
    };
    let (one, two, five, ten) = (get(1)?, get(2)?, get(5)?, get(10)?);
    Ok(BenchmarkReport {
        mean: (one + two + five + ten) / 4.0,
        one_point: one,
        two_point: two,
        five_point: five,
        ten_point: ten,
    })
}

/// Seen / unseen class aggregation (percent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "J_seen")]
    pub j_seen: f64,
    #[serde(rename = "F_seen")]
    pub f_seen: f64,
    #[serde(rename = "J_unseen")]
    pub j_unseen: f64,
    #[serde(rename = "F_unseen")]
    pub f_unseen: f64,
}

impl SplitReport {
    pub fn from_components(j_seen: f64, f_seen: f64, j_unseen: f64, f_unseen: f64) -> Self {
        SplitReport {
            g: (j_seen + f_seen + j_unseen + f_unseen) / 4.0,
            j_seen,
            f_seen,
            j_unseen,
            f_unseen,
        }
    }

    pub fn rounded(&self) -> Self {
        SplitReport {
            g: round1(self.g),
            j_seen: round1(self.j_seen),
            f_seen: round1(self.f_seen),
            j_unseen: round1(self.j_unseen),
            f_unseen: round1(self.f_unseen),
        }
    }
}

impl fmt::Display for SplitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rounded();
        writeln!(f, "G | J_seen | F_seen | J_unseen | F_unseen")?;
        write!(
            f,
            "{:.1} | {:.1} | {:.1} | {:.1} | {:.1}",
            r.g, r.j_seen, r.f_seen, r.j_unseen, r.f_unseen
        )
    }
}

/// Per-split means of object J and F (scores in [0, 1], report in
/// percent). Every object must carry a split label and both splits must be
/// populated.
pub fn split_report(objects: &[(FrameScore, Option<ClassSplit>)]) -> Result<SplitReport> {
    let mut acc = [(0.0, 0.0, 0usize); 2];
    for (i, (score, split)) in objects.iter().enumerate() {
        let slot = match split {
            Some(ClassSplit::Seen) => 0,
            Some(ClassSplit::Unseen) => 1,
            None => return Err(Error::Missing(format!("seen/unseen label for object {i}"))),
        };
        acc[slot].0 += score.j;
        acc[slot].1 += score.f;
        acc[slot].2 += 1;
    }
    let mean = |slot: usize, name: &str| -> Result<(f64, f64)> {
        let (j, f, n) = acc[slot];
        if n == 0 {
            return Err(Error::Missing(format!("{name} objects")));
        }
        Ok((100.0 * j / n as f64, 100.0 * f / n as f64))
    };
    let (js, fs) = mean(0, "seen")?;
    let (ju, fu) = mean(1, "unseen")?;
    Ok(SplitReport::from_components(js, fs, ju, fu))
}
