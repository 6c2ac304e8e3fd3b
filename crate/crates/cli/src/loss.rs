use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use pointvos_core::mask::io::read_probability_map;
use pointvos_core::train::{
    bilinear_taps, huberised_ce, pixel_gradients, pointwise_ce, LabeledPoint, DEFAULT_EPS, DEFAULT_TAU,
};
use pointvos_core::ProbabilityMap;

#[derive(Debug, Subcommand)]
pub enum LossCmd {
    /// Loss, per-point gradients and a finite-difference comparison.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Probability map (PVPM or 8-bit PNG).
    #[arg(long)]
    map: PathBuf,
    /// JSON array of `{"x", "y", "label"}` in continuous pixel coordinates.
    #[arg(long)]
    points: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    eps: f64,
    #[arg(long, default_value_t = DEFAULT_TAU)]
    tau: f64,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-5)]
    step: f64,
}

pub fn run(cmd: LossCmd) -> Result<()> {
    match cmd {
        LossCmd::Check(a) => check(a),
    }
}

fn g9(x: f64) -> String {
    format!("{x:.8e}")
}

fn check(a: CheckArgs) -> Result<()> {
    let map = read_probability_map(&a.map)?;
    let text = fs::read_to_string(&a.points).with_context(|| format!("reading {}", a.points.display()))?;
    let pts: Vec<LabeledPoint> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", a.points.display()))?;
    let result = pointwise_ce(&map, &pts, a.eps)?;
    let grads = pixel_gradients(&map, &pts, &result)?;

    println!("loss {}", g9(result.loss));
    println!("{:>5} {:>10} {:>10} {:>8} {:>16} {:>16} {:>16} {:>16}", "point", "x", "y", "label", "q", "dL/dq", "huber", "d huber/dq");
    for (i, (lp, (q, g))) in pts.iter().zip(result.samples.iter().zip(&result.gradients)).enumerate() {
        let (hl, hg) = huberised_ce(q.clamp(0.0, 1.0), lp.label, a.tau)?;
        println!(
            "{i:>5} {:>10} {:>10} {:>8} {:>16} {:>16} {:>16} {:>16}",
            lp.point.x,
            lp.point.y,
            format!("{:?}", lp.label).to_lowercase(),
            g9(*q),
            g9(*g),
            g9(hl),
            g9(hg)
        );
    }

    let mut pixels = BTreeSet::new();
    for lp in &pts {
        for (idx, w) in bilinear_taps(map.width(), map.height(), lp.point)? {
            if w != 0.0 {
                pixels.insert(idx);
            }
        }
    }
    println!();
    println!("{:>6} {:>6} {:>16} {:>16} {:>16}", "px", "py", "analytic", "numeric", "rel err");
    let mut worst: f64 = 0.0;
    for idx in pixels {
        let numeric = central_difference(&map, &pts, idx, a.step, a.eps)?;
        let analytic = grads[idx];
        let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-12);
        worst = worst.max(rel);
        let w = map.width() as usize;
        println!("{:>6} {:>6} {:>16} {:>16} {:>16}", idx % w, idx / w, g9(analytic), g9(numeric), g9(rel));
    }
    println!("max rel err {}", g9(worst));
    Ok(())
}

/// Derivative of the loss with respect to one pixel value, one-sided where
/// the step would leave [0, 1].
fn central_difference(map: &ProbabilityMap, pts: &[LabeledPoint], idx: usize, h: f64, eps: f64) -> Result<f64> {
    let v = map.values()[idx];
    let (lo, hi) = ((v - h).max(0.0), (v + h).min(1.0));
    let at = |x: f64| -> Result<f64> {
        let mut values = map.values().to_vec();
        values[idx] = x;
        let m = ProbabilityMap::new(map.width(), map.height(), values)?;
        Ok(pointwise_ce(&m, pts, eps)?.loss)
    };
    Ok((at(hi)? - at(lo)?) / (hi - lo))
}
