use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use pointvos_core::dataset::{save_dataset, Dataset, Resolution, VideoRecord};
use pointvos_core::mask::io::{read_mask_png, read_probability_map};
use pointvos_core::rng::RNG_ALGORITHM;
use pointvos_core::sampling::{
    generate_candidates_with, simulate_point_annotations_with, CandidateSet, FrameSampling,
    ObjectMasks, SamplerConfig, SimulationConfig, Strategy,
};
use pointvos_core::{BinaryMask, Execution, ProbabilityMap};
use serde::Serialize;
use serde_json::json;

use crate::tree::{frame_files, subdirs, video_tree};

#[derive(Debug, Subcommand)]
pub enum SampleCmd {
    /// Simulate point annotations from dense ground-truth masks.
    Simulate(SimulateArgs),
    /// Propose verification candidates from per-frame probability maps.
    Candidates(CandidatesArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Random,
    Fps,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FramesArg {
    Even,
    Random,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Mask tree `<video>/<object>/<frame>.png`.
    #[arg(long)]
    gt: PathBuf,
    /// Positive points per object and frame.
    #[arg(long, default_value_t = 10)]
    points: usize,
    /// Negative points per object and frame; defaults to `--points`.
    #[arg(long)]
    negatives: Option<usize>,
    #[arg(long, default_value_t = 10)]
    frames: usize,
    #[arg(long, default_value_t = 20.0)]
    dist: f64,
    #[arg(long, value_enum, default_value = "random")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "even")]
    frame_sampling: FramesArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CandidatesArgs {
    /// Either `<frame>.{pvpm,png}` files for one object, or one
    /// sub-directory per object id containing such files.
    #[arg(long)]
    probmaps: PathBuf,
    /// TOML sampler configuration; missing keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Object id used when `--probmaps` holds a single object.
    #[arg(long, default_value_t = 1)]
    object_id: u32,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: SampleCmd, exec: Execution) -> Result<()> {
    match cmd {
        SampleCmd::Simulate(a) => simulate(a, exec),
        SampleCmd::Candidates(a) => candidates(a, exec),
    }
}

fn load_video_masks(video: &str, objects: &BTreeMap<u32, BTreeMap<u32, PathBuf>>) -> Result<Vec<ObjectMasks>> {
    let frame_count = objects
        .values()
        .filter_map(|f| f.keys().next_back())
        .max()
        .map(|&m| m as usize + 1)
        .with_context(|| format!("video {video}: no mask files"))?;
    let mut shape: Option<(u32, u32)> = None;
    let mut out = Vec::new();
    for (&object_id, frames) in objects {
        let mut masks = vec![None; frame_count];
        for (&f, path) in frames {
            let m = read_mask_png(path)?;
            let dims = (m.width(), m.height());
            match shape {
                None => shape = Some(dims),
                Some(s) => ensure!(s == dims, "{}: size {:?} differs from {:?}", path.display(), dims, s),
            }
            masks[f as usize] = Some(m);
        }
        out.push((object_id, masks));
    }
    let (w, h) = shape.expect("at least one mask was read");
    // frames without a file mean the object is absent there
    out.into_iter()
        .map(|(object_id, masks)| {
            let masks = masks
                .into_iter()
                .map(|m| m.map_or_else(|| BinaryMask::new(w, h), Ok))
                .collect::<pointvos_core::Result<Vec<_>>>()?;
            Ok(ObjectMasks { object_id, masks })
        })
        .collect()
}

fn simulate(a: SimulateArgs, exec: Execution) -> Result<()> {
    let cfg = SimulationConfig {
        n_positive: a.points,
        n_negative: a.negatives.unwrap_or(a.points),
        d: a.dist,
        k_frames: a.frames,
        strategy: match a.strategy {
            StrategyArg::Random => Strategy::Random,
            StrategyArg::Fps => Strategy::Fps,
        },
        frame_sampling: match a.frame_sampling {
            FramesArg::Even => FrameSampling::Even,
            FramesArg::Random => FrameSampling::Random,
        },
        seed: a.seed,
    };
    let tree = video_tree(&a.gt, &["png"])?;
    if tree.is_empty() {
        bail!("{}: no video directories", a.gt.display());
    }
    let mut videos = Vec::new();
    for (video_id, objects) in &tree {
        let gt = load_video_masks(video_id, objects)?;
        let first = &gt[0].masks[0];
        let resolution = Resolution { width: first.width(), height: first.height() };
        let frame_count = gt[0].masks.len() as u32;
        let objects = simulate_point_annotations_with(&gt, &cfg, exec)
            .with_context(|| format!("simulating video {video_id}"))?;
        videos.push(VideoRecord { video_id: video_id.clone(), frame_count, resolution, caption: None, objects });
    }
    let mut ds = Dataset::new(videos);
    ds.metadata.insert("generator".into(), json!("sample simulate"));
    ds.metadata.insert("rng_algorithm".into(), json!(RNG_ALGORITHM));
    ds.metadata.insert("simulation".into(), serde_json::to_value(&cfg)?);
    save_dataset(&ds, &a.out)?;
    log::info!("wrote {} videos to {}", ds.videos.len(), a.out.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct CandidateOutput {
    rng_algorithm: &'static str,
    config: SamplerConfig,
    objects: Vec<CandidateSet>,
}

fn load_maps(dir: &Path) -> Result<Vec<ProbabilityMap>> {
    let files = frame_files(dir, &["pvpm", "png"])?;
    ensure!(!files.is_empty(), "{}: no probability maps", dir.display());
    let expected: Vec<u32> = (0..files.len() as u32).collect();
    ensure!(
        files.keys().copied().eq(expected),
        "{}: frames must be numbered 0..{} without gaps",
        dir.display(),
        files.len()
    );
    files.values().map(|p| Ok(read_probability_map(p)?)).collect()
}

fn candidates(a: CandidatesArgs, exec: Execution) -> Result<()> {
    let config: SamplerConfig = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => SamplerConfig::default(),
    };
    config.validate()?;
    let dirs = subdirs(&a.probmaps)?;
    let jobs: Vec<(u32, PathBuf)> = if dirs.is_empty() {
        vec![(a.object_id, a.probmaps.clone())]
    } else {
        dirs.into_iter()
            .map(|(name, p)| Ok((name.parse().with_context(|| format!("{}: object directory must be numeric", p.display()))?, p)))
            .collect::<Result<_>>()?
    };
    let mut objects = Vec::new();
    for (id, dir) in jobs {
        let maps = load_maps(&dir)?;
        objects.push(generate_candidates_with(id, &maps, &config, exec)?);
    }
    let out = CandidateOutput { rng_algorithm: RNG_ALGORITHM, config, objects };
    fs::write(&a.out, serde_json::to_string_pretty(&out)?).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}
