use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pointvos_core::dataset::{dataset_stats, ObjectAnnotation, PointAnnotation, PointLabel, PointSource, Resolution, VideoRecord};
use pointvos_core::mask::distance_transform_with;
use pointvos_core::metrics::study::{run_sparse_dense_study, StudyConfig};
use pointvos_core::metrics::{evaluate_objects, ObjectEval};
use pointvos_core::sampling::{generate_candidates_with, SamplerConfig};
use pointvos_core::{BinaryMask, Execution, Pixel, ProbabilityMap};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn blob(w: u32, h: u32, cx: f64, cy: f64, r: f64) -> BinaryMask {
    BinaryMask::from_fn(w, h, |x, y| (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2) <= r * r).unwrap()
}

fn bench_distance(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance_transform");
    let m = blob(1280, 720, 640.0, 360.0, 300.0);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::new(name, "1280x720"), |b| b.iter(|| distance_transform_with(black_box(&m), exec)));
    }
    g.finish();
}

fn bench_evaluate(c: &mut Criterion) {
    let mut g = c.benchmark_group("evaluate_objects");
    let objects: Vec<ObjectEval> = (0..64)
        .map(|i| {
            let mut preds = BTreeMap::new();
            let mut gts = BTreeMap::new();
            for f in 0..3u32 {
                let shift = (i % 7) as f64 + f as f64;
                gts.insert(f, blob(320, 240, 160.0, 120.0, 60.0));
                preds.insert(f, blob(320, 240, 160.0 + shift, 120.0, 58.0));
            }
            ObjectEval { preds, gts }
        })
        .collect();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| evaluate_objects(black_box(&objects), None, exec).unwrap()));
    }
    g.finish();
}

fn bench_candidates(c: &mut Criterion) {
    let mut g = c.benchmark_group("generate_candidates");
    let maps: Vec<ProbabilityMap> = (0..40)
        .map(|t| {
            ProbabilityMap::from_fn(640, 360, |x, y| {
                let d2 = (x as f64 - 300.0 - t as f64).powi(2) + (y as f64 - 180.0).powi(2);
                (-d2 / 8000.0).exp()
            })
            .unwrap()
        })
        .collect();
    let cfg = SamplerConfig::default();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| generate_candidates_with(1, black_box(&maps), &cfg, exec).unwrap()));
    }
    g.finish();
}

fn bench_stats(c: &mut Criterion) {
    let mut g = c.benchmark_group("dataset_stats");
    let videos: Vec<VideoRecord> = (0..2000)
        .map(|v| {
            let objects = (0..4)
                .map(|o| {
                    let mut obj = ObjectAnnotation::new(o);
                    obj.annotated_frames = (0..10).map(|f| f * 3).collect();
                    for &f in &obj.annotated_frames.clone() {
                        for i in 0..20 {
                            obj.points.push(PointAnnotation {
                                frame: f,
                                object_id: o,
                                point: Pixel::new(i, i),
                                label: if i % 2 == 0 { PointLabel::Positive } else { PointLabel::Negative },
                                source: PointSource::Verified,
                            });
                        }
                    }
                    obj
                })
                .collect();
            VideoRecord {
                video_id: format!("v{v}"),
                frame_count: 30,
                resolution: Resolution { width: 64, height: 64 },
                caption: None,
                objects,
            }
        })
        .collect();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| dataset_stats(black_box(&videos), exec)));
    }
    g.finish();
}

fn bench_study(c: &mut Criterion) {
    let mut g = c.benchmark_group("sparse_dense_study");
    g.sample_size(10);
    let cfg = StudyConfig { methods: 6, videos: 8, frames: 20, ..StudyConfig::default() };
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| run_sparse_dense_study(black_box(&cfg), exec).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, bench_distance, bench_evaluate, bench_candidates, bench_stats, bench_study);
criterion_main!(benches);
