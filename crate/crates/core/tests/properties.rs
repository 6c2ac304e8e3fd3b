use pointvos_core::dataset::{
    dataset_stats, select_eval_frames, select_reference_frame, EvalFrames, ObjectAnnotation,
    PointAnnotation, PointLabel, PointSource, ReferenceOutcome, Resolution, VideoRecord,
};
use pointvos_core::mask::{boundary, dilate, distance_transform, distance_transform_with};
use pointvos_core::metrics::{benchmark_report, boundary_f, jaccard, spearman};
use pointvos_core::sampling::{
    generate_candidates_with, partition_probability, sample_fps_from, simulate_point_annotations_with,
    subsample_frames_even, ObjectMasks, SamplerConfig, SimulationConfig, Strategy as PickStrategy,
};
use pointvos_core::{BinaryMask, Execution, Pixel, ProbabilityMap};
use proptest::prelude::*;

fn mask(max: u32) -> impl Strategy<Value = BinaryMask> {
    (1..=max, 1..=max, 0.0..1.0f64).prop_flat_map(|(w, h, density)| {
        proptest::collection::vec(proptest::bool::weighted(density), (w * h) as usize)
            .prop_map(move |bits| BinaryMask::from_bits(w, h, bits).unwrap())
    })
}

fn mask_pair(max: u32) -> impl Strategy<Value = (BinaryMask, BinaryMask)> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        let n = (w * h) as usize;
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(a, b)| (BinaryMask::from_bits(w, h, a).unwrap(), BinaryMask::from_bits(w, h, b).unwrap()))
    })
}

fn prob_map(max: u32) -> impl Strategy<Value = ProbabilityMap> {
    (1..=max, 1..=max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(0.0..=1.0f64, (w * h) as usize)
            .prop_map(move |v| ProbabilityMap::new(w, h, v).unwrap())
    })
}

fn object(counts: &[(usize, usize)]) -> ObjectAnnotation {
    let mut obj = ObjectAnnotation::new(1);
    for (f, &(pos, neg)) in counts.iter().enumerate() {
        let f = f as u32 * 2;
        obj.annotated_frames.push(f);
        for (n, label) in [(pos, PointLabel::Positive), (neg, PointLabel::Negative)] {
            for i in 0..n {
                obj.points.push(PointAnnotation {
                    frame: f,
                    object_id: 1,
                    point: Pixel::new(i as u32, 0),
                    label,
                    source: PointSource::Verified,
                });
            }
        }
    }
    obj
}

proptest! {
    #[test]
    fn dilation_is_extensive_and_monotone(m in mask(24), r1 in 0.0..4.0f64, dr in 0.0..3.0f64) {
        let a = dilate(&m, r1);
        let b = dilate(&m, r1 + dr);
        prop_assert!(m.is_subset_of(&a));
        prop_assert!(a.is_subset_of(&b));
    }

    #[test]
    fn boundary_lies_inside_mask(m in mask(24)) {
        let b = boundary(&m);
        prop_assert!(b.is_subset_of(&m));
        prop_assert_eq!(b.is_empty(), m.is_empty());
    }

    #[test]
    fn distance_field_properties(m in mask(24)) {
        let dt = distance_transform(&m);
        let (w, h) = (m.width(), m.height());
        for y in 0..h {
            for x in 0..w {
                let v = dt.get(x, y);
                prop_assert_eq!(v == 0.0, !m.get(x, y));
                if m.get(x, y) {
                    prop_assert!(v >= 1.0);
                }
                if x + 1 < w {
                    prop_assert!((v - dt.get(x + 1, y)).abs() <= 1.0 + 1e-12);
                }
                if y + 1 < h {
                    prop_assert!((v - dt.get(x, y + 1)).abs() <= 1.0 + 1e-12);
                }
            }
        }
        prop_assert_eq!(dt, distance_transform_with(&m, Execution::Parallel));
    }

    #[test]
    fn fps_second_point_is_farthest(m in mask(20), pick in any::<prop::sample::Index>()) {
        prop_assume!(m.area() >= 2);
        let fg: Vec<(u32, u32)> = m.foreground().collect();
        let (sx, sy) = fg[pick.index(fg.len())];
        let seed = Pixel::new(sx, sy);
        let pts = sample_fps_from(&m, seed, 2).unwrap();
        let d2 = |p: (u32, u32)| (p.0 as i64 - sx as i64).pow(2) + (p.1 as i64 - sy as i64).pow(2);
        let best = fg.iter().copied().max_by_key(|&p| (d2(p), std::cmp::Reverse((p.1, p.0)))).unwrap();
        prop_assert_eq!(pts, vec![seed, Pixel::new(best.0, best.1)]);
    }

    #[test]
    fn partition_is_disjoint_cover(p in prob_map(20), lo in 0.0..0.5f64, gap in 0.01..0.5f64) {
        let parts = partition_probability(&p, lo, lo + gap).unwrap();
        let union = parts.foreground.union(&parts.background).unwrap().union(&parts.uncertain).unwrap();
        prop_assert!(union.is_full());
        prop_assert_eq!(parts.foreground.area() + parts.background.area() + parts.uncertain.area(), p.values().len());
    }

    #[test]
    fn metric_symmetry_and_range((a, b) in mask_pair(20), tol in 0.0..3.0f64) {
        let j = jaccard(&a, &b).unwrap();
        let f = boundary_f(&a, &b, tol).unwrap();
        prop_assert_eq!(j, jaccard(&b, &a).unwrap());
        prop_assert!((f - boundary_f(&b, &a, tol).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&j) && (0.0..=1.0).contains(&f));
    }

    #[test]
    fn boundary_f_translation_invariant((a, b) in mask_pair(12), dx in 0u32..8, dy in 0u32..8, tol in 0.0..3.0f64) {
        // place both masks in the interior of a larger canvas, then shift together
        let place = |m: &BinaryMask, ox: u32, oy: u32| {
            BinaryMask::from_fn(32, 32, |x, y| {
                x >= ox && y >= oy && x - ox < m.width() && y - oy < m.height() && m.get(x - ox, y - oy)
            })
            .unwrap()
        };
        let f0 = boundary_f(&place(&a, 4, 4), &place(&b, 4, 4), tol).unwrap();
        let f1 = boundary_f(&place(&a, 4 + dx, 4 + dy), &place(&b, 4 + dx, 4 + dy), tol).unwrap();
        prop_assert!((f0 - f1).abs() < 1e-12);
    }

    #[test]
    fn spearman_identity_and_antisymmetry(a in proptest::collection::vec(-100.0..100.0f64, 3..30), seed in any::<u64>()) {
        let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| x * 0.5 + ((i as u64 ^ seed) % 7) as f64).collect();
        let distinct = |v: &[f64]| v.iter().any(|&x| x != v[0]);
        prop_assume!(distinct(&a) && distinct(&b));
        prop_assert!((spearman(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = b.iter().map(|x| -x).collect();
        prop_assert!((spearman(&a, &neg).unwrap() + spearman(&a, &b).unwrap()).abs() < 1e-12);
        prop_assert!((spearman(&a, &b).unwrap() - spearman(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn benchmark_mean_is_order_free(v in proptest::array::uniform4(0.0..100.0f64)) {
        let m = |vals: [f64; 4]| benchmark_report(&[1, 2, 5, 10].into_iter().zip(vals).collect()).unwrap().mean;
        let r = [v[3], v[1], v[0], v[2]];
        prop_assert!((m(v) - m(r)).abs() < 1e-9);
        prop_assert!((m(v) - v.iter().sum::<f64>() / 4.0).abs() < 1e-9);
    }

    #[test]
    fn even_subsampling_shape(t in 1usize..200, k in 1usize..20) {
        let f = subsample_frames_even(t, k);
        prop_assert_eq!(f.len(), k.min(t));
        prop_assert!(f.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(f[0], 0);
        if k >= 2 {
            prop_assert_eq!(*f.last().unwrap(), t - 1);
        }
    }

    #[test]
    fn reference_frame_rules_hold(counts in proptest::collection::vec((0usize..10, 0usize..3), 1..10)) {
        let obj = object(&counts);
        if let ReferenceOutcome::Selected(r) = select_reference_frame(&obj) {
            prop_assert!(obj.count_on_frame(r.frame, PointLabel::Positive) >= 7);
            prop_assert_eq!(r.retained_frames[0], r.frame);
        }
    }

    #[test]
    fn eval_frames_contain_trace(frames in proptest::collection::btree_set(0u32..100, 0..20), trace in 0u32..100, reference in 0u32..100) {
        let mut obj = ObjectAnnotation::new(1);
        obj.annotated_frames = frames.into_iter().collect();
        match select_eval_frames(&obj, trace, reference) {
            EvalFrames::Selected(s) => {
                prop_assert!(s.contains(&trace));
                prop_assert!(s.len() <= 3);
                prop_assert!(s.iter().all(|&f| f > reference));
                prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            }
            EvalFrames::Rejected(_) => prop_assert!(trace <= reference),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stats_ignore_video_order(counts in proptest::collection::vec(proptest::collection::vec((0usize..9, 0usize..3), 1..6), 0..6)) {
        let videos: Vec<VideoRecord> = counts
            .iter()
            .enumerate()
            .map(|(i, c)| VideoRecord {
                video_id: format!("v{i}"),
                frame_count: 20,
                resolution: Resolution { width: 16, height: 16 },
                caption: None,
                objects: vec![object(c)],
            })
            .collect();
        let mut rev = videos.clone();
        rev.reverse();
        let a = dataset_stats(&videos, Execution::Sequential);
        prop_assert_eq!(&a, &dataset_stats(&rev, Execution::Parallel));
        prop_assert_eq!(a.videos as usize, videos.len());
        prop_assert_eq!(a.total_points(), counts.iter().flatten().map(|&(p, n)| (p + n) as u64).sum::<u64>());
    }

    #[test]
    fn execution_modes_agree(seed in any::<u64>(), fps in any::<bool>()) {
        let masks: Vec<BinaryMask> = (0..12)
            .map(|t| BinaryMask::from_fn(40, 30, |x, y| (x as i64 - 10 - t).pow(2) + (y as i64 - 15).pow(2) < 50).unwrap())
            .collect();
        let gt = vec![ObjectMasks { object_id: 1, masks: masks.clone() }, ObjectMasks { object_id: 2, masks }];
        let cfg = SimulationConfig {
            seed,
            d: 3.0,
            strategy: if fps { PickStrategy::Fps } else { PickStrategy::Random },
            ..SimulationConfig::default()
        };
        prop_assert_eq!(
            simulate_point_annotations_with(&gt, &cfg, Execution::Sequential).unwrap(),
            simulate_point_annotations_with(&gt, &cfg, Execution::Parallel).unwrap()
        );

        let maps: Vec<ProbabilityMap> = (0..15)
            .map(|t| ProbabilityMap::from_fn(30, 20, |x, y| ((x + y + t) % 11) as f64 / 10.0).unwrap())
            .collect();
        let scfg = SamplerConfig { rng_seed: seed, d: 2.0, ..SamplerConfig::default() };
        prop_assert_eq!(
            generate_candidates_with(3, &maps, &scfg, Execution::Sequential).unwrap(),
            generate_candidates_with(3, &maps, &scfg, Execution::Parallel).unwrap()
        );
    }
}
