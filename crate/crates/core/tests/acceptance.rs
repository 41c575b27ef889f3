//! Acceptance suite: one test per release criterion, each ending in a
//! single pass line (a panic marks the criterion failed).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aerodet::annot::{
    load_dataset, parse_annotation_line, AnnotationRecord, CategoryTaxonomy, LoadOptions,
};
use aerodet::cfg::{iterations_per_epoch, lr_at, parse_cfg, render_cfg, transfer_plan, TrainSchedule};
use aerodet::decode::{decode_layer, nms_greedy, spp_pool, Detection, FeatureMap, YoloLayerSpec};
use aerodet::eval::{evaluate, read_detection_dir, EvalConfig, EvalDetection};
use aerodet::geometry::{from_network, iou, letterbox_map, to_network, PixelBox};
use aerodet::harness::{
    measure_fps, parse_series_csv, run_sweep, select_checkpoint, BackendSpec, SweepOptions,
    TimingSample,
};

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

// ---------------------------------------------------------------- 1 ----

/// Independent brute-force AP at one IoU threshold: greedy matching and a
/// literal 101-stop max-precision scan, written from scratch against the
/// documented semantics rather than sharing code with the engine.
fn oracle_ap50(
    images: &[(Vec<AnnotationRecord>, Vec<EvalDetection>)],
    category: u8,
    taxonomy: &CategoryTaxonomy,
) -> Option<f64> {
    let threshold = 0.5;
    let mut pooled: Vec<(f64, [f64; 4], u8)> = Vec::new(); // score, box, flag 0=tp 1=fp 2=ign
    let mut num_gt = 0usize;

    for (gts, dets) in images {
        let evaluable: Vec<&AnnotationRecord> = gts
            .iter()
            .filter(|r| {
                r.score_flag == 1
                    && r.category_id == category
                    && taxonomy.is_evaluable(r.category_id)
                    && r.width > 0
                    && r.height > 0
            })
            .collect();
        num_gt += evaluable.len();
        let ignorable: Vec<&AnnotationRecord> = gts
            .iter()
            .filter(|r| r.score_flag == 0 || !taxonomy.is_evaluable(r.category_id))
            .collect();

        let mut ordered: Vec<&EvalDetection> =
            dets.iter().filter(|d| d.category_id == category).collect();
        ordered.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap()
                .then_with(|| {
                    [a.bbox.left, a.bbox.top, a.bbox.width, a.bbox.height]
                        .partial_cmp(&[b.bbox.left, b.bbox.top, b.bbox.width, b.bbox.height])
                        .unwrap()
                })
        });

        let mut taken = vec![false; evaluable.len()];
        for det in ordered {
            let mut best: Option<(usize, f64)> = None;
            for (i, gt) in evaluable.iter().enumerate() {
                if taken[i] {
                    continue;
                }
                let o = iou(&det.bbox, &gt.pixel_box());
                if o >= threshold && best.map(|(_, b)| o > b).unwrap_or(true) {
                    best = Some((i, o));
                }
            }
            let flag = match best {
                Some((i, _)) => {
                    taken[i] = true;
                    0
                }
                None => {
                    if ignorable
                        .iter()
                        .any(|g| iou(&det.bbox, &g.pixel_box()) >= threshold)
                    {
                        2
                    } else {
                        1
                    }
                }
            };
            pooled.push((
                det.score,
                [det.bbox.left, det.bbox.top, det.bbox.width, det.bbox.height],
                flag,
            ));
        }
    }

    if num_gt == 0 {
        return None;
    }
    pooled.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then_with(|| a.1.partial_cmp(&b.1).unwrap()));
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut points: Vec<(f64, f64)> = Vec::new(); // recall, precision
    for &(_, _, flag) in &pooled {
        match flag {
            0 => tp += 1,
            1 => fp += 1,
            _ => continue,
        }
        points.push((tp as f64 / num_gt as f64, tp as f64 / (tp + fp) as f64));
    }
    let mut ap = 0.0;
    for stop in 0..=100 {
        let r = stop as f64 / 100.0;
        let best = points
            .iter()
            .filter(|(rec, _)| *rec >= r - 1e-12)
            .map(|(_, p)| *p)
            .fold(0.0_f64, f64::max);
        ap += best;
    }
    Some(ap / 101.0)
}

fn record(line: &str) -> AnnotationRecord {
    parse_annotation_line(line, 1).unwrap()
}

#[test]
fn acceptance_01_metric_oracle_equivalence() {
    let started = Instant::now();
    let taxonomy = CategoryTaxonomy::default();
    let mut config = EvalConfig::default();
    config.iou_thresholds = vec![0.5];

    // box palette with heavy mutual overlap plus ignore material
    let gt_palette = [
        "0,0,10,10,1,4,0,0",
        "5,0,10,10,1,4,0,0",
        "0,5,10,10,1,4,1,1",
        "2,2,8,8,1,4,0,0",
        "20,20,10,10,1,4,0,0",
        "0,0,10,10,1,9,0,0",
        "0,0,30,30,0,0,0,0", // ignored region
        "40,40,4,4,1,11,0,0", // others: ignore zone for evaluation
    ];
    let det_palette: [[f64; 4]; 8] = [
        [0.0, 0.0, 10.0, 10.0],
        [5.0, 0.0, 10.0, 10.0],
        [1.0, 1.0, 10.0, 10.0],
        [2.0, 2.0, 8.0, 8.0],
        [20.0, 20.0, 10.0, 10.0],
        [6.0, 1.0, 9.0, 10.0],
        [5.0, 5.0, 22.0, 22.0],
        [60.0, 60.0, 5.0, 5.0],
    ];
    let scores = [0.2, 0.4, 0.6, 0.8];

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0usize;
    for _ in 0..4000 {
        let num_images = rng.gen_range(1..=3);
        let mut gt_budget = 6usize;
        let mut det_budget = 6usize;
        let mut images = Vec::new();
        for _ in 0..num_images {
            let n_gt = rng.gen_range(0..=gt_budget);
            let n_det = rng.gen_range(0..=det_budget);
            gt_budget -= n_gt;
            det_budget -= n_det;
            let gts: Vec<AnnotationRecord> = (0..n_gt)
                .map(|_| record(gt_palette[rng.gen_range(0..gt_palette.len())]))
                .collect();
            let dets: Vec<EvalDetection> = (0..n_det)
                .map(|_| {
                    let b = det_palette[rng.gen_range(0..det_palette.len())];
                    EvalDetection {
                        bbox: PixelBox::new(b[0], b[1], b[2], b[3]),
                        score: scores[rng.gen_range(0..scores.len())],
                        category_id: if rng.gen_bool(0.8) { 4 } else { 9 },
                    }
                })
                .collect();
            images.push((gts, dets));
        }

        let index = aerodet::annot::DatasetIndex {
            images: images
                .iter()
                .enumerate()
                .map(|(i, (gts, _))| aerodet::annot::ImageEntry {
                    image_id: format!("im{i}"),
                    annotation_path: PathBuf::new(),
                    image_path: None,
                    dims: None,
                    annotations: gts.clone(),
                })
                .collect(),
            skipped: vec![],
        };
        let det_map: BTreeMap<String, Vec<EvalDetection>> = images
            .iter()
            .enumerate()
            .map(|(i, (_, dets))| (format!("im{i}"), dets.clone()))
            .collect();

        let report = evaluate(&index, &det_map, &taxonomy, &config, false);
        for cat in [4u8, 9u8] {
            let engine = report
                .categories
                .iter()
                .find(|c| c.category_id == cat)
                .unwrap()
                .ap_per_threshold[0];
            let oracle = oracle_ap50(&images, cat, &taxonomy);
            match (engine, oracle) {
                (None, None) => {}
                (Some(e), Some(o)) => assert!(
                    (e - o).abs() < 1e-9,
                    "case {cases} cat {cat}: engine {e} oracle {o}"
                ),
                other => panic!("case {cases} cat {cat}: definedness mismatch {other:?}"),
            }
            cases += 1;
        }
    }
    assert!(started.elapsed().as_secs() < 60, "oracle sweep too slow");
    println!("acceptance 01 metric-oracle-equivalence ({cases} comparisons): PASS");
}

// ---------------------------------------------------------------- 2 ----

#[test]
fn acceptance_02_training_arithmetic() {
    assert_eq!(iterations_per_epoch(7019, 64), 110);

    let text = std::fs::read_to_string(fixture("stock.cfg")).unwrap();
    let doc = parse_cfg(&text).unwrap();
    let schedule = TrainSchedule::from_doc(&doc).unwrap();
    assert_eq!(schedule.burn_in, 1000);
    for it in [1000, 1001, 5000, 20000] {
        assert!((lr_at(it, &schedule) - 0.001).abs() < 1e-15);
    }
    assert!(lr_at(999, &schedule) < 0.001);

    let fps_of = |ms: f64| {
        measure_fps(&[TimingSample {
            image_id: "x".into(),
            latency_ms: ms,
            resolution: 416,
        }])
        .fps
    };
    let f416 = fps_of(114.0);
    assert!((f416 - 8.77).abs() <= 0.1, "{f416}");
    let f1120 = fps_of(435.0);
    assert!((f1120 - 2.30).abs() <= 0.05, "{f1120}");

    println!("acceptance 02 training-arithmetic: PASS");
}

// ---------------------------------------------------------------- 3 ----

#[test]
fn acceptance_03_aggregate_metrics_fixture() {
    let options = LoadOptions {
        dims_file: Some(fixture("table1/dims.csv")),
        ..LoadOptions::default()
    };
    let index = load_dataset(&fixture("table1/annotations"), &options).unwrap();
    assert!(index.skipped.is_empty(), "{:?}", index.skipped);
    let dets = read_detection_dir(&fixture("table1/detections")).unwrap();
    let report = evaluate(
        &index,
        &dets,
        &CategoryTaxonomy::default(),
        &EvalConfig::default(),
        false,
    );

    let checks = [
        ("mAP", report.map, 18.50),
        ("AP50", report.ap50.unwrap(), 35.72),
        ("AP75", report.ap75.unwrap(), 17.93),
        ("AR1", report.ar_at(1).unwrap(), 1.80),
        ("AR10", report.ar_at(10).unwrap(), 13.40),
        ("AR100", report.ar_at(100).unwrap(), 30.11),
        ("AR500", report.ar_at(500).unwrap(), 30.59),
    ];
    for (name, got, want) in checks {
        let pct = got * 100.0;
        assert!(
            (pct - want).abs() <= 0.01,
            "{name}: got {pct:.4}, pinned {want}"
        );
    }
    println!("acceptance 03 aggregate-metrics-fixture: PASS");
}

// ---------------------------------------------------------------- 4 ----

#[test]
fn acceptance_04_decode_closed_form() {
    // zero logits decode to cell centers with exact anchor dims
    for &(gw, gh, stride) in &[(13usize, 13usize, 32usize), (26, 26, 16), (52, 52, 8), (5, 3, 32)] {
        let spec = YoloLayerSpec {
            grid_w: gw,
            grid_h: gh,
            stride,
            anchors: vec![(12.0, 16.0), (40.0, 28.0)],
            num_categories: 10,
        };
        let raw = FeatureMap::new(spec.expected_channels(), gh, gw);
        let dets = decode_layer(&raw, &spec, 0.0).unwrap();
        assert_eq!(dets.len(), gw * gh * 2);
        for d in &dets {
            let (cx, cy) = d.bbox.center();
            let fx = cx / stride as f64 - 0.5;
            let fy = cy / stride as f64 - 0.5;
            assert!((fx - fx.round()).abs() < 1e-9, "center not on half-cell grid");
            assert!((fy - fy.round()).abs() < 1e-9);
            let anchor_ok = ((d.bbox.width - 12.0).abs() < 1e-9
                && (d.bbox.height - 16.0).abs() < 1e-9)
                || ((d.bbox.width - 40.0).abs() < 1e-9 && (d.bbox.height - 28.0).abs() < 1e-9);
            assert!(anchor_ok, "anchor dims not preserved: {:?}", d.bbox);
        }
    }

    // translation equivariance: the same logit block at a different cell
    // decodes to the same box shifted by a whole number of strides
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = YoloLayerSpec {
        grid_w: 8,
        grid_h: 8,
        stride: 16,
        anchors: vec![(20.0, 30.0)],
        num_categories: 3,
    };
    let per_anchor = 5 + 3;
    for _ in 0..10_000 {
        let logits: Vec<f32> = (0..per_anchor).map(|_| rng.gen_range(-6.0..6.0)).collect();
        let (x1, y1) = (rng.gen_range(0..8), rng.gen_range(0..8));
        let (x2, y2) = (rng.gen_range(0..8), rng.gen_range(0..8));
        let mut map = FeatureMap::new(per_anchor, 8, 8);
        for (c, &v) in logits.iter().enumerate() {
            map.set(c, y1, x1, v);
            map.set(c, y2, x2, v);
        }
        let dets = decode_layer(&map, &spec, f64::NEG_INFINITY.exp()).unwrap();
        let find = |x: usize, y: usize| -> &Detection {
            dets.iter()
                .find(|d| {
                    let (cx, cy) = d.bbox.center();
                    (cx / 16.0).floor() as usize == x && (cy / 16.0).floor() as usize == y
                })
                .unwrap()
        };
        let a = find(x1, y1);
        let b = find(x2, y2);
        let dx = (x2 as f64 - x1 as f64) * 16.0;
        let dy = (y2 as f64 - y1 as f64) * 16.0;
        assert!((a.bbox.left + dx - b.bbox.left).abs() < 1e-6);
        assert!((a.bbox.top + dy - b.bbox.top).abs() < 1e-6);
        assert!((a.bbox.width - b.bbox.width).abs() < 1e-6);
        assert!((a.bbox.height - b.bbox.height).abs() < 1e-6);
        assert!((a.score - b.score).abs() < 1e-6);
        assert_eq!(a.category_index, b.category_index);
    }
    println!("acceptance 04 decode-closed-form: PASS");
}

// ---------------------------------------------------------------- 5 ----

fn nms_reference(dets: &[Detection], threshold: f64, class_aware: bool) -> Vec<Detection> {
    // O(n^2) restatement: repeatedly take the best remaining detection and
    // erase everything it suppresses
    let mut remaining: Vec<(usize, &Detection)> = dets.iter().enumerate().collect();
    let mut kept: Vec<Detection> = Vec::new();
    while !remaining.is_empty() {
        let best_pos = remaining
            .iter()
            .enumerate()
            .min_by(|(_, (ia, a)), (_, (ib, b))| {
                b.score
                    .partial_cmp(&a.score)
                    .unwrap()
                    .then(a.category_index.cmp(&b.category_index))
                    .then(ia.cmp(ib))
            })
            .map(|(pos, _)| pos)
            .unwrap();
        let (_, best) = remaining.remove(best_pos);
        remaining.retain(|(_, d)| {
            if class_aware && d.category_index != best.category_index {
                return true;
            }
            iou(&d.bbox, &best.bbox) < threshold
        });
        kept.push(best.clone());
    }
    kept
}

#[test]
fn acceptance_05_nms_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for case in 0..1000 {
        let n = if case % 10 == 0 {
            rng.gen_range(100..=200)
        } else {
            rng.gen_range(0..=60)
        };
        let dets: Vec<Detection> = (0..n)
            .map(|_| Detection {
                bbox: PixelBox::new(
                    rng.gen_range(0.0..80.0),
                    rng.gen_range(0.0..80.0),
                    rng.gen_range(1.0..40.0),
                    rng.gen_range(1.0..40.0),
                ),
                space: aerodet::decode::BoxSpace::Image,
                score: (rng.gen_range(0..=20) as f64) / 20.0, // deliberate ties
                category_index: rng.gen_range(0..3),
            })
            .collect();
        for class_aware in [true, false] {
            let engine = nms_greedy(&dets, 0.45, class_aware);
            let reference = nms_reference(&dets, 0.45, class_aware);
            assert_eq!(engine.len(), reference.len(), "case {case}");
            for (e, r) in engine.iter().zip(&reference) {
                assert_eq!(e.bbox, r.bbox, "case {case}");
                assert_eq!(e.score, r.score);
                assert_eq!(e.category_index, r.category_index);
            }
        }
    }
    println!("acceptance 05 nms-equivalence: PASS");
}

// ---------------------------------------------------------------- 6 ----

#[test]
fn acceptance_06_spp_shape_and_idempotence() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut map = FeatureMap::new(4, 19, 19);
    for c in 0..4 {
        for y in 0..19 {
            for x in 0..19 {
                map.set(c, y, x, rng.gen_range(-5.0..5.0));
            }
        }
    }
    let pooled = spp_pool(&map, &[5, 9, 13]).unwrap();
    assert_eq!((pooled.height, pooled.width), (19, 19));
    assert_eq!(pooled.channels, 4 * 4); // pass-through + three pooled blocks

    let mut flat = FeatureMap::new(2, 13, 13);
    for c in 0..2 {
        for y in 0..13 {
            for x in 0..13 {
                flat.set(c, y, x, 3.25);
            }
        }
    }
    let pooled = spp_pool(&flat, &[5, 9, 13]).unwrap();
    for c in 0..pooled.channels {
        for y in 0..13 {
            for x in 0..13 {
                assert_eq!(pooled.get(c, y, x), 3.25);
            }
        }
    }
    println!("acceptance 06 spp-shape-idempotence: PASS");
}

// ---------------------------------------------------------------- 7 ----

#[test]
fn acceptance_07_round_trips() {
    // config: byte-identical
    let text = std::fs::read_to_string(fixture("stock.cfg")).unwrap();
    let doc = parse_cfg(&text).unwrap();
    assert_eq!(render_cfg(&doc), text, "config round trip not byte-identical");
    let plan = transfer_plan(&doc, 137).unwrap();
    assert_eq!((plan.load_count, plan.init_count), (137, 25));

    // letterbox: box round trip within half a pixel
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..10_000 {
        let src = (rng.gen_range(100..4000), rng.gen_range(100..4000));
        let net = 32 * rng.gen_range(5..40);
        let t = letterbox_map(src, (net, net));
        let left = rng.gen_range(0.0..src.0 as f64 - 1.0);
        let top = rng.gen_range(0.0..src.1 as f64 - 1.0);
        let b = PixelBox::new(
            left,
            top,
            rng.gen_range(0.5..(src.0 as f64 - left)),
            rng.gen_range(0.5..(src.1 as f64 - top)),
        );
        let back = from_network(&to_network(&b, &t), &t);
        for (x, y) in [
            (b.left, back.left),
            (b.top, back.top),
            (b.width, back.width),
            (b.height, back.height),
        ] {
            assert!((x - y).abs() <= 0.5, "letterbox drift {x} -> {y}");
        }
    }

    // annotation record identity
    for line in [
        "684,8,273,116,0,0,0,0",
        "10,20,30,40,1,4,1,2",
        "0,0,1,1,1,10,2,0",
        "-5,-3,50,60,1,7,0,1",
    ] {
        let rec = parse_annotation_line(line, 1).unwrap();
        assert_eq!(aerodet::annot::render_annotation_line(&rec), line);
    }
    println!("acceptance 07 round-trips: PASS");
}

// ---------------------------------------------------------------- 8 ----

#[test]
fn acceptance_08_sweep_protocol_end_to_end() {
    let started = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let ann = tmp.path().join("ann");
    std::fs::create_dir(&ann).unwrap();
    std::fs::write(
        ann.join("a.txt"),
        "10,10,50,80,1,1,0,0\n200,50,60,60,1,4,0,0\n400,100,30,30,1,10,0,0\n",
    )
    .unwrap();
    std::fs::write(ann.join("b.txt"), "5,5,40,40,1,4,0,0\n90,90,80,50,1,5,0,0\n").unwrap();
    std::fs::write(ann.join("c.txt"), "300,300,100,100,1,9,0,0\n").unwrap();

    let spec = BackendSpec {
        command_template: format!(
            "{} backend-echo --ann {} --resolution {{res}}",
            env!("CARGO_BIN_EXE_aerodet"),
            ann.display()
        ),
        ..Default::default()
    };
    let index = load_dataset(&ann, &LoadOptions::default()).unwrap();
    let run = || {
        run_sweep(
            &[416, 768, 1120],
            &index,
            &spec,
            &CategoryTaxonomy::default(),
            &EvalConfig::default(),
            &SweepOptions::default(),
        )
        .unwrap()
    };
    let first = run();
    assert_eq!(first.rows.len(), 3);
    for row in &first.rows {
        assert!(row.ok, "resolution {} failed", row.resolution);
        assert_eq!(row.images_skipped, 0);
        let ap50 = row.ap50.unwrap();
        assert!((ap50 - 1.0).abs() < 1e-9, "AP50 {ap50} at {}", row.resolution);
    }
    let second = run();
    assert_eq!(
        first.to_metrics_csv(),
        second.to_metrics_csv(),
        "metrics CSV must be deterministic across runs"
    );
    assert!(started.elapsed().as_secs() < 30, "sweep too slow");
    println!("acceptance 08 sweep-protocol-end-to-end: PASS");
}

// ---------------------------------------------------------------- 9 ----

#[test]
fn acceptance_09_checkpoint_selection() {
    let series = parse_series_csv(&fixture("series.csv")).unwrap();
    assert_eq!(select_checkpoint(&series).unwrap(), 8000);
    println!("acceptance 09 checkpoint-selection: PASS");
}

// --------------------------------------------------------------- 10 ----

#[test]
fn acceptance_10_visdrone_category_order() {
    let dir = match std::env::var_os("VISDRONE_DIR") {
        Some(d) => PathBuf::from(d),
        None => {
            println!(
                "acceptance 10 visdrone-category-order: SKIPPED \
                 (set VISDRONE_DIR to the trainset root to enable)"
            );
            return;
        }
    };
    let ann = if dir.join("annotations").is_dir() {
        dir.join("annotations")
    } else {
        dir.clone()
    };
    let index = load_dataset(&ann, &LoadOptions::default()).unwrap();
    let taxonomy = CategoryTaxonomy::default();
    let stats = aerodet::annot::dataset_stats(&index, &taxonomy);
    let order = stats.categories_by_count();
    let expected = [
        "car",
        "pedestrian",
        "motor",
        "person",
        "van",
        "truck",
        "bicycle",
        "bus",
        "tricycle",
        "awning-tricycle",
    ];
    assert_eq!(order, expected);
    println!("acceptance 10 visdrone-category-order: PASS");
}
