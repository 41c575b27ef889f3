use std::collections::BTreeMap;

use serde::Serialize;

use crate::annot::{CategoryTaxonomy, DatasetIndex};
use crate::eval::config::EvalConfig;
use crate::eval::curve::{average_precision, f1_score, pr_curve, PrCurve};
use crate::eval::detfile::EvalDetection;
use crate::eval::matching::{det_order, match_image, DetFlag, MatchSlice};

#[derive(Debug, Clone, Serialize)]
pub struct CategoryEval {
    pub name: String,
    pub category_id: u8,
    pub num_gt: usize,
    /// AP at each configured threshold; `None` when the category has no
    /// ground truth in the dataset.
    pub ap_per_threshold: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct F1Point {
    pub conf_threshold: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveEntry {
    pub category: String,
    pub iou_threshold: f64,
    pub curve: PrCurve,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub iou_thresholds: Vec<f64>,
    pub max_dets: Vec<usize>,
    pub categories: Vec<CategoryEval>,
    /// Mean over thresholds of the mean over categories with ground truth.
    pub map: f64,
    pub ap50: Option<f64>,
    pub ap75: Option<f64>,
    /// (max detections per image, averaged recall).
    pub ar: Vec<(usize, f64)>,
    /// F1 vs confidence at IoU 0.5, sampled at each distinct score plus
    /// the 0.25 reporting threshold.
    pub f1_curve: Vec<F1Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pr_curves: Option<Vec<CurveEntry>>,
}

/// The reporting confidence threshold used for F1 summaries.
pub const F1_REPORT_THRESHOLD: f64 = 0.25;

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let collected: Vec<f64> = values.collect();
    if collected.is_empty() {
        None
    } else {
        Some(collected.iter().sum::<f64>() / collected.len() as f64)
    }
}

/// Evaluate a detection set against a dataset index.
///
/// `detections` maps image id to that image's detections in image space
/// with raw category ids. Images absent from the map contribute only
/// missed ground truth.
pub fn evaluate(
    index: &DatasetIndex,
    detections: &BTreeMap<String, Vec<EvalDetection>>,
    taxonomy: &CategoryTaxonomy,
    config: &EvalConfig,
    keep_curves: bool,
) -> EvalReport {
    let empty: Vec<EvalDetection> = Vec::new();
    let category_ids = taxonomy.evaluable_ids();

    // Full-detection match slices per (category, threshold, image).
    let mut categories = Vec::with_capacity(category_ids.len());
    let mut curves_out = Vec::new();
    let mut full_slices: BTreeMap<(u8, usize), Vec<MatchSlice>> = BTreeMap::new();

    for &cat in &category_ids {
        let mut ap_per_threshold = Vec::with_capacity(config.iou_thresholds.len());
        let mut num_gt = 0;
        for (ti, &threshold) in config.iou_thresholds.iter().enumerate() {
            let slices: Vec<MatchSlice> = index
                .images
                .iter()
                .map(|entry| {
                    let dets = detections.get(&entry.image_id).unwrap_or(&empty);
                    match_image(dets, &entry.annotations, cat, taxonomy, threshold, config)
                })
                .collect();
            let refs: Vec<&MatchSlice> = slices.iter().collect();
            let curve = pr_curve(&refs);
            num_gt = curve.num_gt;
            let ap = average_precision(&curve, config.ap_interpolation);
            if keep_curves {
                curves_out.push(CurveEntry {
                    category: taxonomy.name(cat).unwrap_or("?").to_string(),
                    iou_threshold: threshold,
                    curve,
                });
            }
            ap_per_threshold.push(ap);
            full_slices.insert((cat, ti), slices);
        }
        categories.push(CategoryEval {
            name: taxonomy.name(cat).unwrap_or("?").to_string(),
            category_id: cat,
            num_gt,
            ap_per_threshold,
        });
    }

    // Aggregates over categories with ground truth.
    let per_threshold_mean = |ti: usize| -> Option<f64> {
        mean(
            categories
                .iter()
                .filter_map(|c| c.ap_per_threshold[ti].as_ref().copied()),
        )
    };
    let threshold_means: Vec<Option<f64>> =
        (0..config.iou_thresholds.len()).map(per_threshold_mean).collect();
    let map = mean(threshold_means.iter().filter_map(|m| m.as_ref().copied())).unwrap_or(0.0);
    let ap50 = config.threshold_index(0.50).and_then(|i| threshold_means[i]);
    let ap75 = config.threshold_index(0.75).and_then(|i| threshold_means[i]);

    // AR at each per-image detection cap.
    let mut ar = Vec::with_capacity(config.max_dets.len());
    for &cap in &config.max_dets {
        let truncated: BTreeMap<String, Vec<EvalDetection>> = index
            .images
            .iter()
            .map(|entry| {
                let mut dets = detections.get(&entry.image_id).unwrap_or(&empty).clone();
                dets.sort_by(det_order);
                dets.truncate(cap);
                (entry.image_id.clone(), dets)
            })
            .collect();

        let mut recalls = Vec::new();
        for &threshold in &config.iou_thresholds {
            for &cat in &category_ids {
                let mut tp = 0usize;
                let mut gt = 0usize;
                for entry in &index.images {
                    let dets = truncated.get(&entry.image_id).unwrap();
                    let slice =
                        match_image(dets, &entry.annotations, cat, taxonomy, threshold, config);
                    tp += slice.tp_count();
                    gt += slice.num_gt();
                }
                if gt > 0 {
                    recalls.push(tp as f64 / gt as f64);
                }
            }
        }
        ar.push((cap, mean(recalls.into_iter()).unwrap_or(0.0)));
    }

    let f1_curve = build_f1_curve(&full_slices, config, &categories);

    EvalReport {
        iou_thresholds: config.iou_thresholds.clone(),
        max_dets: config.max_dets.clone(),
        categories,
        map,
        ap50,
        ap75,
        ar,
        f1_curve,
        pr_curves: if keep_curves { Some(curves_out) } else { None },
    }
}

fn build_f1_curve(
    full_slices: &BTreeMap<(u8, usize), Vec<MatchSlice>>,
    config: &EvalConfig,
    categories: &[CategoryEval],
) -> Vec<F1Point> {
    let ti = match config.threshold_index(0.50) {
        Some(i) => i,
        None => return Vec::new(),
    };
    let num_gt_total: usize = categories.iter().map(|c| c.num_gt).sum();

    // Pool (score, flag) over every category's slices at IoU 0.5.
    let mut scored: Vec<(f64, DetFlag)> = full_slices
        .iter()
        .filter(|((_, t), _)| *t == ti)
        .flat_map(|(_, slices)| {
            slices
                .iter()
                .flat_map(|s| s.detections.iter().map(|d| (d.0, d.2)))
        })
        .filter(|(_, flag)| *flag != DetFlag::Ignored)
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));

    let mut candidates: Vec<f64> = scored.iter().map(|s| s.0).collect();
    candidates.push(F1_REPORT_THRESHOLD);
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();

    candidates
        .into_iter()
        .map(|tau| {
            let mut tp = 0usize;
            let mut fp = 0usize;
            for &(score, flag) in scored.iter().rev() {
                if score < tau {
                    break;
                }
                match flag {
                    DetFlag::Tp => tp += 1,
                    DetFlag::Fp => fp += 1,
                    DetFlag::Ignored => {}
                }
            }
            let precision = if tp + fp > 0 {
                tp as f64 / (tp + fp) as f64
            } else {
                0.0
            };
            let recall = if num_gt_total > 0 {
                tp as f64 / num_gt_total as f64
            } else {
                0.0
            };
            F1Point {
                conf_threshold: tau,
                precision,
                recall,
                f1: f1_score(precision, recall),
            }
        })
        .collect()
}

impl EvalReport {
    /// Table-shaped CSV row with 2-decimal percent formatting:
    /// `method,mAP,AP50,AP75,AR1,AR10,AR100,AR500`.
    pub fn to_table_csv(&self, method: &str) -> String {
        let pct = |v: Option<f64>| match v {
            Some(x) => format!("{:.2}", x * 100.0),
            None => String::new(),
        };
        let mut row = format!(
            "method,mAP,AP50,AP75{}\n{},{},{},{}",
            self.ar
                .iter()
                .map(|(k, _)| format!(",AR{k}"))
                .collect::<String>(),
            method,
            pct(Some(self.map)),
            pct(self.ap50),
            pct(self.ap75),
        );
        for &(_, v) in &self.ar {
            row.push_str(&format!(",{:.2}", v * 100.0));
        }
        row.push('\n');
        row
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn ar_at(&self, cap: usize) -> Option<f64> {
        self.ar.iter().find(|(k, _)| *k == cap).map(|(_, v)| *v)
    }

    /// Per-category AP at IoU 0.5, as (name, Option<AP>).
    pub fn per_category_ap50(&self) -> Vec<(String, Option<f64>)> {
        let ti = self
            .iou_thresholds
            .iter()
            .position(|&t| (t - 0.50).abs() < 1e-9);
        self.categories
            .iter()
            .map(|c| {
                let ap = ti.and_then(|i| c.ap_per_threshold[i]);
                (c.name.clone(), ap)
            })
            .collect()
    }
}
