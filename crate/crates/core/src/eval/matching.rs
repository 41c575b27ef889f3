use std::cmp::Ordering;

use crate::annot::{AnnotationRecord, CategoryTaxonomy};
use crate::eval::config::{EvalConfig, TruncationPolicy};
use crate::eval::detfile::EvalDetection;
use crate::geometry::{iou, PixelBox};

/// Outcome of one detection against one image's ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetFlag {
    Tp,
    Fp,
    /// Best qualifying overlap was an ignored region or a
    /// policy-excluded GT: neither credited nor penalized.
    Ignored,
}

/// Match result for one (image, category, threshold) slice. Detection
/// entries are in match order (score descending, box-lexicographic ties).
#[derive(Debug, Clone)]
pub struct MatchSlice {
    /// (score, box, flag, matched GT index into the image's annotation list)
    pub detections: Vec<(f64, PixelBox, DetFlag, Option<usize>)>,
    /// Indices of evaluable GTs for the category under the active policy.
    pub evaluable_gt: Vec<usize>,
    /// Which of `evaluable_gt` found a match.
    pub gt_matched: Vec<bool>,
}

impl MatchSlice {
    pub fn num_gt(&self) -> usize {
        self.evaluable_gt.len()
    }

    pub fn tp_count(&self) -> usize {
        self.detections
            .iter()
            .filter(|d| d.2 == DetFlag::Tp)
            .count()
    }
}

/// Deterministic detection ordering: score descending, then box
/// lexicographic. Makes every metric invariant to input permutation.
pub fn det_order(a: &EvalDetection, b: &EvalDetection) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| {
            let ka = [a.bbox.left, a.bbox.top, a.bbox.width, a.bbox.height];
            let kb = [b.bbox.left, b.bbox.top, b.bbox.width, b.bbox.height];
            ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
        })
}

fn gt_evaluable(
    r: &AnnotationRecord,
    category_id: u8,
    taxonomy: &CategoryTaxonomy,
    policy: TruncationPolicy,
) -> bool {
    r.score_flag == 1
        && r.category_id == category_id
        && taxonomy.is_evaluable(r.category_id)
        && r.width > 0
        && r.height > 0
        && !(policy == TruncationPolicy::ExcludeGtOver50 && r.truncation == 2)
}

/// Ignore zones for a category: zero-score entries of any class,
/// non-evaluable classes (ignored regions, "others"), and same-category
/// GTs excluded by the truncation policy.
fn gt_ignorable(
    r: &AnnotationRecord,
    category_id: u8,
    taxonomy: &CategoryTaxonomy,
    policy: TruncationPolicy,
) -> bool {
    if r.score_flag == 0 || !taxonomy.is_evaluable(r.category_id) {
        return true;
    }
    policy == TruncationPolicy::ExcludeGtOver50 && r.category_id == category_id && r.truncation == 2
}

/// Greedily match one image's detections of `category_id` against its
/// ground truth at `iou_threshold`.
///
/// Each detection, in score order, takes the unmatched evaluable GT with
/// the highest IoU at or above the threshold. A detection that fails and
/// overlaps an ignore zone at the threshold is flagged ignored.
pub fn match_image(
    dets: &[EvalDetection],
    gts: &[AnnotationRecord],
    category_id: u8,
    taxonomy: &CategoryTaxonomy,
    iou_threshold: f64,
    config: &EvalConfig,
) -> MatchSlice {
    let policy = config.truncation_policy;

    let evaluable_gt: Vec<usize> = gts
        .iter()
        .enumerate()
        .filter(|(_, r)| gt_evaluable(r, category_id, taxonomy, policy))
        .map(|(i, _)| i)
        .collect();
    let ignorable_gt: Vec<usize> = gts
        .iter()
        .enumerate()
        .filter(|(_, r)| gt_ignorable(r, category_id, taxonomy, policy))
        .map(|(i, _)| i)
        .collect();

    let mut order: Vec<&EvalDetection> = dets
        .iter()
        .filter(|d| d.category_id == category_id)
        .collect();
    order.sort_by(|a, b| det_order(a, b));

    let mut gt_matched = vec![false; evaluable_gt.len()];
    let mut detections = Vec::with_capacity(order.len());

    for det in order {
        let mut best: Option<(usize, f64)> = None;
        for (slot, &gi) in evaluable_gt.iter().enumerate() {
            if gt_matched[slot] {
                continue;
            }
            let overlap = iou(&det.bbox, &gts[gi].pixel_box());
            if overlap >= iou_threshold && best.map(|(_, b)| overlap > b).unwrap_or(true) {
                best = Some((slot, overlap));
            }
        }
        match best {
            Some((slot, _)) => {
                gt_matched[slot] = true;
                detections.push((det.score, det.bbox, DetFlag::Tp, Some(evaluable_gt[slot])));
            }
            None => {
                let ignored = ignorable_gt
                    .iter()
                    .any(|&gi| iou(&det.bbox, &gts[gi].pixel_box()) >= iou_threshold);
                let flag = if ignored { DetFlag::Ignored } else { DetFlag::Fp };
                detections.push((det.score, det.bbox, flag, None));
            }
        }
    }

    MatchSlice {
        detections,
        evaluable_gt,
        gt_matched,
    }
}
