use crate::decode::layer::Detection;
use crate::geometry::iou;

/// Greedy non-maximum suppression.
///
/// Detections are swept in score-descending order (stable tie-break by
/// category index, then input position); one is kept iff its IoU with
/// every already-kept detection -- of the same category when
/// `class_aware` -- stays below `iou_threshold`. Output is score
/// descending.
pub fn nms_greedy(dets: &[Detection], iou_threshold: f64, class_aware: bool) -> Vec<Detection> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_by(|&a, &b| {
        dets[b]
            .score
            .partial_cmp(&dets[a].score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(dets[a].category_index.cmp(&dets[b].category_index))
            .then(a.cmp(&b))
    });

    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        let suppressed = kept.iter().any(|&j| {
            (!class_aware || dets[j].category_index == dets[i].category_index)
                && iou(&dets[j].bbox, &dets[i].bbox) >= iou_threshold
        });
        if !suppressed {
            kept.push(i);
        }
    }
    kept.into_iter().map(|i| dets[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decode::layer::BoxSpace;
    use crate::geometry::PixelBox;

    fn det(left: f64, top: f64, w: f64, h: f64, score: f64, cat: usize) -> Detection {
        Detection {
            bbox: PixelBox::new(left, top, w, h),
            space: BoxSpace::Network,
            score,
            category_index: cat,
        }
    }

    #[test]
    fn single_detection_passes_through() {
        let d = vec![det(0.0, 0.0, 10.0, 10.0, 0.9, 0)];
        assert_eq!(nms_greedy(&d, 0.45, true), d);
    }

    #[test]
    fn overlapping_same_category_keeps_higher_score() {
        // IoU of these two is 0.6: 10x10 boxes overlapping 10x7.5
        let a = det(0.0, 0.0, 10.0, 10.0, 0.9, 0);
        let b = det(0.0, 2.5, 10.0, 10.0, 0.8, 0);
        let inter = 10.0 * 7.5;
        assert!((iou(&a.bbox, &b.bbox) - inter / (200.0 - inter)).abs() < 1e-12);
        let out = nms_greedy(&[a, b], 0.5, true);
        assert_eq!(out, vec![a]);
    }

    #[test]
    fn different_categories_survive_when_class_aware() {
        let a = det(0.0, 0.0, 10.0, 10.0, 0.9, 0);
        let b = det(0.0, 1.0, 10.0, 10.0, 0.8, 1);
        assert_eq!(nms_greedy(&[a, b], 0.5, true).len(), 2);
        assert_eq!(nms_greedy(&[a, b], 0.5, false).len(), 1);
    }

    #[test]
    fn output_is_score_descending() {
        let dets = vec![
            det(0.0, 0.0, 5.0, 5.0, 0.2, 0),
            det(100.0, 0.0, 5.0, 5.0, 0.9, 0),
            det(200.0, 0.0, 5.0, 5.0, 0.5, 0),
        ];
        let out = nms_greedy(&dets, 0.45, true);
        let scores: Vec<f64> = out.iter().map(|d| d.score).collect();
        assert_eq!(scores, vec![0.9, 0.5, 0.2]);
    }
}
