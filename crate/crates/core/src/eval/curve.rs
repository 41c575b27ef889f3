use serde::Serialize;

use crate::eval::config::Interpolation;
use crate::eval::matching::{DetFlag, MatchSlice};
use crate::geometry::PixelBox;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrPoint {
    pub score: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Score-descending precision/recall sequence for one category at one IoU
/// threshold. `undefined_recall` marks the no-ground-truth case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrCurve {
    pub points: Vec<PrPoint>,
    pub num_gt: usize,
    pub num_det: usize,
    pub undefined_recall: bool,
}

/// Pool per-image match slices of one (category, threshold) into a single
/// dataset-wide PR curve. Ignored detections are skipped entirely.
pub fn pr_curve(slices: &[&MatchSlice]) -> PrCurve {
    let num_gt: usize = slices.iter().map(|s| s.num_gt()).sum();

    let mut pooled: Vec<(f64, PixelBox, DetFlag)> = slices
        .iter()
        .flat_map(|s| s.detections.iter().map(|d| (d.0, d.1, d.2)))
        .collect();
    pooled.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                let ka = [a.1.left, a.1.top, a.1.width, a.1.height];
                let kb = [b.1.left, b.1.top, b.1.width, b.1.height];
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
            })
    });

    let num_det = pooled.len();
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut points = Vec::new();
    for (score, _, flag) in pooled {
        match flag {
            DetFlag::Tp => tp += 1,
            DetFlag::Fp => fp += 1,
            DetFlag::Ignored => continue,
        }
        let precision = tp as f64 / (tp + fp) as f64;
        let recall = if num_gt > 0 {
            tp as f64 / num_gt as f64
        } else {
            0.0
        };
        points.push(PrPoint {
            score,
            precision,
            recall,
        });
    }

    PrCurve {
        points,
        num_gt,
        num_det,
        undefined_recall: num_gt == 0,
    }
}

/// AP for one curve. `None` marks the undefined-recall case (no ground
/// truth), which aggregation excludes from means.
///
/// 101-point: mean over recall stops {0, 0.01, ..., 1.00} of the maximum
/// precision at recall >= stop. All-point: exact area under the monotone
/// precision envelope.
pub fn average_precision(curve: &PrCurve, mode: Interpolation) -> Option<f64> {
    if curve.undefined_recall {
        return None;
    }
    if curve.points.is_empty() {
        return Some(0.0);
    }

    // Monotone envelope from the right: env[i] = max precision at >= recall_i.
    let n = curve.points.len();
    let mut envelope = vec![0.0f64; n];
    let mut running = 0.0f64;
    for i in (0..n).rev() {
        running = running.max(curve.points[i].precision);
        envelope[i] = running;
    }

    match mode {
        Interpolation::Pt101 => {
            let mut total = 0.0;
            for stop in 0..=100u32 {
                let r = stop as f64 / 100.0;
                // first point with recall >= r; recalls are nondecreasing
                let q = curve
                    .points
                    .iter()
                    .position(|p| p.recall >= r)
                    .map(|i| envelope[i])
                    .unwrap_or(0.0);
                total += q;
            }
            Some(total / 101.0)
        }
        Interpolation::AllPoint => {
            let mut area = 0.0;
            let mut prev_recall = 0.0;
            for i in 0..n {
                let r = curve.points[i].recall;
                if r > prev_recall {
                    area += (r - prev_recall) * envelope[i];
                    prev_recall = r;
                }
            }
            Some(area)
        }
    }
}

/// F1 from precision and recall; 0 when both vanish.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_from(points: Vec<(f64, f64, f64)>, num_gt: usize) -> PrCurve {
        PrCurve {
            points: points
                .into_iter()
                .map(|(score, precision, recall)| PrPoint {
                    score,
                    precision,
                    recall,
                })
                .collect(),
            num_gt,
            num_det: 0,
            undefined_recall: num_gt == 0,
        }
    }

    #[test]
    fn perfect_curve_has_ap_one() {
        let c = curve_from(vec![(0.9, 1.0, 0.5), (0.8, 1.0, 1.0)], 2);
        assert_eq!(average_precision(&c, Interpolation::Pt101), Some(1.0));
        assert_eq!(average_precision(&c, Interpolation::AllPoint), Some(1.0));
    }

    #[test]
    fn single_tp_at_half_recall() {
        // precision 1.0 through recall 0.5, nothing beyond:
        // 51 of the 101 stops see precision 1.
        let c = curve_from(vec![(0.9, 1.0, 0.5)], 2);
        let ap = average_precision(&c, Interpolation::Pt101).unwrap();
        assert!((ap - 51.0 / 101.0).abs() < 1e-12);
        let ap_all = average_precision(&c, Interpolation::AllPoint).unwrap();
        assert!((ap_all - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_curve_is_zero() {
        let c = curve_from(vec![], 3);
        assert_eq!(average_precision(&c, Interpolation::Pt101), Some(0.0));
    }

    #[test]
    fn undefined_recall_marker() {
        let c = curve_from(vec![], 0);
        assert_eq!(average_precision(&c, Interpolation::Pt101), None);
    }

    #[test]
    fn envelope_uses_later_higher_precision() {
        // dip then recovery: envelope lifts the dip
        let c = curve_from(
            vec![(0.9, 1.0, 0.25), (0.8, 0.5, 0.25), (0.7, 0.66, 0.5)],
            4,
        );
        let ap = average_precision(&c, Interpolation::Pt101).unwrap();
        // stops 0..25 -> 1.0 (26 stops), stops 26..50 -> 0.66 (25 stops)
        let expected = (26.0 * 1.0 + 25.0 * 0.66) / 101.0;
        assert!((ap - expected).abs() < 1e-12);
    }

    #[test]
    fn f1_cases() {
        assert_eq!(f1_score(0.5, 0.5), 0.5);
        assert_eq!(f1_score(1.0, 0.0), 0.0);
        assert!((f1_score(0.8, 0.4) - 8.0 / 15.0).abs() < 1e-12);
        assert_eq!(f1_score(0.0, 0.0), 0.0);
    }
}
