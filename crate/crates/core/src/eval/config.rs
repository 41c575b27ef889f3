use crate::error::{Error, Result};

/// How ground truths with a >50% truncation bucket are treated. The
/// VisDrone toolkit excludes them; including them scores a model on its
/// ability to find heavily truncated objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruncationPolicy {
    #[default]
    Include,
    ExcludeGtOver50,
}

/// AP integration rule. 101-point matches the COCO/VisDrone toolkit;
/// all-point is the exact area under the monotone envelope, as used by
/// darknet-style AP@0.5 reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    #[default]
    Pt101,
    AllPoint,
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    /// Strictly increasing thresholds in (0, 1].
    pub iou_thresholds: Vec<f64>,
    /// Strictly increasing per-image detection caps for AR.
    pub max_dets: Vec<usize>,
    pub truncation_policy: TruncationPolicy,
    pub ap_interpolation: Interpolation,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            iou_thresholds: (0..10).map(|i| (50 + 5 * i) as f64 / 100.0).collect(),
            max_dets: vec![1, 10, 100, 500],
            truncation_policy: TruncationPolicy::Include,
            ap_interpolation: Interpolation::Pt101,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iou_thresholds.is_empty()
            || !self
                .iou_thresholds
                .windows(2)
                .all(|w| w[0] < w[1])
            || self.iou_thresholds.iter().any(|&t| t <= 0.0 || t > 1.0)
        {
            return Err(Error::Invalid(
                "iou_thresholds must be strictly increasing within (0, 1]".into(),
            ));
        }
        if self.max_dets.is_empty() || !self.max_dets.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "max_dets must be non-empty and strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn threshold_index(&self, t: f64) -> Option<usize> {
        self.iou_thresholds
            .iter()
            .position(|&x| (x - t).abs() < 1e-9)
    }
}
