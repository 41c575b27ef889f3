//! Detection-vs-ground-truth matching and the metric suite: per-category
//! AP over the 0.50:0.05:0.95 threshold ladder, mAP/AP50/AP75,
//! AR at capped detection counts, PR curves, and F1 vs confidence.

mod config;
mod curve;
mod detfile;
mod matching;
mod report;

pub use config::{EvalConfig, Interpolation, TruncationPolicy};
pub use curve::{average_precision, f1_score, pr_curve, PrCurve, PrPoint};
pub use detfile::{parse_detection_line, read_detection_dir, render_detection_line, EvalDetection};
pub use matching::{det_order, match_image, DetFlag, MatchSlice};
pub use report::{evaluate, CategoryEval, CurveEntry, EvalReport, F1Point, F1_REPORT_THRESHOLD};
