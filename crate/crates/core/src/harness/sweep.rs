use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::annot::{CategoryTaxonomy, DatasetIndex};
use crate::error::{Error, Result};
use crate::eval::{evaluate, EvalConfig, EvalDetection};
use crate::harness::backend::{BackendProcess, BackendRequest, BackendSpec};
use crate::harness::fps::{measure_fps, round_3sig, TimingSample};

#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Warm-up images excluded from timing.
    pub warmup: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { warmup: 5 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub resolution: u32,
    pub ok: bool,
    pub ap50: Option<f64>,
    pub map: Option<f64>,
    pub mean_ms: Option<f64>,
    pub median_ms: Option<f64>,
    pub fps: Option<f64>,
    pub images_evaluated: usize,
    pub images_skipped: usize,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

/// Run the resolution sweep: per resolution, launch the backend once,
/// warm up, dispatch every image strictly sequentially while timing the
/// request/response span, then evaluate the collected detections.
///
/// A handshake failure marks that resolution's row failed and the sweep
/// continues; a per-image timeout skips that image and counts it.
pub fn run_sweep(
    resolutions: &[u32],
    index: &DatasetIndex,
    backend: &BackendSpec,
    taxonomy: &CategoryTaxonomy,
    eval_config: &EvalConfig,
    options: &SweepOptions,
) -> Result<SweepReport> {
    for &r in resolutions {
        if r == 0 || r % 32 != 0 {
            return Err(Error::Invalid(format!(
                "resolution {r} must be a positive multiple of 32"
            )));
        }
    }
    let mut sorted: Vec<u32> = resolutions.to_vec();
    sorted.sort_unstable();

    let mut report = SweepReport::default();
    for resolution in sorted {
        report.rows.push(sweep_one(
            resolution,
            index,
            backend,
            taxonomy,
            eval_config,
            options,
        ));
    }
    Ok(report)
}

fn request_for(entry: &crate::annot::ImageEntry, resolution: u32) -> BackendRequest {
    let (width, height) = entry.dims.unwrap_or((0, 0));
    BackendRequest {
        id: entry.image_id.clone(),
        image: entry
            .image_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| format!("{}.jpg", entry.image_id)),
        width,
        height,
        net_w: resolution,
        net_h: resolution,
    }
}

fn sweep_one(
    resolution: u32,
    index: &DatasetIndex,
    backend: &BackendSpec,
    taxonomy: &CategoryTaxonomy,
    eval_config: &EvalConfig,
    options: &SweepOptions,
) -> SweepRow {
    let mut row = SweepRow {
        resolution,
        ok: false,
        ap50: None,
        map: None,
        mean_ms: None,
        median_ms: None,
        fps: None,
        images_evaluated: 0,
        images_skipped: 0,
    };

    let mut process = match BackendProcess::launch(backend, resolution) {
        Ok(p) => p,
        Err(_) => return row,
    };
    let timeout = Duration::from_millis(backend.per_image_timeout_ms);

    for entry in index.images.iter().take(options.warmup) {
        // Warm-up responses are discarded and never timed.
        let _ = process.infer(&request_for(entry, resolution), timeout);
    }

    let mut detections: BTreeMap<String, Vec<EvalDetection>> = BTreeMap::new();
    let mut samples: Vec<TimingSample> = Vec::new();
    for entry in &index.images {
        match process.infer(&request_for(entry, resolution), timeout) {
            Ok((response, elapsed)) => {
                detections.insert(
                    entry.image_id.clone(),
                    response.detections.into_iter().map(Into::into).collect(),
                );
                samples.push(TimingSample {
                    image_id: entry.image_id.clone(),
                    latency_ms: elapsed.as_secs_f64() * 1000.0,
                    resolution,
                });
                row.images_evaluated += 1;
            }
            Err(_) => {
                row.images_skipped += 1;
            }
        }
    }
    drop(process);

    if row.images_evaluated == 0 {
        return row;
    }

    // Evaluation time is deliberately outside the timing window.
    let eval_report = evaluate(index, &detections, taxonomy, eval_config, false);
    row.ap50 = eval_report.ap50;
    row.map = Some(eval_report.map);

    let summary = measure_fps(&samples);
    row.mean_ms = Some(summary.mean_ms);
    row.median_ms = Some(summary.median_ms);
    row.fps = Some(round_3sig(summary.fps));
    row.ok = true;
    row
}

impl SweepReport {
    /// Deterministic CSV: header plus one row per resolution, percentages
    /// with 2 decimals, FPS at 3 significant figures.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "resolution,ok,ap50,map,mean_ms,median_ms,fps,images_evaluated,images_skipped\n",
        );
        for row in &self.rows {
            let pct = |v: Option<f64>| {
                v.map(|x| format!("{:.2}", x * 100.0)).unwrap_or_default()
            };
            let ms = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.resolution,
                row.ok,
                pct(row.ap50),
                pct(row.map),
                ms(row.mean_ms),
                ms(row.median_ms),
                row.fps.map(|f| f.to_string()).unwrap_or_default(),
                row.images_evaluated,
                row.images_skipped,
            ));
        }
        out
    }

    /// The CSV with timing columns blanked: identical across runs for a
    /// deterministic backend.
    pub fn to_metrics_csv(&self) -> String {
        let mut out = String::from("resolution,ok,ap50,map,images_evaluated,images_skipped\n");
        for row in &self.rows {
            let pct = |v: Option<f64>| {
                v.map(|x| format!("{:.2}", x * 100.0)).unwrap_or_default()
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.resolution,
                row.ok,
                pct(row.ap50),
                pct(row.map),
                row.images_evaluated,
                row.images_skipped,
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
