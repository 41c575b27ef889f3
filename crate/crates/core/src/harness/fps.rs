use serde::Serialize;

/// One per-image wall-clock inference measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimingSample {
    pub image_id: String,
    pub latency_ms: f64,
    pub resolution: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpsSummary {
    pub mean_ms: f64,
    pub median_ms: f64,
    /// 1000 / mean_ms. FPS is reported from the mean, matching the
    /// reciprocal relation between a 114 ms floor and 8.77 FPS.
    pub fps: f64,
    /// Image ids of samples beyond 5x the median; flagged but included in
    /// the mean.
    pub outliers: Vec<String>,
}

/// Round to three significant figures, the reporting precision for FPS.
pub fn round_3sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let magnitude = v.abs().log10().floor();
    let factor = 10f64.powf(2.0 - magnitude);
    (v * factor).round() / factor
}

pub fn measure_fps(samples: &[TimingSample]) -> FpsSummary {
    assert!(!samples.is_empty(), "measure_fps needs at least one sample");
    let mean_ms = samples.iter().map(|s| s.latency_ms).sum::<f64>() / samples.len() as f64;

    let mut sorted: Vec<f64> = samples.iter().map(|s| s.latency_ms).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median_ms = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };

    let outliers = samples
        .iter()
        .filter(|s| s.latency_ms > 5.0 * median_ms)
        .map(|s| s.image_id.clone())
        .collect();

    FpsSummary {
        mean_ms,
        median_ms,
        fps: 1000.0 / mean_ms,
        outliers,
    }
}
