//! Experiment protocols: resolution sweep with latency measurement,
//! checkpoint selection, and FPS summaries, driven against a pluggable
//! external detector backend over newline-delimited JSON.

mod backend;
mod fps;
mod select;
mod sweep;

pub use backend::{
    run_echo_backend, BackendProcess, BackendRequest, BackendResponse, BackendSpec, EchoOptions,
    WireDetection,
};
pub use fps::{measure_fps, FpsSummary, TimingSample};
pub use select::{parse_series_csv, select_checkpoint, SeriesPoint};
pub use sweep::{run_sweep, SweepOptions, SweepReport, SweepRow};
