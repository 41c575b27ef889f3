//! Aerial object detection evaluation toolkit.
//!
//! Covers the full experimental loop around a drone-imagery detector
//! without containing one: VisDrone DET annotation ingestion and label
//! export, box geometry (IoU, CIoU, letterbox transforms), YOLO head
//! decoding with SPP pooling and greedy NMS, a COCO-style AP/AR/F1 metric
//! engine, darknet config tooling, and a resolution-sweep/latency harness
//! speaking newline-delimited JSON to an external backend.

pub mod annot;
pub mod cfg;
pub mod decode;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod harness;

pub use error::{Error, Result};
