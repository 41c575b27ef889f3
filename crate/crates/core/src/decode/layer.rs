use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PixelBox;

/// Geometry of one detection head.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YoloLayerSpec {
    pub grid_w: usize,
    pub grid_h: usize,
    /// Pixels per grid cell; `grid * stride` equals the network dimension.
    pub stride: usize,
    /// Anchor sizes in network pixels.
    pub anchors: Vec<(f64, f64)>,
    pub num_categories: usize,
}

impl YoloLayerSpec {
    pub fn net_dims(&self) -> (usize, usize) {
        (self.grid_w * self.stride, self.grid_h * self.stride)
    }

    pub fn expected_channels(&self) -> usize {
        self.anchors.len() * (5 + self.num_categories)
    }
}

/// Raw 3-axis tensor in `[channels, height, width]` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    pub data: Vec<f32>,
}

impl FeatureMap {
    pub fn new(channels: usize, height: usize, width: usize) -> Self {
        FeatureMap {
            channels,
            height,
            width,
            data: vec![0.0; channels * height * width],
        }
    }

    pub fn from_data(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != channels * height * width {
            return Err(Error::TensorFormat(format!(
                "data length {} does not match {}x{}x{}",
                data.len(),
                channels,
                height,
                width
            )));
        }
        Ok(FeatureMap {
            channels,
            height,
            width,
            data,
        })
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f32) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }
}

/// One scored prediction. The box is tagged by where it lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BoxSpace {
    Network,
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Detection {
    pub bbox: PixelBox,
    pub space: BoxSpace,
    /// objectness * best category probability, in [0, 1].
    pub score: f64,
    pub category_index: usize,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Decode one head tensor into network-space detections.
///
/// Per cell and anchor slot the darknet YOLOv3-head transform applies:
/// center `(sigma(tx)+cx)*stride`, size `anchor*exp(t)`, score
/// `sigma(t_obj)*sigma(t_cat)` with the highest-probability category.
/// Only detections with `score >= conf_threshold` are emitted.
pub fn decode_layer(
    raw: &FeatureMap,
    spec: &YoloLayerSpec,
    conf_threshold: f64,
) -> Result<Vec<Detection>> {
    let expected = spec.expected_channels();
    if raw.channels != expected || raw.height != spec.grid_h || raw.width != spec.grid_w {
        return Err(Error::ShapeMismatch {
            expected,
            actual: raw.channels,
        });
    }

    let per_anchor = 5 + spec.num_categories;
    let stride = spec.stride as f64;
    let mut out = Vec::new();

    for (a, &(anchor_w, anchor_h)) in spec.anchors.iter().enumerate() {
        let base = a * per_anchor;
        for cy in 0..spec.grid_h {
            for cx in 0..spec.grid_w {
                let tx = raw.get(base, cy, cx) as f64;
                let ty = raw.get(base + 1, cy, cx) as f64;
                let tw = raw.get(base + 2, cy, cx) as f64;
                let th = raw.get(base + 3, cy, cx) as f64;
                let obj = sigmoid(raw.get(base + 4, cy, cx) as f64);

                let mut best_cat = 0;
                let mut best_prob = f64::NEG_INFINITY;
                for k in 0..spec.num_categories {
                    let p = raw.get(base + 5 + k, cy, cx) as f64;
                    if p > best_prob {
                        best_prob = p;
                        best_cat = k;
                    }
                }
                let score = obj * sigmoid(best_prob);
                if score < conf_threshold {
                    continue;
                }

                let center_x = (sigmoid(tx) + cx as f64) * stride;
                let center_y = (sigmoid(ty) + cy as f64) * stride;
                let w = anchor_w * tw.exp();
                let h = anchor_h * th.exp();

                out.push(Detection {
                    bbox: PixelBox::new(center_x - w / 2.0, center_y - h / 2.0, w, h),
                    space: BoxSpace::Network,
                    score,
                    category_index: best_cat,
                });
            }
        }
    }
    Ok(out)
}
