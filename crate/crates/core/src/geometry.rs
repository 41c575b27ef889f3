//! Box algebra: IoU family, letterbox coordinate transforms, clipping.
//!
//! Boxes are `(left, top, width, height)` in continuous pixel coordinates
//! with y growing downward; a 1-px box spans `[x, x+1)`.

use serde::{Deserialize, Serialize};

/// Axis-aligned box in pixel space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelBox {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl PixelBox {
    pub fn new(left: f64, top: f64, width: f64, height: f64) -> Self {
        PixelBox {
            left,
            top,
            width,
            height,
        }
    }

    pub fn right(&self) -> f64 {
        self.left + self.width
    }

    pub fn bottom(&self) -> f64 {
        self.top + self.height
    }

    pub fn area(&self) -> f64 {
        if self.width <= 0.0 || self.height <= 0.0 {
            0.0
        } else {
            self.width * self.height
        }
    }

    pub fn center(&self) -> (f64, f64) {
        (self.left + self.width / 2.0, self.top + self.height / 2.0)
    }

    /// Intersection box, or a zero-area box when disjoint.
    pub fn intersect(&self, other: &PixelBox) -> PixelBox {
        let left = self.left.max(other.left);
        let top = self.top.max(other.top);
        let right = self.right().min(other.right());
        let bottom = self.bottom().min(other.bottom());
        PixelBox {
            left,
            top,
            width: (right - left).max(0.0),
            height: (bottom - top).max(0.0),
        }
    }

    /// Clip this box to `[0, w) x [0, h)` bounds.
    pub fn clip_to(&self, w: f64, h: f64) -> PixelBox {
        let left = self.left.clamp(0.0, w);
        let top = self.top.clamp(0.0, h);
        let right = self.right().clamp(0.0, w);
        let bottom = self.bottom().clamp(0.0, h);
        PixelBox {
            left,
            top,
            width: (right - left).max(0.0),
            height: (bottom - top).max(0.0),
        }
    }
}

/// Intersection over union. Degenerate boxes yield 0.
pub fn iou(a: &PixelBox, b: &PixelBox) -> f64 {
    let inter = a.intersect(b).area();
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        inter / union
    }
}

/// Complete IoU: IoU penalized by normalized center distance and
/// aspect-ratio inconsistency. Always `<= iou(a, b)`; the regression loss
/// is `1 - ciou`.
///
/// When either box has zero area the aspect term is undefined and the
/// value falls back to the distance-penalized IoU.
pub fn ciou(a: &PixelBox, b: &PixelBox) -> f64 {
    let iou_val = iou(a, b);

    let (acx, acy) = a.center();
    let (bcx, bcy) = b.center();
    let rho2 = (acx - bcx).powi(2) + (acy - bcy).powi(2);

    // Enclosing box diagonal squared.
    let enc_w = a.right().max(b.right()) - a.left.min(b.left);
    let enc_h = a.bottom().max(b.bottom()) - a.top.min(b.top);
    let c2 = enc_w * enc_w + enc_h * enc_h;

    let dist_term = if c2 > 0.0 { rho2 / c2 } else { 0.0 };

    if a.area() == 0.0 || b.area() == 0.0 {
        return iou_val - dist_term;
    }

    let v = (4.0 / (std::f64::consts::PI * std::f64::consts::PI))
        * ((a.width / a.height).atan() - (b.width / b.height).atan()).powi(2);
    let alpha = if v == 0.0 { 0.0 } else { v / ((1.0 - iou_val) + v) };

    iou_val - dist_term - alpha * v
}

/// Aspect-preserving mapping from a source image into a square (or any)
/// network resolution, with symmetric padding. The remainder pixel of an
/// odd pad goes to the bottom/right side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LetterboxTransform {
    pub scale: f64,
    pub pad_x: f64,
    pub pad_y: f64,
    pub src_dims: (u32, u32),
    pub net_dims: (u32, u32),
}

/// How a source frame is fitted into the network resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitMode {
    #[default]
    Letterbox,
    Stretch,
}

pub fn letterbox_map(src_dims: (u32, u32), net_dims: (u32, u32)) -> LetterboxTransform {
    let (sw, sh) = (src_dims.0 as f64, src_dims.1 as f64);
    let (nw, nh) = (net_dims.0 as f64, net_dims.1 as f64);
    let scale = (nw / sw).min(nh / sh);
    // Floor keeps the remainder pixel on the bottom/right side.
    let pad_x = ((nw - scale * sw) / 2.0).floor();
    let pad_y = ((nh - scale * sh) / 2.0).floor();
    LetterboxTransform {
        scale,
        pad_x,
        pad_y,
        src_dims,
        net_dims,
    }
}

/// Anisotropic stretch: no padding, independent x/y scales. Represented in
/// the same transform type with `scale` on x and the y scale folded into a
/// second field, so it gets its own type instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StretchTransform {
    pub scale_x: f64,
    pub scale_y: f64,
    pub src_dims: (u32, u32),
    pub net_dims: (u32, u32),
}

pub fn stretch_map(src_dims: (u32, u32), net_dims: (u32, u32)) -> StretchTransform {
    StretchTransform {
        scale_x: net_dims.0 as f64 / src_dims.0 as f64,
        scale_y: net_dims.1 as f64 / src_dims.1 as f64,
        src_dims,
        net_dims,
    }
}

/// Map an image-space box into network (letterboxed) space.
pub fn to_network(b: &PixelBox, t: &LetterboxTransform) -> PixelBox {
    PixelBox {
        left: b.left * t.scale + t.pad_x,
        top: b.top * t.scale + t.pad_y,
        width: b.width * t.scale,
        height: b.height * t.scale,
    }
}

/// Inverse of [`to_network`]; the result is clipped to the source bounds.
pub fn from_network(b: &PixelBox, t: &LetterboxTransform) -> PixelBox {
    let raw = PixelBox {
        left: (b.left - t.pad_x) / t.scale,
        top: (b.top - t.pad_y) / t.scale,
        width: b.width / t.scale,
        height: b.height / t.scale,
    };
    raw.clip_to(t.src_dims.0 as f64, t.src_dims.1 as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn iou_identity() {
        let a = PixelBox::new(3.0, 4.0, 10.0, 20.0);
        assert_eq!(iou(&a, &a), 1.0);
    }

    #[test]
    fn iou_disjoint() {
        let a = PixelBox::new(0.0, 0.0, 2.0, 2.0);
        let b = PixelBox::new(10.0, 10.0, 2.0, 2.0);
        assert_eq!(iou(&a, &b), 0.0);
    }

    #[test]
    fn iou_hand_computed() {
        // inter = 1, union = 7
        let a = PixelBox::new(0.0, 0.0, 2.0, 2.0);
        let b = PixelBox::new(1.0, 1.0, 2.0, 2.0);
        assert!(close(iou(&a, &b), 1.0 / 7.0, 1e-12));
    }

    #[test]
    fn iou_degenerate_is_zero() {
        let a = PixelBox::new(0.0, 0.0, 0.0, 0.0);
        assert_eq!(iou(&a, &a), 0.0);
    }

    #[test]
    fn ciou_identity() {
        let a = PixelBox::new(5.0, 5.0, 4.0, 3.0);
        assert_eq!(ciou(&a, &a), 1.0);
    }

    #[test]
    fn ciou_concentric_same_aspect_equals_iou() {
        let a = PixelBox::new(0.0, 0.0, 4.0, 4.0);
        let b = PixelBox::new(1.0, 1.0, 2.0, 2.0); // same center (2,2), same aspect
        assert!(close(ciou(&a, &b), iou(&a, &b), 1e-12));
    }

    #[test]
    fn ciou_far_apart_matches_scalar_rederivation() {
        let a = PixelBox::new(0.0, 0.0, 2.0, 2.0);
        let b = PixelBox::new(10.0, 10.0, 2.0, 2.0);
        // Independent evaluation: iou = 0, centers (1,1) and (11,11),
        // rho2 = 200, enclosure 12x12 diag2 = 288, v = 0 (same aspect).
        let expected = 0.0 - 200.0 / 288.0;
        let got = ciou(&a, &b);
        assert!(got < 0.0);
        assert!(close(got, expected, 1e-12));
    }

    #[test]
    fn ciou_zero_area_falls_back() {
        let a = PixelBox::new(0.0, 0.0, 0.0, 4.0);
        let b = PixelBox::new(2.0, 0.0, 2.0, 4.0);
        let got = ciou(&a, &b);
        assert!(got.is_finite());
        assert!(got <= 0.0);
    }

    #[test]
    fn letterbox_wide_source() {
        let t = letterbox_map((1920, 1080), (1120, 1120));
        assert!(close(t.scale, 1120.0 / 1920.0, 1e-12));
        assert_eq!(t.pad_x, 0.0);
        // scaled height = 1080 * 1120/1920 = 630, pad = (1120-630)/2 = 245
        assert_eq!(t.pad_y, 245.0);
    }

    #[test]
    fn letterbox_identity() {
        let t = letterbox_map((416, 416), (416, 416));
        assert_eq!(t.scale, 1.0);
        assert_eq!(t.pad_x, 0.0);
        assert_eq!(t.pad_y, 0.0);
    }

    #[test]
    fn to_network_corners() {
        let t = letterbox_map((1920, 1080), (1120, 1120));
        let origin = to_network(&PixelBox::new(0.0, 0.0, 1.0, 1.0), &t);
        assert_eq!(origin.left, t.pad_x);
        assert_eq!(origin.top, t.pad_y);

        let full = to_network(&PixelBox::new(0.0, 0.0, 1920.0, 1080.0), &t);
        assert!(close(full.width, t.scale * 1920.0, 1e-9));
        assert!(close(full.height, t.scale * 1080.0, 1e-9));
    }

    #[test]
    fn stretch_map_scales() {
        let t = stretch_map((1920, 1080), (768, 768));
        assert!(close(t.scale_x, 0.4, 1e-12));
        assert!(close(t.scale_y, 768.0 / 1080.0, 1e-12));
    }
}
