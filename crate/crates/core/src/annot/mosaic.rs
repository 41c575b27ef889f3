use crate::error::{Error, Result};
use crate::geometry::PixelBox;

/// Source material for one mosaic tile: an image reference, its pixel
/// dims, and its boxes as `(raw category id, pixel box)`.
#[derive(Debug, Clone)]
pub struct SourceSample {
    pub image_ref: String,
    pub dims: (u32, u32),
    pub boxes: Vec<(u8, PixelBox)>,
}

/// Placement of one source image in the mosaic canvas. The source is
/// scaled to cover its quadrant (aspect preserved) and cropped at the
/// right/bottom; `src_crop` is the surviving source region.
#[derive(Debug, Clone)]
pub struct MosaicTile {
    pub source_index: usize,
    pub image_ref: String,
    pub scale: f64,
    pub src_crop: PixelBox,
    pub dest: PixelBox,
}

#[derive(Debug, Clone)]
pub struct MosaicSample {
    pub canvas: (u32, u32),
    pub tiles: Vec<MosaicTile>,
    pub remapped_boxes: Vec<(u8, PixelBox)>,
}

/// Compose four sources into one canvas split at `split_point`. Each
/// source fills one quadrant; boxes are scaled, translated, and clipped to
/// their quadrant. Boxes whose clipped area falls below
/// `min_visibility` of their scaled area are dropped.
pub fn mosaic_compose(
    samples: &[SourceSample; 4],
    canvas: (u32, u32),
    split_point: (u32, u32),
    min_visibility: f64,
) -> Result<MosaicSample> {
    let (cw, ch) = canvas;
    if cw == 0 || ch == 0 {
        return Err(Error::Invalid("mosaic canvas has a zero dimension".into()));
    }
    let (sx, sy) = split_point;
    if sx == 0 || sy == 0 || sx >= cw || sy >= ch {
        return Err(Error::Invalid(format!(
            "split point ({sx},{sy}) not strictly inside {cw}x{ch} canvas"
        )));
    }

    let quadrants = [
        PixelBox::new(0.0, 0.0, sx as f64, sy as f64),
        PixelBox::new(sx as f64, 0.0, (cw - sx) as f64, sy as f64),
        PixelBox::new(0.0, sy as f64, sx as f64, (ch - sy) as f64),
        PixelBox::new(sx as f64, sy as f64, (cw - sx) as f64, (ch - sy) as f64),
    ];

    let mut tiles = Vec::with_capacity(4);
    let mut remapped = Vec::new();

    for (i, (sample, quad)) in samples.iter().zip(quadrants.iter()).enumerate() {
        let (sw, sh) = (sample.dims.0 as f64, sample.dims.1 as f64);
        if sw <= 0.0 || sh <= 0.0 {
            return Err(Error::Invalid(format!(
                "mosaic source {i} has degenerate dims"
            )));
        }
        // Scale to cover the quadrant, crop the right/bottom overflow.
        let scale = (quad.width / sw).max(quad.height / sh);
        let src_crop = PixelBox::new(0.0, 0.0, quad.width / scale, quad.height / scale);

        tiles.push(MosaicTile {
            source_index: i,
            image_ref: sample.image_ref.clone(),
            scale,
            src_crop,
            dest: *quad,
        });

        for &(category, b) in &sample.boxes {
            let scaled = PixelBox::new(
                quad.left + b.left * scale,
                quad.top + b.top * scale,
                b.width * scale,
                b.height * scale,
            );
            let clipped = scaled.intersect(quad);
            if scaled.area() <= 0.0 || clipped.area() < min_visibility * scaled.area() {
                continue;
            }
            remapped.push((category, clipped));
        }
    }

    Ok(MosaicSample {
        canvas,
        tiles,
        remapped_boxes: remapped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(dims: (u32, u32), boxes: Vec<(u8, PixelBox)>) -> SourceSample {
        SourceSample {
            image_ref: "img".into(),
            dims,
            boxes,
        }
    }

    #[test]
    fn four_identical_sources_offset_by_quadrant() {
        let b = PixelBox::new(100.0, 100.0, 50.0, 50.0);
        let samples = [
            sample((640, 640), vec![(4, b)]),
            sample((640, 640), vec![(4, b)]),
            sample((640, 640), vec![(4, b)]),
            sample((640, 640), vec![(4, b)]),
        ];
        let m = mosaic_compose(&samples, (1280, 1280), (640, 640), 0.25).unwrap();
        assert_eq!(m.tiles.len(), 4);
        assert_eq!(m.remapped_boxes.len(), 4);
        let offsets: Vec<(f64, f64)> = m
            .remapped_boxes
            .iter()
            .map(|(_, rb)| (rb.left - b.left, rb.top - b.top))
            .collect();
        assert_eq!(
            offsets,
            vec![(0.0, 0.0), (640.0, 0.0), (0.0, 640.0), (640.0, 640.0)]
        );
        // tile placements partition the canvas exactly
        let total: f64 = m.tiles.iter().map(|t| t.dest.area()).sum();
        assert_eq!(total, 1280.0 * 1280.0);
    }

    #[test]
    fn box_outside_crop_is_dropped() {
        // Source is 1000 wide but the quadrant keeps only the left 320 px
        // (scale 640/1000 would leave 640... use a tall source so the crop
        // bites): 1000x500 into 320x320 quadrant -> scale 0.64, crop width
        // 500. A box at x=600 is fully outside the crop.
        let b = PixelBox::new(600.0, 10.0, 50.0, 50.0);
        let samples = [
            sample((1000, 500), vec![(4, b)]),
            sample((1000, 500), vec![]),
            sample((1000, 500), vec![]),
            sample((1000, 500), vec![]),
        ];
        let m = mosaic_compose(&samples, (640, 640), (320, 320), 0.25).unwrap();
        assert!(m.remapped_boxes.is_empty());
    }

    #[test]
    fn center_split_keeps_center_boxes_unclipped() {
        let samples = [
            sample((320, 320), vec![(1, PixelBox::new(150.0, 150.0, 20.0, 20.0))]),
            sample((320, 320), vec![(2, PixelBox::new(150.0, 150.0, 20.0, 20.0))]),
            sample((320, 320), vec![(3, PixelBox::new(150.0, 150.0, 20.0, 20.0))]),
            sample((320, 320), vec![(4, PixelBox::new(150.0, 150.0, 20.0, 20.0))]),
        ];
        let m = mosaic_compose(&samples, (640, 640), (320, 320), 0.25).unwrap();
        assert_eq!(m.remapped_boxes.len(), 4);
        for (_, rb) in &m.remapped_boxes {
            assert_eq!(rb.area(), 400.0);
        }
    }

    #[test]
    fn degenerate_canvas_errors() {
        let samples = [
            sample((10, 10), vec![]),
            sample((10, 10), vec![]),
            sample((10, 10), vec![]),
            sample((10, 10), vec![]),
        ];
        assert!(mosaic_compose(&samples, (0, 640), (10, 10), 0.25).is_err());
        assert!(mosaic_compose(&samples, (640, 640), (640, 320), 0.25).is_err());
    }

    #[test]
    fn remapped_boxes_stay_inside_canvas() {
        let samples = [
            sample((100, 100), vec![(1, PixelBox::new(90.0, 90.0, 20.0, 20.0))]),
            sample((100, 100), vec![]),
            sample((100, 100), vec![]),
            sample((100, 100), vec![]),
        ];
        let m = mosaic_compose(&samples, (200, 200), (100, 100), 0.0).unwrap();
        for (_, rb) in &m.remapped_boxes {
            assert!(rb.left >= 0.0 && rb.top >= 0.0);
            assert!(rb.right() <= 200.0 && rb.bottom() <= 200.0);
        }
    }
}
