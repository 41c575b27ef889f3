use crate::annot::record::AnnotationRecord;
use crate::annot::taxonomy::CategoryTaxonomy;
use crate::error::{Error, Result};

/// Darknet-style normalized training label: zero-based class index plus a
/// center-normalized box, all coordinates in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YoloLabel {
    pub category_index: usize,
    pub cx: f64,
    pub cy: f64,
    pub w: f64,
    pub h: f64,
}

/// Convert a record to a normalized label. Non-exportable categories
/// (ignored regions, "others" unless kept, score-flag 0 entries) yield
/// `None`. Truncation and occlusion buckets are deliberately not encoded.
pub fn to_yolo_label(
    record: &AnnotationRecord,
    image_dims: (u32, u32),
    taxonomy: &CategoryTaxonomy,
    bounds_slack: f64,
) -> Result<Option<YoloLabel>> {
    let (iw, ih) = (image_dims.0 as f64, image_dims.1 as f64);
    if iw <= 0.0 || ih <= 0.0 {
        return Err(Error::Invalid("image dims must be positive".into()));
    }
    if record.score_flag == 0 {
        return Ok(None);
    }
    let category_index = match taxonomy.label_index(record.category_id) {
        Some(i) => i,
        None => return Ok(None),
    };

    let b = record.pixel_box();
    if b.left < -bounds_slack
        || b.top < -bounds_slack
        || b.right() > iw + bounds_slack
        || b.bottom() > ih + bounds_slack
    {
        return Err(Error::Invalid(format!(
            "box ({},{},{},{}) exceeds {}x{} image bounds beyond {} px slack",
            record.left, record.top, record.width, record.height, image_dims.0, image_dims.1,
            bounds_slack
        )));
    }

    let clipped = b.clip_to(iw, ih);
    let (cx, cy) = clipped.center();
    Ok(Some(YoloLabel {
        category_index,
        cx: (cx / iw).clamp(0.0, 1.0),
        cy: (cy / ih).clamp(0.0, 1.0),
        w: (clipped.width / iw).clamp(0.0, 1.0),
        h: (clipped.height / ih).clamp(0.0, 1.0),
    }))
}

/// Render one exported label line with 6-decimal fixed formatting.
pub fn render_label_line(label: &YoloLabel) -> String {
    format!(
        "{} {:.6} {:.6} {:.6} {:.6}",
        label.category_index, label.cx, label.cy, label.w, label.h
    )
}
