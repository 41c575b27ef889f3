use crate::error::{Error, Result};
use crate::geometry::PixelBox;

/// One ground-truth object from a VisDrone DET annotation file.
///
/// Line layout is the public comma-separated convention:
/// `left,top,width,height,score,category,truncation,occlusion`.
/// A `score_flag` of 0 marks entries ignored during evaluation
/// (ignored regions and similar).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnotationRecord {
    pub left: i64,
    pub top: i64,
    pub width: i64,
    pub height: i64,
    pub score_flag: u8,
    pub category_id: u8,
    /// 0 = none, 1 = 1-50%, 2 = >50%.
    pub truncation: u8,
    /// Same cut points as truncation.
    pub occlusion: u8,
}

impl AnnotationRecord {
    pub fn pixel_box(&self) -> PixelBox {
        PixelBox::new(
            self.left as f64,
            self.top as f64,
            self.width as f64,
            self.height as f64,
        )
    }
}

/// Parse one annotation line. `line_no` is 1-based and only used for error
/// reporting. Fields beyond the first 8 are ignored.
pub fn parse_annotation_line(line: &str, line_no: usize) -> Result<AnnotationRecord> {
    let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
    // A trailing comma produces an empty ninth field; only 8 are required.
    let significant = fields.iter().take_while(|f| !f.is_empty()).count();
    if significant < 8 {
        return Err(Error::AnnotationParse {
            line: line_no,
            column: significant + 1,
            msg: format!("expected at least 8 comma-separated fields, found {significant}"),
        });
    }

    let mut ints = [0i64; 8];
    for (i, field) in fields.iter().take(8).enumerate() {
        ints[i] = field.trim().parse::<i64>().map_err(|_| Error::AnnotationParse {
            line: line_no,
            column: i + 1,
            msg: format!("non-integer token {:?}", field),
        })?;
    }

    let check_range = |value: i64, lo: i64, hi: i64, column: usize, what: &str| {
        if value < lo || value > hi {
            Err(Error::AnnotationParse {
                line: line_no,
                column,
                msg: format!("{what} {value} outside {lo}..={hi}"),
            })
        } else {
            Ok(value)
        }
    };

    let score_flag = check_range(ints[4], 0, 1, 5, "score flag")? as u8;
    let category_id = check_range(ints[5], 0, 11, 6, "category id")? as u8;
    let truncation = check_range(ints[6], 0, 2, 7, "truncation bucket")? as u8;
    let occlusion = check_range(ints[7], 0, 2, 8, "occlusion bucket")? as u8;

    Ok(AnnotationRecord {
        left: ints[0],
        top: ints[1],
        width: ints[2],
        height: ints[3],
        score_flag,
        category_id,
        truncation,
        occlusion,
    })
}

/// Render a record back to its 8-field text form.
pub fn render_annotation_line(r: &AnnotationRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.left, r.top, r.width, r.height, r.score_flag, r.category_id, r.truncation, r.occlusion
    )
}
