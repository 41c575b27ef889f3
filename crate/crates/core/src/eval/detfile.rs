use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::PixelBox;

/// One predicted object in image space with its raw VisDrone category id.
/// The on-disk layout mirrors the annotation format with a real-valued
/// score in field 5: `left,top,width,height,score,category,-1,-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDetection {
    pub bbox: PixelBox,
    pub score: f64,
    pub category_id: u8,
}

pub fn parse_detection_line(line: &str, line_no: usize) -> Result<EvalDetection> {
    let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
    if fields.len() < 6 {
        return Err(Error::AnnotationParse {
            line: line_no,
            column: fields.len() + 1,
            msg: format!("expected at least 6 fields, found {}", fields.len()),
        });
    }
    let num = |i: usize| -> Result<f64> {
        fields[i]
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::AnnotationParse {
                line: line_no,
                column: i + 1,
                msg: format!("non-numeric token {:?}", fields[i]),
            })
    };
    let category = fields[5]
        .trim()
        .parse::<u8>()
        .map_err(|_| Error::AnnotationParse {
            line: line_no,
            column: 6,
            msg: format!("bad category {:?}", fields[5]),
        })?;
    Ok(EvalDetection {
        bbox: PixelBox::new(num(0)?, num(1)?, num(2)?, num(3)?),
        score: num(4)?,
        category_id: category,
    })
}

pub fn render_detection_line(d: &EvalDetection) -> String {
    let fmt = |v: f64| {
        if v.fract() == 0.0 {
            format!("{}", v as i64)
        } else {
            format!("{v}")
        }
    };
    format!(
        "{},{},{},{},{},{},-1,-1",
        fmt(d.bbox.left),
        fmt(d.bbox.top),
        fmt(d.bbox.width),
        fmt(d.bbox.height),
        d.score,
        d.category_id
    )
}

/// Read a directory of per-image detection CSVs keyed by file stem.
pub fn read_detection_dir(dir: &Path) -> Result<BTreeMap<String, Vec<EvalDetection>>> {
    let mut out = BTreeMap::new();
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "txt" || e == "csv").unwrap_or(false))
        .collect();
    files.sort();
    for path in files {
        let stem = match path.file_stem().and_then(|s| s.to_str()) {
            Some(s) => s.to_string(),
            None => continue,
        };
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut dets = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            dets.push(parse_detection_line(line, i + 1).map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg: e.to_string(),
            })?);
        }
        out.insert(stem, dets);
    }
    Ok(out)
}
