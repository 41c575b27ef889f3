use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::annot::record::{parse_annotation_line, AnnotationRecord};
use crate::annot::taxonomy::CategoryTaxonomy;
use crate::error::{Error, Result};

/// One image with its ground-truth records. `dims` is `None` when neither
/// an image file nor a dims sidecar supplied it; bounds checks are then
/// skipped.
#[derive(Debug, Clone)]
pub struct ImageEntry {
    pub image_id: String,
    pub annotation_path: PathBuf,
    pub image_path: Option<PathBuf>,
    pub dims: Option<(u32, u32)>,
    pub annotations: Vec<AnnotationRecord>,
}

/// Deterministic index over a dataset directory, ordered by image id.
#[derive(Debug, Clone, Default)]
pub struct DatasetIndex {
    pub images: Vec<ImageEntry>,
    /// Items skipped during loading (missing counterpart, bad file), with
    /// the reason.
    pub skipped: Vec<(String, String)>,
}

impl DatasetIndex {
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Directory of image files matched by stem. Optional; metrics do not
    /// need pixels.
    pub image_dir: Option<PathBuf>,
    /// CSV sidecar `image_id,width,height` overriding image headers.
    pub dims_file: Option<PathBuf>,
    /// Boxes may exceed image bounds by this many pixels before the file
    /// is rejected. Real VisDrone files contain off-by-one boxes.
    pub bounds_slack: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            image_dir: None,
            dims_file: None,
            bounds_slack: 2.0,
        }
    }
}

const IMAGE_EXTENSIONS: [&str; 4] = ["jpg", "jpeg", "png", "bmp"];

fn read_dims_file(path: &Path) -> Result<BTreeMap<String, (u32, u32)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() < 3 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg: "expected image_id,width,height".into(),
            });
        }
        // Header row is optional.
        if i == 0 && parts[1].trim().parse::<u32>().is_err() {
            continue;
        }
        let w: u32 = parts[1].trim().parse().map_err(|_| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg: format!("bad width {:?}", parts[1]),
        })?;
        let h: u32 = parts[2].trim().parse().map_err(|_| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg: format!("bad height {:?}", parts[2]),
        })?;
        map.insert(parts[0].trim().to_string(), (w, h));
    }
    Ok(map)
}

fn find_image(image_dir: &Path, stem: &str) -> Option<PathBuf> {
    for ext in IMAGE_EXTENSIONS {
        let candidate = image_dir.join(format!("{stem}.{ext}"));
        if candidate.is_file() {
            return Some(candidate);
        }
    }
    None
}

fn parse_annotation_file(path: &Path) -> Result<Vec<AnnotationRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        records.push(parse_annotation_line(line, i + 1)?);
    }
    Ok(records)
}

fn check_bounds(records: &[AnnotationRecord], dims: (u32, u32), slack: f64) -> Option<String> {
    let (w, h) = (dims.0 as f64, dims.1 as f64);
    for r in records {
        let b = r.pixel_box();
        if b.left < -slack || b.top < -slack || b.right() > w + slack || b.bottom() > h + slack {
            return Some(format!(
                "box ({},{},{},{}) outside {}x{} image beyond {} px slack",
                r.left, r.top, r.width, r.height, dims.0, dims.1, slack
            ));
        }
    }
    None
}

/// Load a dataset from a directory of per-image annotation files.
///
/// Files are matched by stem; a missing counterpart lands in the skipped
/// report rather than failing the load. Zero matched pairs is fatal.
pub fn load_dataset(annotation_dir: &Path, options: &LoadOptions) -> Result<DatasetIndex> {
    let dims_map = match &options.dims_file {
        Some(p) => read_dims_file(p)?,
        None => BTreeMap::new(),
    };

    let mut ann_files: Vec<PathBuf> = fs::read_dir(annotation_dir)
        .map_err(|e| Error::io(annotation_dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "txt").unwrap_or(false))
        .collect();
    ann_files.sort();

    let mut index = DatasetIndex::default();
    for ann_path in ann_files {
        let stem = match ann_path.file_stem().and_then(|s| s.to_str()) {
            Some(s) => s.to_string(),
            None => continue,
        };

        let image_path = options.image_dir.as_deref().and_then(|d| find_image(d, &stem));
        if options.image_dir.is_some() && image_path.is_none() && !dims_map.contains_key(&stem) {
            index
                .skipped
                .push((stem.clone(), "no matching image file".into()));
            continue;
        }

        let dims = match dims_map.get(&stem) {
            Some(&d) => Some(d),
            None => match &image_path {
                Some(p) => match image::image_dimensions(p) {
                    Ok(d) => Some(d),
                    Err(e) => {
                        index
                            .skipped
                            .push((stem.clone(), format!("unreadable image header: {e}")));
                        continue;
                    }
                },
                None => None,
            },
        };

        let annotations = match parse_annotation_file(&ann_path) {
            Ok(a) => a,
            Err(e) => {
                index.skipped.push((stem.clone(), e.to_string()));
                continue;
            }
        };

        if let Some(d) = dims {
            if let Some(reason) = check_bounds(&annotations, d, options.bounds_slack) {
                index.skipped.push((stem.clone(), reason));
                continue;
            }
        }

        index.images.push(ImageEntry {
            image_id: stem,
            annotation_path: ann_path,
            image_path,
            dims,
            annotations,
        });
    }

    index.images.sort_by(|a, b| a.image_id.cmp(&b.image_id));
    if index.images.is_empty() {
        return Err(Error::EmptyDataset(annotation_dir.to_path_buf()));
    }
    Ok(index)
}

/// Object-size histogram bucket edges, by box area in px².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SizeBucket {
    /// area < 16²
    Tiny,
    /// 16² <= area < 32²
    Small,
    /// 32² <= area < 96²
    Medium,
    /// area >= 96²
    Large,
}

impl SizeBucket {
    fn of(area: f64) -> SizeBucket {
        if area < 256.0 {
            SizeBucket::Tiny
        } else if area < 1024.0 {
            SizeBucket::Small
        } else if area < 9216.0 {
            SizeBucket::Medium
        } else {
            SizeBucket::Large
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetStats {
    pub num_images: usize,
    /// (category name, instance count), in taxonomy order.
    pub category_counts: Vec<(String, u64)>,
    /// Counts per size bucket: tiny, small, medium, large.
    pub size_histogram: [u64; 4],
    pub total_evaluable: u64,
}

impl DatasetStats {
    /// Category names sorted by count descending (count ties keep taxonomy
    /// order).
    pub fn categories_by_count(&self) -> Vec<&str> {
        let mut ordered: Vec<&(String, u64)> = self.category_counts.iter().collect();
        ordered.sort_by(|a, b| b.1.cmp(&a.1));
        ordered.iter().map(|(name, _)| name.as_str()).collect()
    }
}

/// Per-category instance counts and a size histogram over evaluable records.
pub fn dataset_stats(index: &DatasetIndex, taxonomy: &CategoryTaxonomy) -> DatasetStats {
    let ids = taxonomy.evaluable_ids();
    let mut counts: BTreeMap<u8, u64> = ids.iter().map(|&id| (id, 0)).collect();
    let mut histogram = [0u64; 4];
    let mut total = 0u64;

    for entry in &index.images {
        for r in &entry.annotations {
            if r.score_flag == 0 || !taxonomy.is_evaluable(r.category_id) {
                continue;
            }
            if r.width <= 0 || r.height <= 0 {
                continue;
            }
            *counts.get_mut(&r.category_id).unwrap() += 1;
            total += 1;
            let bucket = SizeBucket::of((r.width * r.height) as f64);
            let slot = match bucket {
                SizeBucket::Tiny => 0,
                SizeBucket::Small => 1,
                SizeBucket::Medium => 2,
                SizeBucket::Large => 3,
            };
            histogram[slot] += 1;
        }
    }

    DatasetStats {
        num_images: index.images.len(),
        category_counts: ids
            .iter()
            .map(|&id| (taxonomy.name(id).unwrap().to_string(), counts[&id]))
            .collect(),
        size_histogram: histogram,
        total_evaluable: total,
    }
}
