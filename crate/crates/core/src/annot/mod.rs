//! VisDrone DET annotation ingestion: parsing, taxonomy, label export,
//! dataset statistics, and mosaic augmentation.

mod dataset;
mod label;
mod mosaic;
mod record;
mod taxonomy;

pub use dataset::{
    dataset_stats, load_dataset, DatasetIndex, DatasetStats, ImageEntry, LoadOptions, SizeBucket,
};
pub use label::{render_label_line, to_yolo_label, YoloLabel};
pub use mosaic::{mosaic_compose, MosaicSample, MosaicTile, SourceSample};
pub use record::{parse_annotation_line, render_annotation_line, AnnotationRecord};
pub use taxonomy::CategoryTaxonomy;
