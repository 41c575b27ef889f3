/// The VisDrone DET category taxonomy.
///
/// Raw ids are contiguous: 0 is the ignored-region pseudo-category, 1..=10
/// are the ten evaluable object classes, 11 is "others". Evaluable classes
/// are zero-indexed in taxonomy order for label export.
#[derive(Debug, Clone)]
pub struct CategoryTaxonomy {
    entries: Vec<(u8, &'static str, bool)>,
    keep_others: bool,
}

const ENTRIES: [(u8, &str, bool); 12] = [
    (0, "ignored-region", false),
    (1, "pedestrian", true),
    (2, "person", true),
    (3, "bicycle", true),
    (4, "car", true),
    (5, "van", true),
    (6, "truck", true),
    (7, "tricycle", true),
    (8, "awning-tricycle", true),
    (9, "bus", true),
    (10, "motor", true),
    (11, "others", false),
];

impl Default for CategoryTaxonomy {
    fn default() -> Self {
        CategoryTaxonomy {
            entries: ENTRIES.to_vec(),
            keep_others: false,
        }
    }
}

impl CategoryTaxonomy {
    /// Variant that exports "others" as an eleventh training class instead
    /// of dropping it. Evaluation still scores the ten standard classes.
    pub fn with_others_kept() -> Self {
        CategoryTaxonomy {
            entries: ENTRIES.to_vec(),
            keep_others: true,
        }
    }

    pub fn num_evaluable(&self) -> usize {
        self.entries.iter().filter(|e| e.2).count()
    }

    pub fn is_evaluable(&self, raw_id: u8) -> bool {
        self.entries
            .iter()
            .any(|&(id, _, eval)| id == raw_id && eval)
    }

    pub fn name(&self, raw_id: u8) -> Option<&'static str> {
        self.entries
            .iter()
            .find(|&&(id, _, _)| id == raw_id)
            .map(|&(_, name, _)| name)
    }

    /// Zero-based label index for an evaluable raw id (plus "others" when
    /// kept). Non-exportable categories return `None`.
    pub fn label_index(&self, raw_id: u8) -> Option<usize> {
        let mut idx = 0;
        for &(id, _, eval) in &self.entries {
            let exportable = eval || (self.keep_others && id == 11);
            if !exportable {
                continue;
            }
            if id == raw_id {
                return Some(idx);
            }
            idx += 1;
        }
        None
    }

    /// Raw ids of the evaluable classes, in taxonomy order.
    pub fn evaluable_ids(&self) -> Vec<u8> {
        self.entries
            .iter()
            .filter(|e| e.2)
            .map(|e| e.0)
            .collect()
    }

    pub fn max_raw_id(&self) -> u8 {
        self.entries.last().map(|e| e.0).unwrap_or(0)
    }
}
