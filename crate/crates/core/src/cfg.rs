//! Darknet-style config parsing and the training-setup arithmetic built
//! on top of it: resolution constraints, iterations-per-epoch, burn-in
//! learning-rate ramp, and the transfer-learning layer cut.
//!
//! Parsing is lossless: comments, blank lines, spacing, and line endings
//! are preserved so `render(parse(text))` is byte-identical.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum LineKind {
    Blank,
    Comment,
    Section { name: String },
    Pair { key: String, value: String },
}

#[derive(Debug, Clone, PartialEq)]
struct Line {
    /// Raw text without the terminator.
    raw: String,
    /// "\n", "\r\n", or "" for a final unterminated line.
    terminator: String,
    kind: LineKind,
}

/// Ordered sections of key-value pairs with all surrounding text kept as
/// opaque tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct CfgDocument {
    lines: Vec<Line>,
}

fn split_lines_keep_terminators(text: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        match rest.find('\n') {
            Some(i) => {
                let (line, term) = if i > 0 && rest.as_bytes()[i - 1] == b'\r' {
                    (&rest[..i - 1], "\r\n")
                } else {
                    (&rest[..i], "\n")
                };
                out.push((line.to_string(), term.to_string()));
                rest = &rest[i + 1..];
            }
            None => {
                out.push((rest.to_string(), String::new()));
                break;
            }
        }
    }
    out
}

pub fn parse_cfg(text: &str) -> Result<CfgDocument> {
    let mut lines = Vec::new();
    let mut in_section = false;
    for (idx, (raw, terminator)) in split_lines_keep_terminators(text).into_iter().enumerate() {
        let trimmed = raw.trim();
        let kind = if trimmed.is_empty() {
            LineKind::Blank
        } else if trimmed.starts_with('#') || trimmed.starts_with(';') {
            LineKind::Comment
        } else if trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| Error::Parse {
                    path: "<cfg>".into(),
                    line: idx + 1,
                    msg: format!("malformed section header {trimmed:?}"),
                })?;
            in_section = true;
            LineKind::Section {
                name: name.trim().to_string(),
            }
        } else if let Some(eq) = raw.find('=') {
            if !in_section {
                return Err(Error::Parse {
                    path: "<cfg>".into(),
                    line: idx + 1,
                    msg: "key-value pair outside any section".into(),
                });
            }
            LineKind::Pair {
                key: raw[..eq].trim().to_string(),
                value: raw[eq + 1..].trim().to_string(),
            }
        } else {
            return Err(Error::Parse {
                path: "<cfg>".into(),
                line: idx + 1,
                msg: format!("unrecognized line {trimmed:?}"),
            });
        };
        lines.push(Line {
            raw,
            terminator,
            kind,
        });
    }
    Ok(CfgDocument { lines })
}

pub fn render_cfg(doc: &CfgDocument) -> String {
    let mut out = String::new();
    for line in &doc.lines {
        out.push_str(&line.raw);
        out.push_str(&line.terminator);
    }
    out
}

impl CfgDocument {
    /// Section names in document order.
    pub fn section_names(&self) -> Vec<&str> {
        self.lines
            .iter()
            .filter_map(|l| match &l.kind {
                LineKind::Section { name } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Value of `key` in the `section_ordinal`-th section named `section`.
    pub fn get(&self, section: &str, section_ordinal: usize, key: &str) -> Option<&str> {
        let mut seen = 0usize;
        let mut inside = false;
        for line in &self.lines {
            match &line.kind {
                LineKind::Section { name } => {
                    if inside {
                        return None; // left the target section
                    }
                    if name == section {
                        if seen == section_ordinal {
                            inside = true;
                        }
                        seen += 1;
                    }
                }
                LineKind::Pair { key: k, value } if inside && k == key => {
                    return Some(value);
                }
                _ => {}
            }
        }
        None
    }

    /// First section's name (the network section in darknet files).
    pub fn network_section(&self) -> Option<&str> {
        self.section_names().first().copied()
    }

    /// Update `key` inside the first section, preserving the original
    /// spelling left of `=`. Inserts `key=value` after the section header
    /// when absent.
    fn set_in_first_section(&mut self, key: &str, value: &str) -> Result<()> {
        let mut section_start = None;
        for (i, line) in self.lines.iter().enumerate() {
            if matches!(line.kind, LineKind::Section { .. }) {
                section_start = Some(i);
                break;
            }
        }
        let start = section_start
            .ok_or_else(|| Error::Invalid("document has no sections".into()))?;

        let mut insert_at = self.lines.len();
        for i in start + 1..self.lines.len() {
            match &self.lines[i].kind {
                LineKind::Section { .. } => {
                    insert_at = i;
                    break;
                }
                LineKind::Pair { key: k, .. } if k == key => {
                    let eq = self.lines[i].raw.find('=').expect("pair line has '='");
                    let mut raw = self.lines[i].raw[..=eq].to_string();
                    raw.push_str(value);
                    self.lines[i].raw = raw;
                    self.lines[i].kind = LineKind::Pair {
                        key: key.to_string(),
                        value: value.to_string(),
                    };
                    return Ok(());
                }
                _ => {}
            }
        }

        let terminator = self
            .lines
            .iter()
            .find(|l| !l.terminator.is_empty())
            .map(|l| l.terminator.clone())
            .unwrap_or_else(|| "\n".to_string());
        self.lines.insert(
            insert_at,
            Line {
                raw: format!("{key}={value}"),
                terminator,
                kind: LineKind::Pair {
                    key: key.to_string(),
                    value: value.to_string(),
                },
            },
        );
        Ok(())
    }
}

/// Update the network section's width/height. Both must be positive
/// multiples of 32, the stride of the deepest detection head.
pub fn set_net_resolution(doc: &mut CfgDocument, width: u32, height: u32) -> Result<()> {
    for (what, v) in [("width", width), ("height", height)] {
        if v == 0 || v % 32 != 0 {
            return Err(Error::Invalid(format!(
                "{what} {v} must be a positive multiple of 32"
            )));
        }
    }
    doc.set_in_first_section("width", &width.to_string())?;
    doc.set_in_first_section("height", &height.to_string())?;
    Ok(())
}

/// Training hyperparameters read from the network section. Momentum and
/// weight decay are validated and surfaced but consumed by no computation
/// here.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSchedule {
    pub learning_rate: f64,
    pub burn_in: u64,
    /// Burn-in ramp exponent; darknet defaults to 4.
    pub power: f64,
    pub momentum: f64,
    pub weight_decay: f64,
    pub batch: u64,
    pub subdivisions: u64,
    pub max_iterations: u64,
}

impl TrainSchedule {
    pub fn from_doc(doc: &CfgDocument) -> Result<TrainSchedule> {
        let net = doc
            .network_section()
            .ok_or_else(|| Error::Invalid("document has no sections".into()))?
            .to_string();
        let get_f64 = |key: &str, default: Option<f64>| -> Result<f64> {
            match doc.get(&net, 0, key) {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::Invalid(format!("bad {key} value {v:?}"))),
                None => default.ok_or_else(|| Error::Invalid(format!("missing key {key}"))),
            }
        };
        let get_u64 = |key: &str, default: Option<u64>| -> Result<u64> {
            match doc.get(&net, 0, key) {
                Some(v) => v
                    .parse::<u64>()
                    .map_err(|_| Error::Invalid(format!("bad {key} value {v:?}"))),
                None => default.ok_or_else(|| Error::Invalid(format!("missing key {key}"))),
            }
        };

        let schedule = TrainSchedule {
            learning_rate: get_f64("learning_rate", None)?,
            burn_in: get_u64("burn_in", Some(0))?,
            power: get_f64("power", Some(4.0))?,
            momentum: get_f64("momentum", Some(0.9))?,
            weight_decay: get_f64("decay", Some(0.0005))?,
            batch: get_u64("batch", None)?,
            subdivisions: get_u64("subdivisions", Some(1))?,
            max_iterations: get_u64("max_batches", Some(0))?,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.learning_rate <= 0.0 {
            return Err(Error::Invalid("learning_rate must be positive".into()));
        }
        if self.batch == 0 || self.subdivisions == 0 || self.batch % self.subdivisions != 0 {
            return Err(Error::Invalid(format!(
                "batch {} must be a positive multiple of subdivisions {}",
                self.batch, self.subdivisions
            )));
        }
        Ok(())
    }
}

/// Iterations covering one epoch: `num_images / batch` rounded half up.
pub fn iterations_per_epoch(num_images: u64, batch: u64) -> u64 {
    assert!(num_images > 0 && batch > 0);
    (2 * num_images + batch) / (2 * batch)
}

/// Learning rate at an iteration: polynomial ramp from 0 over the burn-in
/// phase, then the configured plateau. Step/decay policies are out of
/// scope.
pub fn lr_at(iteration: u64, schedule: &TrainSchedule) -> f64 {
    if schedule.burn_in > 0 && iteration < schedule.burn_in {
        schedule.learning_rate * (iteration as f64 / schedule.burn_in as f64).powf(schedule.power)
    } else {
        schedule.learning_rate
    }
}

/// Which layers receive pre-trained weights when loading a partial
/// checkpoint cut at `cut_layer` convolutional layers.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferPlan {
    pub cut_layer: usize,
    pub load_count: usize,
    pub init_count: usize,
    /// Document section index (0-based over layer sections, the network
    /// section excluded) at which the cut falls; `None` when everything
    /// loads.
    pub cut_section_index: Option<usize>,
    /// Per convolutional layer: (layer-section index, loads weights).
    pub conv_layers: Vec<(usize, bool)>,
    /// Total layer records of any type, for the alternative counting.
    pub total_layer_sections: usize,
}

pub fn transfer_plan(doc: &CfgDocument, cut_layer: usize) -> Result<TransferPlan> {
    let names = doc.section_names();
    if names.is_empty() {
        return Err(Error::Invalid("document has no sections".into()));
    }
    // Everything after the leading network section is a layer record.
    let layer_sections: Vec<&str> = names[1..].to_vec();
    let conv_indices: Vec<usize> = layer_sections
        .iter()
        .enumerate()
        .filter(|(_, n)| **n == "convolutional")
        .map(|(i, _)| i)
        .collect();

    if cut_layer > conv_indices.len() {
        return Err(Error::Invalid(format!(
            "cut {} exceeds the {} convolutional layers in the document",
            cut_layer,
            conv_indices.len()
        )));
    }

    let conv_layers: Vec<(usize, bool)> = conv_indices
        .iter()
        .enumerate()
        .map(|(conv_i, &sec_i)| (sec_i, conv_i < cut_layer))
        .collect();

    Ok(TransferPlan {
        cut_layer,
        load_count: cut_layer,
        init_count: conv_indices.len() - cut_layer,
        cut_section_index: conv_indices.get(cut_layer).copied(),
        conv_layers,
        total_layer_sections: layer_sections.len(),
    })
}
