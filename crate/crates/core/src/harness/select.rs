use std::path::Path;

use crate::error::{Error, Result};

/// One checkpoint measurement: validation AP and F1 at a training
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub iteration: u64,
    pub ap: f64,
    pub f1: f64,
}

/// Pick the iteration maximizing AP; ties broken by higher F1, then by
/// the smaller iteration.
pub fn select_checkpoint(series: &[SeriesPoint]) -> Result<u64> {
    if series.is_empty() {
        return Err(Error::Invalid("checkpoint series is empty".into()));
    }
    if !series.windows(2).all(|w| w[0].iteration < w[1].iteration) {
        return Err(Error::Invalid(
            "checkpoint iterations must be strictly increasing".into(),
        ));
    }
    let best = series
        .iter()
        .max_by(|a, b| {
            a.ap.partial_cmp(&b.ap)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.f1.partial_cmp(&b.f1).unwrap_or(std::cmp::Ordering::Equal))
                // max_by keeps the later element on full ties; prefer the
                // smaller iteration instead.
                .then(b.iteration.cmp(&a.iteration))
        })
        .unwrap();
    Ok(best.iteration)
}

/// Parse a `iteration,ap,f1` series file. The header row is required.
pub fn parse_series_csv(path: &Path) -> Result<Vec<SeriesPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse {
            path: path.display().to_string(),
            line: 1,
            msg: "empty series file".into(),
        })?
        .1;
    let normalized: Vec<String> = header.split(',').map(|h| h.trim().to_lowercase()).collect();
    if normalized != ["iteration", "ap", "f1"] {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            msg: format!("expected header iteration,ap,f1, found {header:?}"),
        });
    }

    let mut series = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg: "expected three fields".into(),
            });
        }
        let bad = |what: &str| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg: format!("bad {what}"),
        };
        series.push(SeriesPoint {
            iteration: parts[0].trim().parse().map_err(|_| bad("iteration"))?,
            ap: parts[1].trim().parse().map_err(|_| bad("ap"))?,
            f1: parts[2].trim().parse().map_err(|_| bad("f1"))?,
        });
    }
    Ok(series)
}
