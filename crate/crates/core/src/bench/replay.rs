//! Externally supplied cost tables, e.g. timings measured elsewhere.
//!
//! CSV with header `old_size,new_size,full_ms,incremental_ms` and optionally
//! `full_evals,incremental_evals`. All rows share the same `old_size`.

use std::path::Path;

use super::{BenchConfig, BenchError, Cost, DeltaPoint, DeltaSeries};

pub fn read_replay(path: &Path) -> Result<DeltaSeries, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_replay_str(&text)
}

pub fn parse_replay_str(text: &str) -> Result<DeltaSeries, BenchError> {
    let err = |line: usize, message: String| BenchError::Replay { line, message };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| err(1, e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let required = ["old_size", "new_size", "full_ms", "incremental_ms"];
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(required) {
        *slot = col(name).ok_or_else(|| err(1, format!("missing column '{name}'")))?;
    }
    let evals = match (col("full_evals"), col("incremental_evals")) {
        (Some(f), Some(i)) => Some((f, i)),
        (None, None) => None,
        _ => return Err(err(1, "full_evals and incremental_evals must appear together".into())),
    };

    let mut points = Vec::new();
    let mut base = None;
    for result in reader.records() {
        let rec = result.map_err(|e| err(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let int = |i: usize| {
            rec.get(i)
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| err(line, format!("'{}' is not a non-negative integer", rec.get(i).unwrap_or(""))))
        };
        let real = |i: usize| {
            rec.get(i)
                .and_then(|t| t.parse::<f64>().ok())
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| err(line, format!("'{}' is not a non-negative number", rec.get(i).unwrap_or(""))))
        };
        let old = int(idx[0])? as usize;
        let new = int(idx[1])? as usize;
        let (full_evals, inc_evals) = match evals {
            Some((f, i)) => (int(f)?, int(i)?),
            None => (0, 0),
        };
        let full = Cost {
            wall_time_ms: real(idx[2])?,
            distance_evaluations: full_evals,
            iterations: 0,
        };
        let inc = Cost {
            wall_time_ms: real(idx[3])?,
            distance_evaluations: inc_evals,
            iterations: 0,
        };
        if *base.get_or_insert(old) != old {
            return Err(err(line, "all rows must share the same old_size".into()));
        }
        points.push(DeltaPoint::new(old, new, full, inc).map_err(|e| err(line, e.to_string()))?);
    }
    let base = base.ok_or(BenchError::NoDeltas)?;
    let mut series = DeltaSeries::new(base, points, BenchConfig::default())?;
    series.has_counters = evals.is_some();
    Ok(series)
}
