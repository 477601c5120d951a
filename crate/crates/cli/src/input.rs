use std::path::Path;

use chrono::{DateTime, Utc};
use inckm::ingest::{parse_path, Dataset, IngestOptions};
use inckm::{FeatureVector, InitStrategy};

use crate::args::InputArgs;
use crate::error::{io_error, CliError};

pub fn options(input: &InputArgs) -> IngestOptions {
    IngestOptions {
        feature_columns: input.features.clone(),
        id_column: input.id_column.clone(),
        skip_missing: input.skip_missing,
    }
}

pub fn load_dataset(path: &Path, has_header: bool, opts: &IngestOptions) -> Result<Dataset, CliError> {
    let ds = parse_path(path, has_header, opts)?;
    if ds.skipped_missing > 0 {
        eprintln!("skipped {} rows with missing values in {}", ds.skipped_missing, path.display());
    }
    Ok(ds)
}

/// True for a file with nothing but whitespace in it.
pub fn is_blank(path: &Path) -> Result<bool, CliError> {
    let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
    Ok(bytes.iter().all(u8::is_ascii_whitespace))
}

/// `first-k-distinct`, or `;`-separated centroids with `,`-separated coordinates.
pub fn parse_init(spec: &str) -> Result<InitStrategy, CliError> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("first-k-distinct") {
        return Ok(InitStrategy::FirstKDistinct);
    }
    let bad = |what: &str| CliError::Usage(format!("--init {spec:?}: {what}"));
    let mut centroids = Vec::new();
    for part in spec.split(';') {
        let coords = part
            .split(',')
            .map(|c| c.trim().parse::<f64>().map_err(|_| bad(&format!("{:?} is not a number", c.trim()))))
            .collect::<Result<Vec<_>, _>>()?;
        centroids.push(FeatureVector::new(coords).map_err(|e| bad(&e.to_string()))?);
    }
    Ok(InitStrategy::Explicit(centroids))
}

/// Creation time for new models; `SOURCE_DATE_EPOCH` pins it for
/// reproducible output.
pub fn timestamp() -> Result<DateTime<Utc>, CliError> {
    match std::env::var("SOURCE_DATE_EPOCH") {
        Ok(v) => v
            .trim()
            .parse::<i64>()
            .ok()
            .and_then(|s| DateTime::from_timestamp(s, 0))
            .ok_or_else(|| CliError::Usage(format!("SOURCE_DATE_EPOCH={v:?} is not a valid timestamp"))),
        Err(_) => Ok(Utc::now()),
    }
}
