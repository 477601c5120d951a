//! Dataset ingestion from ARFF and CSV files.
//!
//! Both readers share one contract: numeric columns chosen as features become
//! the [`FeatureVector`] dimensions in the order requested (or file order by
//! default), an optional integer key column supplies record ids (otherwise
//! ids are 0-based row positions), and one non-feature column is kept as the
//! record label. Rows keep file order.

mod arff;
mod csv;

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::vector::{FeatureVector, Record, RecordId};

pub use self::arff::{parse_arff, parse_arff_str, write_arff};
pub use self::csv::{parse_csv, parse_csv_str, write_csv};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("empty input")]
    Empty,

    #[error("missing @data section")]
    MissingData,

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: unsupported ARFF feature: {what}")]
    Unsupported { line: usize, what: String },

    #[error("duplicate attribute '{0}'")]
    DuplicateAttribute(String),

    #[error("unknown column '{0}'")]
    UnknownColumn(String),

    #[error("column '{0}' is not numeric")]
    NotNumericColumn(String),

    #[error("no numeric feature columns")]
    NoFeatures,

    #[error("line {line}: expected {expected} fields, found {found}")]
    Ragged { line: usize, expected: usize, found: usize },

    #[error("line {line}: non-numeric value '{value}' in column '{column}'")]
    NonNumeric { line: usize, column: String, value: String },

    #[error("line {line}: missing value in column '{column}'")]
    MissingValue { line: usize, column: String },

    #[error("line {line}: invalid record id '{value}'")]
    InvalidId { line: usize, value: String },

    #[error("line {line}: duplicate record id {id}")]
    DuplicateId { line: usize, id: RecordId },
}

/// Column selection shared by both formats.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Feature columns by name, in the order they should appear in vectors.
    /// `None` selects every numeric column except the id column.
    pub feature_columns: Option<Vec<String>>,
    /// Integer column providing record ids.
    pub id_column: Option<String>,
    /// Drop rows with a missing ('?' or empty) feature instead of failing.
    pub skip_missing: bool,
}

impl IngestOptions {
    pub fn with_features<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.feature_columns = Some(names.into_iter().map(Into::into).collect());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<Record>,
    pub attribute_names: Vec<String>,
    pub source: Option<PathBuf>,
    /// Rows dropped because of missing values (only with `skip_missing`).
    pub skipped_missing: usize,
}

impl Dataset {
    pub fn new(attribute_names: Vec<String>, records: Vec<Record>) -> Self {
        Dataset {
            records,
            attribute_names,
            source: None,
            skipped_missing: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.attribute_names.len()
    }

    /// Id to vector map for mean recomputation.
    pub fn lookup(&self) -> HashMap<RecordId, &FeatureVector> {
        self.records.iter().map(|r| (r.id, &r.vector)).collect()
    }

    /// Same records and attribute names, ignoring provenance.
    pub fn same_content(&self, other: &Dataset) -> bool {
        self.records == other.records && self.attribute_names == other.attribute_names
    }

    /// SHA-256 (hex) of the canonical CSV rendering: an `id,<attributes>`
    /// header and one `id,<values>` line per record, values printed in
    /// shortest round-trip form. Labels do not participate.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(canonical_header(&self.attribute_names));
        for r in &self.records {
            hasher.update(canonical_row(r));
        }
        hex::encode(hasher.finalize())
    }
}

fn canonical_header(names: &[String]) -> String {
    let mut s = String::from("id");
    for n in names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    s
}

fn canonical_row(r: &Record) -> String {
    let mut s = r.id.to_string();
    for v in r.vector.as_slice() {
        s.push(',');
        s.push_str(&v.to_string());
    }
    s.push('\n');
    s
}

/// Reads ARFF or CSV depending on the extension (`.arff` vs anything else).
pub fn parse_path(path: &Path, has_header: bool, options: &IngestOptions) -> Result<Dataset, IngestError> {
    let is_arff = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("arff"));
    if is_arff {
        parse_arff(path, options)
    } else {
        parse_csv(path, has_header, options)
    }
}

pub(crate) fn read_file(path: &Path) -> Result<String, IngestError> {
    std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Numeric token: plain decimal or exponent notation, finite only.
pub(crate) fn parse_number(token: &str) -> Option<f64> {
    let t = token.trim();
    let looks_numeric = !t.is_empty()
        && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
        && t.chars().any(|c| c.is_ascii_digit());
    if !looks_numeric {
        return None;
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub(crate) fn is_missing(token: &str) -> bool {
    let t = token.trim();
    t.is_empty() || t == "?"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ColumnKind {
    Numeric,
    Text,
}

pub(crate) struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

struct Layout {
    features: Vec<usize>,
    id: Option<usize>,
    label: Option<usize>,
}

fn resolve_layout(columns: &[Column], options: &IngestOptions) -> Result<Layout, IngestError> {
    let index_of = |name: &str| {
        columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| IngestError::UnknownColumn(name.to_string()))
    };
    let id = options.id_column.as_deref().map(index_of).transpose()?;
    if let Some(i) = id {
        if columns[i].kind != ColumnKind::Numeric {
            return Err(IngestError::NotNumericColumn(columns[i].name.clone()));
        }
    }
    let features = match &options.feature_columns {
        Some(names) => {
            let mut out = Vec::with_capacity(names.len());
            for name in names {
                let i = index_of(name)?;
                if columns[i].kind != ColumnKind::Numeric {
                    return Err(IngestError::NotNumericColumn(name.clone()));
                }
                if out.contains(&i) {
                    return Err(IngestError::DuplicateAttribute(name.clone()));
                }
                out.push(i);
            }
            out
        }
        None => (0..columns.len())
            .filter(|&i| columns[i].kind == ColumnKind::Numeric && Some(i) != id)
            .collect(),
    };
    if features.is_empty() {
        return Err(IngestError::NoFeatures);
    }
    let label = (0..columns.len())
        .find(|&i| columns[i].kind == ColumnKind::Text && !features.contains(&i) && Some(i) != id);
    Ok(Layout { features, id, label })
}

/// Turns tokenized rows into a dataset. Each row is `(line number, fields)`.
pub(crate) fn build_dataset(
    columns: &[Column],
    rows: Vec<(usize, Vec<String>)>,
    options: &IngestOptions,
) -> Result<Dataset, IngestError> {
    let mut seen = std::collections::HashSet::new();
    for w in columns.iter().map(|c| &c.name) {
        if !seen.insert(w) {
            return Err(IngestError::DuplicateAttribute(w.clone()));
        }
    }
    let layout = resolve_layout(columns, options)?;
    let mut records = Vec::with_capacity(rows.len());
    let mut ids = std::collections::HashSet::new();
    let mut skipped = 0;

    'rows: for (position, (line, fields)) in rows.into_iter().enumerate() {
        if fields.len() != columns.len() {
            return Err(IngestError::Ragged {
                line,
                expected: columns.len(),
                found: fields.len(),
            });
        }
        let mut values = Vec::with_capacity(layout.features.len());
        for &i in &layout.features {
            let tok = &fields[i];
            if is_missing(tok) {
                if options.skip_missing {
                    skipped += 1;
                    continue 'rows;
                }
                return Err(IngestError::MissingValue {
                    line,
                    column: columns[i].name.clone(),
                });
            }
            let v = parse_number(tok).ok_or_else(|| IngestError::NonNumeric {
                line,
                column: columns[i].name.clone(),
                value: tok.trim().to_string(),
            })?;
            values.push(v);
        }
        let id = match layout.id {
            Some(i) => {
                let tok = fields[i].trim();
                RecordId(tok.parse::<u64>().map_err(|_| IngestError::InvalidId {
                    line,
                    value: tok.to_string(),
                })?)
            }
            None => RecordId(position as u64),
        };
        if !ids.insert(id) {
            return Err(IngestError::DuplicateId { line, id });
        }
        let label = layout
            .label
            .map(|i| fields[i].trim())
            .filter(|t| !is_missing(t))
            .map(str::to_string);
        records.push(Record {
            id,
            label,
            vector: FeatureVector::from_raw(values),
        });
    }

    Ok(Dataset {
        records,
        attribute_names: layout.features.iter().map(|&i| columns[i].name.clone()).collect(),
        source: None,
        skipped_missing: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_parsing_is_strict() {
        assert_eq!(parse_number(" 357 "), Some(357.0));
        assert_eq!(parse_number("-1.5e3"), Some(-1500.0));
        assert_eq!(parse_number("1,5"), None);
        assert_eq!(parse_number("inf"), None);
        assert_eq!(parse_number("NaN"), None);
        assert_eq!(parse_number("1e999"), None);
        assert_eq!(parse_number("1/1/2009"), None);
        assert_eq!(parse_number("."), None);
    }

    #[test]
    fn fingerprint_depends_on_values_not_labels() {
        let mk = |x: f64, label: &str| {
            Dataset::new(
                vec!["a".into()],
                vec![Record::new(0, FeatureVector::new(vec![x]).unwrap()).with_label(label)],
            )
        };
        assert_eq!(mk(1.0, "x").fingerprint(), mk(1.0, "y").fingerprint());
        assert_ne!(mk(1.0, "x").fingerprint(), mk(1.5, "x").fingerprint());
        assert_eq!(mk(1.0, "x").fingerprint().len(), 64);
    }
}
