//! Persisted clustering results.
//!
//! A model is saved as two files written with temp-file-and-rename:
//!
//! * the model file, a TOML document with a `[meta]` table (k, metric tag,
//!   iterations, square_error, record counts, dimension, attribute names,
//!   dataset fingerprint, timestamp) and one `[[clusters]]` entry per cluster
//!   (index, member_count, square_error, centroid in attribute order);
//! * the membership sidecar `<model file>.members.csv`, whose first line is
//!   `# inckm-members fingerprint=<hex>` followed by a CSV table
//!   `id,label,cluster,<attributes...>` holding every member record. It is
//!   what deletion uses to recompute means.
//!
//! Floats are written in shortest round-trip form, so centroids reload
//! bit-exactly.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ClusterError;
use crate::metric::Metric;
use crate::model::{Cluster, ClusterModel, RecordLookup};
use crate::vector::{FeatureVector, Record, RecordId};

pub const FORMAT_TAG: &str = "inckm-model";
pub const FORMAT_VERSION: u32 = 1;
const SIDECAR_PREFIX: &str = "# inckm-members fingerprint=";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: file not found")]
    NotFound { path: PathBuf },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("{path}: malformed model file: {message}")]
    Malformed { path: PathBuf, message: String },

    #[error("unknown metric tag '{0}'")]
    UnknownMetric(String),

    #[error("{expected} attribute names required for dimension {expected}, found {found}")]
    AttributeCount { expected: usize, found: usize },

    #[error("cluster {cluster}: centroid has dimension {found}, expected {expected}")]
    DimensionMismatch {
        cluster: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{path}: membership file does not match model: {message}")]
    Membership { path: PathBuf, message: String },

    #[error("membership fingerprint {sidecar} does not match model fingerprint {model}")]
    FingerprintMismatch { model: String, sidecar: String },

    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

/// Member records keyed by id.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MemberTable(BTreeMap<RecordId, Record>);

impl MemberTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, record: Record) -> Option<Record> {
        self.0.insert(record.id, record)
    }

    pub fn remove(&mut self, id: RecordId) -> Option<Record> {
        self.0.remove(&id)
    }

    pub fn get(&self, id: RecordId) -> Option<&Record> {
        self.0.get(&id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Record> {
        self.0.values()
    }

    /// Largest id present, if any.
    pub fn max_id(&self) -> Option<RecordId> {
        self.0.keys().next_back().copied()
    }
}

impl FromIterator<Record> for MemberTable {
    fn from_iter<I: IntoIterator<Item = Record>>(iter: I) -> Self {
        MemberTable(iter.into_iter().map(|r| (r.id, r)).collect())
    }
}

impl RecordLookup for MemberTable {
    fn vector(&self, id: RecordId) -> Option<&FeatureVector> {
        self.0.get(&id).map(|r| &r.vector)
    }
}

/// A model together with what is needed to keep maintaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredModel {
    pub model: ClusterModel,
    pub attribute_names: Vec<String>,
    pub dataset_fingerprint: String,
    pub created_at: DateTime<Utc>,
    /// Records in the dataset the model was fitted on.
    pub record_count: u64,
    pub inserted_since_fit: u64,
    pub deleted_since_fit: u64,
    pub members: MemberTable,
}

impl StoredModel {
    /// Checks the invariants the file format relies on.
    pub fn validate(&self) -> Result<(), StoreError> {
        let dim = self.model.dimension();
        if self.attribute_names.len() != dim {
            return Err(StoreError::AttributeCount {
                expected: dim,
                found: self.attribute_names.len(),
            });
        }
        for (i, c) in self.model.clusters().iter().enumerate() {
            if c.centroid().dim() != dim {
                return Err(StoreError::DimensionMismatch {
                    cluster: i,
                    expected: dim,
                    found: c.centroid().dim(),
                });
            }
            if !c.square_error().is_finite() {
                return Err(StoreError::NonFinite(format!("cluster {i} square_error")));
            }
        }
        let membership = self.model.membership();
        for id in membership.keys() {
            if self.members.get(*id).is_none() {
                return Err(StoreError::Cluster(ClusterError::UnknownRecord(*id)));
            }
        }
        if membership.len() != self.members.len() {
            let orphan = self.members.iter().find(|r| !membership.contains_key(&r.id));
            return Err(StoreError::Membership {
                path: PathBuf::new(),
                message: format!(
                    "record {} is not a member of any cluster",
                    orphan.map_or(0, |r| r.id.0)
                ),
            });
        }
        for r in self.members.iter() {
            r.vector.check_dim(dim)?;
        }
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    meta: Meta,
    #[serde(default)]
    clusters: Vec<ClusterEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    k: usize,
    metric: String,
    iterations: u64,
    square_error: f64,
    record_count: u64,
    inserted_since_fit: u64,
    deleted_since_fit: u64,
    dimension: usize,
    attribute_names: Vec<String>,
    fingerprint: String,
    created_at: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct ClusterEntry {
    index: usize,
    member_count: usize,
    square_error: f64,
    centroid: Vec<f64>,
}

/// Path of the membership sidecar belonging to `model_path`.
pub fn membership_path(model_path: &Path) -> PathBuf {
    let mut name = model_path.as_os_str().to_os_string();
    name.push(".members.csv");
    PathBuf::from(name)
}

pub fn save_model(m: &StoredModel, path: &Path) -> Result<(), StoreError> {
    save_model_with(m, path, |_| Ok(()))
}

/// `before_commit` runs after each temp file is fully written and before it
/// is renamed over its target.
pub(crate) fn save_model_with(
    m: &StoredModel,
    path: &Path,
    mut before_commit: impl FnMut(&Path) -> io::Result<()>,
) -> Result<(), StoreError> {
    m.validate()?;
    let model_text = render_model(m)?;
    let sidecar_text = render_members(m);
    let sidecar = membership_path(path);
    write_atomic(&sidecar, sidecar_text.as_bytes(), &mut before_commit)?;
    write_atomic(path, model_text.as_bytes(), &mut before_commit)?;
    Ok(())
}

fn render_model(m: &StoredModel) -> Result<String, StoreError> {
    let sse = m.model.square_error();
    if !sse.is_finite() {
        return Err(StoreError::NonFinite("square_error".into()));
    }
    let file = ModelFile {
        format: FORMAT_TAG.into(),
        version: FORMAT_VERSION,
        meta: Meta {
            k: m.model.k(),
            metric: m.model.metric().tag().into(),
            iterations: m.model.iterations(),
            square_error: sse,
            record_count: m.record_count,
            inserted_since_fit: m.inserted_since_fit,
            deleted_since_fit: m.deleted_since_fit,
            dimension: m.model.dimension(),
            attribute_names: m.attribute_names.clone(),
            fingerprint: m.dataset_fingerprint.clone(),
            created_at: m.created_at.to_rfc3339_opts(SecondsFormat::AutoSi, true),
        },
        clusters: m
            .model
            .clusters()
            .iter()
            .enumerate()
            .map(|(index, c)| ClusterEntry {
                index,
                member_count: c.member_count(),
                square_error: c.square_error(),
                centroid: c.centroid().as_slice().to_vec(),
            })
            .collect(),
    };
    toml::to_string(&file).map_err(|e| StoreError::Malformed {
        path: PathBuf::new(),
        message: e.to_string(),
    })
}

fn render_members(m: &StoredModel) -> String {
    let membership = m.model.membership();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string(), "label".to_string(), "cluster".to_string()];
    header.extend(m.attribute_names.iter().cloned());
    w.write_record(&header).expect("in-memory write");
    for r in m.members.iter() {
        let mut row = vec![
            r.id.to_string(),
            r.label.clone().unwrap_or_default(),
            membership[&r.id].to_string(),
        ];
        row.extend(r.vector.as_slice().iter().map(f64::to_string));
        w.write_record(&row).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    format!("{SIDECAR_PREFIX}{}\n{body}", m.dataset_fingerprint)
}

fn write_atomic(
    path: &Path,
    bytes: &[u8],
    before_commit: &mut impl FnMut(&Path) -> io::Result<()>,
) -> Result<(), StoreError> {
    let io_err = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    before_commit(tmp.path()).map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<StoredModel, StoreError> {
    let text = read(path)?;
    let malformed = |message: String| StoreError::Malformed {
        path: path.to_path_buf(),
        message,
    };
    if text.trim().is_empty() {
        return Err(malformed("empty file".into()));
    }
    let file: ModelFile = toml::from_str(&text).map_err(|e| malformed(e.message().to_string()))?;
    if file.format != FORMAT_TAG || file.version != FORMAT_VERSION {
        return Err(malformed(format!(
            "unsupported format '{}' version {}",
            file.format, file.version
        )));
    }
    let meta = file.meta;
    let metric: Metric = match meta.metric.as_str() {
        "MANHATTAN" => Metric::Manhattan,
        "EUCLIDEAN" => Metric::Euclidean,
        other => return Err(StoreError::UnknownMetric(other.to_string())),
    };
    if meta.attribute_names.len() != meta.dimension {
        return Err(StoreError::AttributeCount {
            expected: meta.dimension,
            found: meta.attribute_names.len(),
        });
    }
    if meta.k == 0 || file.clusters.len() != meta.k {
        return Err(malformed(format!(
            "meta.k = {} but {} clusters listed",
            meta.k,
            file.clusters.len()
        )));
    }
    if !meta.square_error.is_finite() {
        return Err(StoreError::NonFinite("meta.square_error".into()));
    }
    let created_at = DateTime::parse_from_rfc3339(&meta.created_at)
        .map_err(|e| malformed(format!("created_at: {e}")))?
        .with_timezone(&Utc);

    for (pos, entry) in file.clusters.iter().enumerate() {
        if entry.index != pos {
            return Err(malformed(format!("cluster entry {pos} has index {}", entry.index)));
        }
        if entry.centroid.len() != meta.dimension {
            return Err(StoreError::DimensionMismatch {
                cluster: pos,
                expected: meta.dimension,
                found: entry.centroid.len(),
            });
        }
        if !entry.square_error.is_finite() || entry.centroid.iter().any(|v| !v.is_finite()) {
            return Err(StoreError::NonFinite(format!("cluster {pos}")));
        }
    }

    let sidecar = membership_path(path);
    let (fingerprint, members, assigned) = load_members(&sidecar, &meta.attribute_names, meta.k)?;
    if fingerprint != meta.fingerprint {
        return Err(StoreError::FingerprintMismatch {
            model: meta.fingerprint,
            sidecar: fingerprint,
        });
    }

    let mut clusters = Vec::with_capacity(meta.k);
    for (entry, ids) in file.clusters.into_iter().zip(assigned) {
        if ids.len() != entry.member_count {
            return Err(StoreError::Membership {
                path: sidecar.clone(),
                message: format!(
                    "cluster {} lists {} members, model says {}",
                    entry.index,
                    ids.len(),
                    entry.member_count
                ),
            });
        }
        let centroid = FeatureVector::new(entry.centroid)?;
        clusters.push(Cluster::from_parts(centroid, ids, entry.square_error));
    }
    let model = ClusterModel::new(clusters, metric, meta.iterations)?;
    let total = model.square_error();
    if (total - meta.square_error).abs() > 1e-9 * total.abs().max(1.0) {
        return Err(malformed(format!(
            "meta.square_error {} disagrees with cluster sum {total}",
            meta.square_error
        )));
    }

    Ok(StoredModel {
        model,
        attribute_names: meta.attribute_names,
        dataset_fingerprint: meta.fingerprint,
        created_at,
        record_count: meta.record_count,
        inserted_since_fit: meta.inserted_since_fit,
        deleted_since_fit: meta.deleted_since_fit,
        members,
    })
}

fn read(path: &Path) -> Result<String, StoreError> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            StoreError::NotFound {
                path: path.to_path_buf(),
            }
        } else {
            StoreError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

type Members = (String, MemberTable, Vec<BTreeSet<RecordId>>);

fn load_members(path: &Path, attributes: &[String], k: usize) -> Result<Members, StoreError> {
    let text = read(path)?;
    let bad = |message: String| StoreError::Membership {
        path: path.to_path_buf(),
        message,
    };
    let (first, body) = text.split_once('\n').unwrap_or((&text, ""));
    let fingerprint = first
        .strip_prefix(SIDECAR_PREFIX)
        .ok_or_else(|| bad("missing fingerprint line".into()))?
        .trim()
        .to_string();

    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let expected: Vec<&str> = ["id", "label", "cluster"]
        .into_iter()
        .chain(attributes.iter().map(String::as_str))
        .collect();
    if header.iter().ne(expected.iter().copied()) {
        return Err(bad(format!("header must be '{}'", expected.join(","))));
    }

    let mut members = MemberTable::new();
    let mut assigned = vec![BTreeSet::new(); k];
    for (row, result) in reader.records().enumerate() {
        let rec = result.map_err(|e| bad(e.to_string()))?;
        let line = row + 3;
        let id = rec[0]
            .parse::<u64>()
            .map(RecordId)
            .map_err(|_| bad(format!("line {line}: bad id '{}'", &rec[0])))?;
        let cluster = rec[2]
            .parse::<usize>()
            .ok()
            .filter(|c| *c < k)
            .ok_or_else(|| bad(format!("line {line}: bad cluster index '{}'", &rec[2])))?;
        let values = rec
            .iter()
            .skip(3)
            .map(|t| t.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|_| bad(format!("line {line}: bad coordinate")))?;
        let vector = FeatureVector::new(values).map_err(|e| bad(format!("line {line}: {e}")))?;
        let label = (!rec[1].is_empty()).then(|| rec[1].to_string());
        if members.insert(Record { id, label, vector }).is_some() {
            return Err(bad(format!("line {line}: duplicate id {id}")));
        }
        assigned[cluster].insert(id);
    }
    Ok((fingerprint, members, assigned))
}
