use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::ClusterError;

/// Identifier of one database row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(pub u64);

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for RecordId {
    fn from(id: u64) -> Self {
        RecordId(id)
    }
}

/// The numeric attributes of one record. Never empty, never NaN or infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self, ClusterError> {
        if values.is_empty() {
            return Err(ClusterError::EmptyVector);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ClusterError::NonFinite { index, value });
        }
        Ok(FeatureVector(values))
    }

    /// All-zero vector of dimension `dim`.
    pub fn zeros(dim: usize) -> Result<Self, ClusterError> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|v| v.is_finite()));
        FeatureVector(values)
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<(), ClusterError> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(ClusterError::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }
}

impl Index<usize> for FeatureVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = ClusterError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        FeatureVector::new(values)
    }
}

/// One row: identifier, optional non-numeric label (e.g. a date), and features.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub id: RecordId,
    pub label: Option<String>,
    pub vector: FeatureVector,
}

impl Record {
    pub fn new(id: impl Into<RecordId>, vector: FeatureVector) -> Self {
        Record {
            id: id.into(),
            label: None,
            vector,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Wraps plain vectors as records with ids `0..n` in order.
pub fn records_from_vectors(vectors: impl IntoIterator<Item = FeatureVector>) -> Vec<Record> {
    vectors
        .into_iter()
        .enumerate()
        .map(|(i, v)| Record::new(i as u64, v))
        .collect()
}
