//! Distance functions and the distance-evaluation counter used as a
//! hardware-independent cost measure.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ClusterError;
use crate::vector::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Metric {
    /// L1: sum of absolute coordinate differences.
    Manhattan,
    /// L2: square root of the summed squared differences.
    Euclidean,
}

impl Metric {
    /// Distance between two vectors of equal dimension.
    pub fn distance(self, a: &FeatureVector, b: &FeatureVector) -> Result<f64, ClusterError> {
        a.check_dim(b.dim())?;
        Ok(self.eval(a.as_slice(), b.as_slice()))
    }

    /// Squared distance. For Euclidean this skips the square root.
    pub fn squared_distance(
        self,
        a: &FeatureVector,
        b: &FeatureVector,
    ) -> Result<f64, ClusterError> {
        a.check_dim(b.dim())?;
        Ok(self.eval_squared(a.as_slice(), b.as_slice()))
    }

    pub(crate) fn eval(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            Metric::Euclidean => sum_sq(a, b).sqrt(),
        }
    }

    pub(crate) fn eval_squared(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Manhattan => {
                let d = self.eval(a, b);
                d * d
            }
            Metric::Euclidean => sum_sq(a, b),
        }
    }

    /// Upper-case tag used in model files.
    pub fn tag(self) -> &'static str {
        match self {
            Metric::Manhattan => "MANHATTAN",
            Metric::Euclidean => "EUCLIDEAN",
        }
    }
}

fn sum_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownMetric(pub String);

impl fmt::Display for UnknownMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown metric '{}' (expected manhattan or euclidean)", self.0)
    }
}

impl std::error::Error for UnknownMetric {}

impl FromStr for Metric {
    type Err = UnknownMetric;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "manhattan" | "l1" => Ok(Metric::Manhattan),
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            _ => Err(UnknownMetric(s.to_string())),
        }
    }
}

/// Operation counts accumulated while clustering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostCounter {
    pub distance_evaluations: u64,
    pub lloyd_iterations: u64,
}

impl CostCounter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Metric distance that also bumps `distance_evaluations`.
    pub fn distance(
        &mut self,
        metric: Metric,
        a: &FeatureVector,
        b: &FeatureVector,
    ) -> Result<f64, ClusterError> {
        let d = metric.distance(a, b)?;
        self.distance_evaluations += 1;
        Ok(d)
    }

    pub(crate) fn eval(&mut self, metric: Metric, a: &[f64], b: &[f64]) -> f64 {
        self.distance_evaluations += 1;
        metric.eval(a, b)
    }
}
