//! Batch K-means (Lloyd's algorithm).
//!
//! Each iteration assigns every record to its nearest centroid (highest index
//! on exact ties, empty clusters included) and then moves every non-empty centroid
//! to the mean of its members. The run stops at the first iteration whose
//! assignment equals the previous one, or after `max_iterations`. The
//! stopping iteration is counted, so a run that converges right after the
//! first update reports two iterations and `k * n * 2` distance evaluations.

use std::collections::BTreeSet;

use crate::error::ClusterError;
use crate::metric::{CostCounter, Metric};
use crate::model::{mean_of, Cluster, ClusterModel};
use crate::vector::{FeatureVector, Record};

pub const DEFAULT_MAX_ITERATIONS: u64 = 100;

#[derive(Debug, Clone, Default, PartialEq)]
pub enum InitStrategy {
    /// Caller-supplied initial centers, one per cluster.
    Explicit(Vec<FeatureVector>),
    /// The first k pairwise-distinct records in input order.
    #[default]
    FirstKDistinct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub k: usize,
    pub metric: Metric,
    pub init: InitStrategy,
    pub max_iterations: u64,
}

impl FitConfig {
    pub fn new(k: usize, metric: Metric) -> Self {
        FitConfig {
            k,
            metric,
            init: InitStrategy::default(),
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }

    pub fn with_init(mut self, init: InitStrategy) -> Self {
        self.init = init;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: u64) -> Self {
        self.max_iterations = max_iterations;
        self
    }
}

/// Result of a Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct LloydFit {
    pub model: ClusterModel,
    /// Cluster index per input record, in input order.
    pub labels: Vec<usize>,
    /// False when `max_iterations` was reached with assignments still moving.
    pub converged: bool,
    /// Squared error at the end of every iteration.
    pub error_history: Vec<f64>,
}

pub fn lloyd_fit(data: &[Record], config: &FitConfig) -> Result<LloydFit, ClusterError> {
    lloyd_fit_counted(data, config, &mut CostCounter::new())
}

pub fn lloyd_fit_counted(
    data: &[Record],
    config: &FitConfig,
    counter: &mut CostCounter,
) -> Result<LloydFit, ClusterError> {
    let first = data.first().ok_or(ClusterError::EmptyData)?;
    let n = data.len();
    let k = config.k;
    if k < 1 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }
    if config.max_iterations < 1 {
        return Err(ClusterError::InvalidMaxIterations);
    }
    let dim = first.vector.dim();
    let mut ids = BTreeSet::new();
    for r in data {
        r.vector.check_dim(dim)?;
        if !ids.insert(r.id) {
            return Err(ClusterError::DuplicateRecord(r.id));
        }
    }

    let mut centroids = initial_centers(data, config)?;
    for c in &centroids {
        c.check_dim(dim)?;
    }

    let metric = config.metric;
    let mut labels = vec![usize::MAX; n];
    let mut error_history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iterations {
        iterations += 1;
        counter.lloyd_iterations += 1;

        let mut changed = false;
        for (label, record) in labels.iter_mut().zip(data) {
            let nearest = nearest(record.vector.as_slice(), &centroids, metric, counter);
            if nearest != *label {
                *label = nearest;
                changed = true;
            }
        }
        if !changed {
            converged = true;
            error_history.push(objective(data, &labels, &centroids, metric));
            break;
        }

        for (j, centroid) in centroids.iter_mut().enumerate() {
            let members = labels
                .iter()
                .zip(data)
                .filter(|(l, _)| **l == j)
                .map(|(_, r)| &r.vector);
            if let Some(mean) = mean_of(members, dim) {
                *centroid = mean;
            }
        }
        error_history.push(objective(data, &labels, &centroids, metric));
    }

    let mut clusters: Vec<Cluster> = centroids.into_iter().map(Cluster::new).collect();
    for (label, record) in labels.iter().zip(data) {
        let c = &mut clusters[*label];
        c.square_error += metric.eval_squared(record.vector.as_slice(), c.centroid.as_slice());
        c.member_ids.insert(record.id);
    }

    Ok(LloydFit {
        model: ClusterModel {
            clusters,
            metric,
            iterations,
            dimension: dim,
        },
        labels,
        converged,
        error_history,
    })
}

fn nearest(x: &[f64], centroids: &[FeatureVector], metric: Metric, counter: &mut CostCounter) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, c) in centroids.iter().enumerate() {
        let d = counter.eval(metric, x, c.as_slice());
        if d <= best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

fn objective(data: &[Record], labels: &[usize], centroids: &[FeatureVector], metric: Metric) -> f64 {
    labels
        .iter()
        .zip(data)
        .map(|(l, r)| metric.eval_squared(r.vector.as_slice(), centroids[*l].as_slice()))
        .sum()
}

fn initial_centers(data: &[Record], config: &FitConfig) -> Result<Vec<FeatureVector>, ClusterError> {
    match &config.init {
        InitStrategy::Explicit(centers) => {
            if centers.len() != config.k {
                return Err(ClusterError::InitCount {
                    k: config.k,
                    found: centers.len(),
                });
            }
            Ok(centers.clone())
        }
        InitStrategy::FirstKDistinct => {
            let mut picked: Vec<FeatureVector> = Vec::with_capacity(config.k);
            for r in data {
                if picked.len() == config.k {
                    break;
                }
                if !picked.contains(&r.vector) {
                    picked.push(r.vector.clone());
                }
            }
            if picked.len() < config.k {
                return Err(ClusterError::NotEnoughDistinct {
                    k: config.k,
                    distinct: picked.len(),
                });
            }
            Ok(picked)
        }
    }
}
