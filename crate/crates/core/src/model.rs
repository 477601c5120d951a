//! Cluster models and the read-only operations on them: nearest-centroid
//! assignment, mean recomputation and the squared-error objective.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::BuildHasher;

use crate::error::ClusterError;
use crate::metric::{CostCounter, Metric};
use crate::vector::{FeatureVector, RecordId};

/// Resolves record ids to their feature vectors.
pub trait RecordLookup {
    fn vector(&self, id: RecordId) -> Option<&FeatureVector>;
}

impl<V: Borrow<FeatureVector>, S: BuildHasher> RecordLookup for HashMap<RecordId, V, S> {
    fn vector(&self, id: RecordId) -> Option<&FeatureVector> {
        self.get(&id).map(Borrow::borrow)
    }
}

impl<V: Borrow<FeatureVector>> RecordLookup for BTreeMap<RecordId, V> {
    fn vector(&self, id: RecordId) -> Option<&FeatureVector> {
        self.get(&id).map(Borrow::borrow)
    }
}

/// One cluster. An empty cluster keeps the last centroid it had.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub(crate) centroid: FeatureVector,
    pub(crate) member_ids: BTreeSet<RecordId>,
    pub(crate) square_error: f64,
}

impl Cluster {
    pub fn new(centroid: FeatureVector) -> Self {
        Cluster {
            centroid,
            member_ids: BTreeSet::new(),
            square_error: 0.0,
        }
    }

    /// Builds a cluster from persisted parts. `square_error` is this
    /// cluster's share of the model objective.
    pub fn from_parts(
        centroid: FeatureVector,
        member_ids: BTreeSet<RecordId>,
        square_error: f64,
    ) -> Self {
        Cluster {
            centroid,
            member_ids,
            square_error,
        }
    }

    pub fn centroid(&self) -> &FeatureVector {
        &self.centroid
    }

    pub fn member_ids(&self) -> &BTreeSet<RecordId> {
        &self.member_ids
    }

    pub fn member_count(&self) -> usize {
        self.member_ids.len()
    }

    /// True when the cluster has lost all its members.
    pub fn is_empty(&self) -> bool {
        self.member_ids.is_empty()
    }

    pub fn square_error(&self) -> f64 {
        self.square_error
    }
}

/// Nearest-centroid result for one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assignment {
    pub cluster_index: usize,
    pub distance: f64,
}

/// k clusters sharing one metric and dimension, plus run parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterModel {
    pub(crate) clusters: Vec<Cluster>,
    pub(crate) metric: Metric,
    pub(crate) iterations: u64,
    pub(crate) dimension: usize,
}

impl ClusterModel {
    pub fn new(clusters: Vec<Cluster>, metric: Metric, iterations: u64) -> Result<Self, ClusterError> {
        let first = clusters.first().ok_or(ClusterError::NoClusters)?;
        let dimension = first.centroid.dim();
        for c in &clusters {
            c.centroid.check_dim(dimension)?;
        }
        let mut seen = BTreeSet::new();
        for id in clusters.iter().flat_map(|c| c.member_ids.iter()) {
            if !seen.insert(*id) {
                return Err(ClusterError::DuplicateRecord(*id));
            }
        }
        Ok(ClusterModel {
            clusters,
            metric,
            iterations,
            dimension,
        })
    }

    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Cached objective: sum of the per-cluster squared errors.
    pub fn square_error(&self) -> f64 {
        self.clusters.iter().map(|c| c.square_error).sum()
    }

    /// Total number of member records.
    pub fn record_count(&self) -> usize {
        self.clusters.iter().map(Cluster::member_count).sum()
    }

    pub fn centroids(&self) -> impl Iterator<Item = &FeatureVector> {
        self.clusters.iter().map(|c| &c.centroid)
    }

    /// Index of the cluster holding `id`, if any.
    pub fn cluster_of(&self, id: RecordId) -> Option<usize> {
        self.clusters.iter().position(|c| c.member_ids.contains(&id))
    }

    pub fn contains(&self, id: RecordId) -> bool {
        self.cluster_of(id).is_some()
    }

    /// Map from record id to cluster index.
    pub fn membership(&self) -> BTreeMap<RecordId, usize> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.member_ids.iter().map(move |id| (*id, i)))
            .collect()
    }

    /// Membership as a list of id sets, one per cluster.
    pub fn partition(&self) -> Vec<BTreeSet<RecordId>> {
        self.clusters.iter().map(|c| c.member_ids.clone()).collect()
    }
}

/// Nearest non-empty centroid for `x`; exact ties go to the highest index.
/// The model is not modified.
pub fn assign_point(x: &FeatureVector, model: &ClusterModel) -> Result<Assignment, ClusterError> {
    assign_point_counted(x, model, &mut CostCounter::new())
}

pub fn assign_point_counted(
    x: &FeatureVector,
    model: &ClusterModel,
    counter: &mut CostCounter,
) -> Result<Assignment, ClusterError> {
    x.check_dim(model.dimension)?;
    let mut best: Option<Assignment> = None;
    for (i, c) in model.clusters.iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        let d = counter.eval(model.metric, x.as_slice(), c.centroid.as_slice());
        if best.is_none_or(|b| d <= b.distance) {
            best = Some(Assignment {
                cluster_index: i,
                distance: d,
            });
        }
    }
    best.ok_or(ClusterError::AllClustersEmpty)
}

/// Coordinate-wise arithmetic mean of the given members, `None` when empty.
pub(crate) fn mean_of<'a>(
    vectors: impl IntoIterator<Item = &'a FeatureVector>,
    dim: usize,
) -> Option<FeatureVector> {
    let mut sum = vec![0.0; dim];
    let mut n = 0usize;
    for v in vectors {
        for (s, x) in sum.iter_mut().zip(v.as_slice()) {
            *s += x;
        }
        n += 1;
    }
    if n == 0 {
        return None;
    }
    let n = n as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Some(FeatureVector::from_raw(sum))
}

fn resolve<'a>(
    ids: impl IntoIterator<Item = &'a RecordId>,
    lookup: &'a impl RecordLookup,
    dim: usize,
) -> Result<Vec<&'a FeatureVector>, ClusterError> {
    ids.into_iter()
        .map(|id| {
            let v = lookup.vector(*id).ok_or(ClusterError::UnknownRecord(*id))?;
            v.check_dim(dim)?;
            Ok(v)
        })
        .collect()
}

fn cluster_error(metric: Metric, centroid: &FeatureVector, members: &[&FeatureVector]) -> f64 {
    members
        .iter()
        .map(|v| metric.eval_squared(v.as_slice(), centroid.as_slice()))
        .sum()
}

/// Replaces every non-empty centroid by the mean of its members and
/// recomputes the squared error. Empty clusters keep their centroid.
pub fn recompute_means(model: &mut ClusterModel, lookup: &impl RecordLookup) -> Result<(), ClusterError> {
    let all: Vec<usize> = (0..model.k()).collect();
    recompute_clusters(model, &all, lookup)
}

pub(crate) fn recompute_clusters(
    model: &mut ClusterModel,
    indices: &[usize],
    lookup: &impl RecordLookup,
) -> Result<(), ClusterError> {
    let dim = model.dimension;
    let metric = model.metric;
    // Resolve everything before touching the model.
    let mut updates = Vec::with_capacity(indices.len());
    for &i in indices {
        let cluster = &model.clusters[i];
        let members = resolve(&cluster.member_ids, lookup, dim)?;
        let centroid = mean_of(members.iter().copied(), dim).unwrap_or_else(|| cluster.centroid.clone());
        let sse = cluster_error(metric, &centroid, &members);
        updates.push((i, centroid, sse));
    }
    for (i, centroid, sse) in updates {
        model.clusters[i].centroid = centroid;
        model.clusters[i].square_error = sse;
    }
    Ok(())
}

/// Sum over all member records of the squared metric distance to their
/// cluster's centroid, computed from the data rather than the cache.
pub fn square_error(model: &ClusterModel, lookup: &impl RecordLookup) -> Result<f64, ClusterError> {
    let mut total = 0.0;
    for c in &model.clusters {
        let members = resolve(&c.member_ids, lookup, model.dimension)?;
        total += cluster_error(model.metric, &c.centroid, &members);
    }
    Ok(total)
}
