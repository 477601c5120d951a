//! Incremental maintenance of a fitted model: new records are placed on the
//! nearest persisted centroid without rerunning Lloyd, deleted records are
//! dropped and the affected means recomputed.

use std::collections::BTreeSet;

use crate::error::ClusterError;
use crate::metric::CostCounter;
use crate::model::{assign_point_counted, recompute_clusters, Assignment, ClusterModel, RecordLookup};
use crate::vector::{Record, RecordId};

/// Inserts `batch` in order, each record against the model as it stands at
/// its turn. With `update_means` the receiving centroid moves to the new
/// running mean after every insert; otherwise centroids stay put.
///
/// Nothing is modified when an error is returned.
pub fn incremental_insert(
    model: &mut ClusterModel,
    batch: &[Record],
    update_means: bool,
) -> Result<Vec<Assignment>, ClusterError> {
    incremental_insert_counted(model, batch, update_means, &mut CostCounter::new())
}

pub fn incremental_insert_counted(
    model: &mut ClusterModel,
    batch: &[Record],
    update_means: bool,
    counter: &mut CostCounter,
) -> Result<Vec<Assignment>, ClusterError> {
    let mut incoming = BTreeSet::new();
    for r in batch {
        r.vector.check_dim(model.dimension)?;
        if model.contains(r.id) || !incoming.insert(r.id) {
            return Err(ClusterError::DuplicateRecord(r.id));
        }
    }
    if !batch.is_empty() && model.clusters.iter().all(|c| c.is_empty()) {
        return Err(ClusterError::AllClustersEmpty);
    }

    let metric = model.metric;
    let mut assignments = Vec::with_capacity(batch.len());
    for r in batch {
        let a = assign_point_counted(&r.vector, model, counter)?;
        let cluster = &mut model.clusters[a.cluster_index];
        let n = cluster.member_count() as f64;
        if update_means {
            // Moving the mean by (x - mu) / (n + 1) adds n/(n+1) * |x - mu|^2
            // to the squared Euclidean error.
            let sq = metric.eval_squared(r.vector.as_slice(), cluster.centroid.as_slice());
            cluster.square_error += n / (n + 1.0) * sq;
            for (m, x) in cluster.centroid.as_mut_slice().iter_mut().zip(r.vector.as_slice()) {
                *m += (x - *m) / (n + 1.0);
            }
        } else {
            cluster.square_error += a.distance * a.distance;
        }
        cluster.member_ids.insert(r.id);
        assignments.push(a);
    }
    Ok(assignments)
}

/// Removes `ids` from their clusters and recomputes the means and squared
/// error of every cluster that lost a member. Clusters left without members
/// keep their previous centroid.
pub fn incremental_delete(
    model: &mut ClusterModel,
    ids: &[RecordId],
    lookup: &impl RecordLookup,
) -> Result<(), ClusterError> {
    let mut owners = Vec::with_capacity(ids.len());
    let mut seen = BTreeSet::new();
    for &id in ids {
        if !seen.insert(id) {
            return Err(ClusterError::UnknownRecord(id));
        }
        owners.push((id, model.cluster_of(id).ok_or(ClusterError::UnknownRecord(id))?));
    }
    if owners.is_empty() {
        return Ok(());
    }

    let mut scratch = model.clone();
    let mut affected = BTreeSet::new();
    for (id, owner) in owners {
        scratch.clusters[owner].member_ids.remove(&id);
        affected.insert(owner);
    }
    let affected: Vec<usize> = affected.into_iter().collect();
    recompute_clusters(&mut scratch, &affected, lookup)?;
    *model = scratch;
    Ok(())
}
