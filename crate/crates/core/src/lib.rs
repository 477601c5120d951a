//! Batch and incremental K-means clustering.
//!
//! A model is fitted once with [`lloyd_fit`]; later arrivals are placed on the
//! nearest stored centroid by [`incremental_insert`] and removals are handled
//! by [`incremental_delete`]. The [`store`] module persists models, [`ingest`]
//! reads ARFF and CSV datasets and [`bench`] compares the cost of refitting
//! against incremental insertion as the database grows.

pub mod bench;
mod error;
mod incremental;
pub mod ingest;
mod lloyd;
mod metric;
mod model;
pub mod store;
mod vector;

pub use error::ClusterError;
pub use incremental::{incremental_delete, incremental_insert, incremental_insert_counted};
pub use lloyd::{lloyd_fit, lloyd_fit_counted, FitConfig, InitStrategy, LloydFit, DEFAULT_MAX_ITERATIONS};
pub use metric::{CostCounter, Metric, UnknownMetric};
pub use model::{
    assign_point, assign_point_counted, recompute_means, square_error, Assignment, Cluster, ClusterModel,
    RecordLookup,
};
pub use vector::{records_from_vectors, FeatureVector, Record, RecordId};
