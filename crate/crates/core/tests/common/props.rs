//! Property checks shared by the proptest suites and the acceptance run.

use std::collections::BTreeMap;

use chrono::DateTime;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use inckm::bench::{run_benchmark, BenchConfig};
use inckm::ingest::{parse_arff_str, parse_csv_str, write_arff, write_csv, Dataset, IngestOptions};
use inckm::store::{load_model, save_model, MemberTable, StoredModel};
use inckm::{
    incremental_delete, incremental_insert, lloyd_fit, recompute_means, Cluster, ClusterModel, FeatureVector,
    FitConfig, Metric, Record, RecordId,
};

use super::{fv, rel_close, rows_to_records};

pub fn metric() -> impl Strategy<Value = Metric> {
    prop_oneof![Just(Metric::Manhattan), Just(Metric::Euclidean)]
}

fn coord() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-40i32..40).prop_map(|x| f64::from(x) / 2.0),
        -100.0f64..100.0,
    ]
}

/// (rows, k) with 3..=40 rows of dimension 1..=3 and k in 1..=4.
pub fn clustering_input() -> impl Strategy<Value = (Vec<Vec<f64>>, usize)> {
    (1usize..=3, 3usize..=40).prop_flat_map(|(d, n)| {
        (
            prop::collection::vec(prop::collection::vec(coord(), d), n),
            1usize..=n.min(4),
        )
    })
}

fn fit_or_skip(rows: &[Vec<f64>], k: usize, metric: Metric) -> Result<inckm::LloydFit, TestCaseError> {
    match lloyd_fit(&rows_to_records(rows), &FitConfig::new(k, metric)) {
        Ok(f) => Ok(f),
        Err(inckm::ClusterError::NotEnoughDistinct { .. }) => Err(TestCaseError::reject("too few distinct rows")),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

fn lookup(records: &[Record]) -> BTreeMap<RecordId, FeatureVector> {
    records.iter().map(|r| (r.id, r.vector.clone())).collect()
}

/// Every non-empty centroid equals the mean of its members.
fn assert_means(model: &ClusterModel, data: &BTreeMap<RecordId, FeatureVector>) -> Result<(), TestCaseError> {
    for (j, c) in model.clusters().iter().enumerate() {
        if c.is_empty() {
            continue;
        }
        for i in 0..model.dimension() {
            let mean = c.member_ids().iter().map(|id| data[id][i]).sum::<f64>() / c.member_count() as f64;
            prop_assert!(
                rel_close(c.centroid()[i], mean, 1e-9),
                "cluster {j} coord {i}: centroid {} vs mean {mean}",
                c.centroid()[i]
            );
        }
    }
    Ok(())
}

pub fn nearest_centroid(rows: Vec<Vec<f64>>, k: usize, metric: Metric) -> Result<(), TestCaseError> {
    let fit = fit_or_skip(&rows, k, metric)?;
    prop_assume!(fit.converged);
    let model = &fit.model;
    for (row, own) in rows.iter().zip(&fit.labels) {
        let x = fv(row);
        let d_own = metric.distance(&x, model.clusters()[*own].centroid()).unwrap();
        for c in model.clusters().iter().filter(|c| !c.is_empty()) {
            let d = metric.distance(&x, c.centroid()).unwrap();
            prop_assert!(d_own <= d + 1e-9, "own {d_own} > other {d}");
        }
    }
    Ok(())
}

/// Mean consistency after fit, recompute, delete and insert-with-update.
pub fn mean_consistency(
    rows: Vec<Vec<f64>>,
    k: usize,
    metric: Metric,
    delete_mask: Vec<bool>,
    extra: Vec<f64>,
) -> Result<(), TestCaseError> {
    let fit = fit_or_skip(&rows, k, metric)?;
    let mut records = rows_to_records(&rows);
    let mut model = fit.model;
    let mut table = lookup(&records);
    assert_means(&model, &table)?;

    recompute_means(&mut model, &table).unwrap();
    assert_means(&model, &table)?;

    let doomed: Vec<RecordId> = records
        .iter()
        .zip(delete_mask.iter().cycle())
        .filter(|(_, d)| **d)
        .map(|(r, _)| r.id)
        .collect();
    incremental_delete(&mut model, &doomed, &table).unwrap();
    assert_means(&model, &table)?;
    prop_assert_eq!(model.record_count(), records.len() - doomed.len());

    prop_assume!(model.clusters().iter().any(|c| !c.is_empty()));
    let d = model.dimension();
    let batch: Vec<Record> = extra
        .chunks(d)
        .filter(|c| c.len() == d)
        .enumerate()
        .map(|(i, c)| Record::new(1000 + i as u64, fv(c)))
        .collect();
    incremental_insert(&mut model, &batch, true).unwrap();
    records.extend(batch);
    table = lookup(&records);
    assert_means(&model, &table)?;
    Ok(())
}

pub fn sse_non_increasing(rows: Vec<Vec<f64>>, k: usize) -> Result<(), TestCaseError> {
    let fit = fit_or_skip(&rows, k, Metric::Euclidean)?;
    for w in fit.error_history.windows(2) {
        prop_assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0), "error rose from {} to {}", w[0], w[1]);
    }
    Ok(())
}

pub fn metric_axioms(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>, metric: Metric) -> Result<(), TestCaseError> {
    let (a, b, c) = (fv(&a), fv(&b), fv(&c));
    let d = |x: &FeatureVector, y: &FeatureVector| metric.distance(x, y).unwrap();
    prop_assert_eq!(d(&a, &a), 0.0);
    prop_assert!(d(&a, &b) >= 0.0);
    prop_assert_eq!(d(&a, &b), d(&b, &a));
    prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9 * (1.0 + d(&a, &c)));
    Ok(())
}

pub fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Metric)> {
    (1usize..=5).prop_flat_map(|d| {
        let v = || prop::collection::vec(-1e3f64..1e3, d);
        (v(), v(), v(), metric())
    })
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        prop::num::f64::NORMAL,
        Just(0.0),
        Just(-0.0),
        prop::num::f64::POSITIVE | prop::num::f64::SUBNORMAL,
    ]
    .prop_filter("finite", |v| v.is_finite())
}

/// Random stored models, including empty clusters and unicode names.
pub fn stored_model() -> impl Strategy<Value = StoredModel> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(k, d)| {
        (
            prop::collection::vec(prop::collection::vec(finite(), d), k),
            prop::collection::vec(0.0f64..1e6, k),
            prop::collection::vec((0usize..k, prop::collection::vec(finite(), d), prop::option::of("\\PC{1,8}")), 0..12),
            prop::collection::vec("\\PC{1,10}", d),
            metric(),
            (0u64..500, 0u64..10_000, 0u64..100, 0u64..100),
            (0i64..4_000_000_000, 0u32..1_000_000_000),
            "[0-9a-f]{0,64}",
        )
            .prop_map(
                move |(centroids, errors, members, names, metric, (iters, count, ins, del), (secs, nanos), fp)| {
                    let mut ids = vec![std::collections::BTreeSet::new(); k];
                    let mut table = MemberTable::new();
                    for (i, (cluster, values, label)) in members.into_iter().enumerate() {
                        let id = RecordId(i as u64 * 7 + 3);
                        ids[cluster].insert(id);
                        table.insert(Record {
                            id,
                            label,
                            vector: FeatureVector::new(values).unwrap(),
                        });
                    }
                    let clusters = centroids
                        .into_iter()
                        .zip(errors)
                        .zip(ids)
                        .map(|((c, e), ids)| Cluster::from_parts(FeatureVector::new(c).unwrap(), ids, e))
                        .collect();
                    StoredModel {
                        model: ClusterModel::new(clusters, metric, iters).unwrap(),
                        attribute_names: names,
                        dataset_fingerprint: fp,
                        created_at: DateTime::from_timestamp(secs, nanos).unwrap(),
                        record_count: count,
                        inserted_since_fit: ins,
                        deleted_since_fit: del,
                        members: table,
                    }
                },
            )
    })
}

pub fn store_round_trip(m: StoredModel) -> Result<(), TestCaseError> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.toml");
    save_model(&m, &path).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let back = load_model(&path).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for (a, b) in back.model.centroids().zip(m.model.centroids()) {
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }
    prop_assert_eq!(back, m);
    Ok(())
}

/// Datasets with unique attribute names and optional letter-bounded labels.
pub fn dataset() -> impl Strategy<Value = Dataset> {
    (1usize..=4, 0usize..=50, any::<bool>()).prop_flat_map(|(d, n, labelled)| {
        (
            prop::collection::btree_set("a_[A-Za-z0-9_]{1,6}", d),
            prop::collection::vec(prop::collection::vec(finite(), d), n),
            prop::collection::vec("[A-Za-z][A-Za-z0-9 ,'\"/]{0,8}[A-Za-z]", n),
        )
            .prop_map(move |(names, rows, labels)| {
                let records = rows
                    .into_iter()
                    .zip(labels)
                    .enumerate()
                    .map(|(i, (r, l))| {
                        let rec = Record::new(i as u64, FeatureVector::new(r).unwrap());
                        if labelled {
                            rec.with_label(l)
                        } else {
                            rec
                        }
                    })
                    .collect();
                Dataset::new(names.into_iter().collect(), records)
            })
    })
}

pub fn arff_round_trip(ds: Dataset) -> Result<(), TestCaseError> {
    let opts = IngestOptions::default();
    let once = parse_arff_str(&write_arff(&ds, "generated"), &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(once.same_content(&ds), "first parse differs");
    let twice = parse_arff_str(&write_arff(&once, "generated"), &opts).unwrap();
    prop_assert!(twice.same_content(&once));
    Ok(())
}

pub fn csv_round_trip(ds: Dataset) -> Result<(), TestCaseError> {
    let opts = IngestOptions::default().with_features(ds.attribute_names.clone());
    let once = parse_csv_str(&write_csv(&ds), true, &opts).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(once.same_content(&ds), "first parse differs");
    let twice = parse_csv_str(&write_csv(&once), true, &opts).unwrap();
    prop_assert!(twice.same_content(&once));
    Ok(())
}

pub fn fit_determinism(rows: Vec<Vec<f64>>, k: usize, metric: Metric) -> Result<(), TestCaseError> {
    let a = fit_or_skip(&rows, k, metric)?;
    let b = fit_or_skip(&rows, k, metric)?;
    prop_assert_eq!(&a.labels, &b.labels);
    for (x, y) in a.model.centroids().zip(b.model.centroids()) {
        for (p, q) in x.as_slice().iter().zip(y.as_slice()) {
            prop_assert_eq!(p.to_bits(), q.to_bits());
        }
    }
    prop_assert_eq!(a.model.square_error().to_bits(), b.model.square_error().to_bits());
    prop_assert_eq!(a, b);
    Ok(())
}

/// Two benchmark runs with the same seed agree on every counter.
pub fn bench_determinism(rows: Vec<Vec<f64>>, k: usize, seed: u64) -> Result<(), TestCaseError> {
    let n = rows.len();
    let names = (0..rows[0].len()).map(|i| format!("x{i}")).collect();
    let base = Dataset::new(names, rows_to_records(&rows));
    let cfg = BenchConfig {
        repetitions: 1,
        seed,
        ..Default::default()
    };
    let deltas = [1, n / 2 + 1, n];
    let run = || run_benchmark(&base, &deltas, k, Metric::Euclidean, &cfg);
    let (a, b) = match (run(), run()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(inckm::bench::BenchError::Cluster(inckm::ClusterError::NotEnoughDistinct { .. })), _) => {
            return Err(TestCaseError::reject("too few distinct rows"))
        }
        (a, b) => return Err(TestCaseError::fail(format!("{:?} / {:?}", a.err(), b.err()))),
    };
    for (p, q) in a.points().iter().zip(b.points()) {
        prop_assert_eq!(p.delta_percent(), q.delta_percent());
        prop_assert_eq!(p.full_cost.distance_evaluations, q.full_cost.distance_evaluations);
        prop_assert_eq!(p.full_cost.iterations, q.full_cost.iterations);
        prop_assert_eq!(p.incremental_cost.distance_evaluations, q.incremental_cost.distance_evaluations);
        prop_assert_eq!(p.incremental_cost.distance_evaluations, (k * p.batch_size()) as u64);
    }
    Ok(())
}
