//! Cost comparison between refitting from scratch and incremental insertion
//! as the database grows by a percentage δ of its original size.
//!
//! Every measurement records wall time (median over repetitions) together
//! with distance-evaluation and iteration counters. The counters are exact
//! and reproducible; wall time depends on the machine.

mod replay;
mod report;
mod threshold;

use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ClusterError;
use crate::incremental::incremental_insert_counted;
use crate::ingest::Dataset;
use crate::lloyd::{lloyd_fit_counted, FitConfig, InitStrategy, DEFAULT_MAX_ITERATIONS};
use crate::metric::{CostCounter, Metric};
use crate::vector::{FeatureVector, Record, RecordId};

pub use self::replay::{parse_replay_str, read_replay};
pub use self::report::{emit_report, render_summary, ReportFiles};
pub use self::threshold::{estimate_threshold, CostBasis, ThresholdEstimate, ThresholdOutcome};

pub const DEFAULT_REPETITIONS: usize = 5;
pub const DEFAULT_NOISE: f64 = 0.05;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("old size must be at least 1, got {0}")]
    EmptyBase(usize),

    #[error("new size {new} is smaller than old size {old}")]
    Shrinking { old: usize, new: usize },

    #[error("no delta batch sizes given")]
    NoDeltas,

    #[error("delta batch sizes must be positive and strictly increasing")]
    DeltasNotIncreasing,

    #[error("batch of {needed} records requested but only {available} extension records available")]
    ExtensionTooSmall { needed: usize, available: usize },

    #[error("point with old size {found} in a series with base {base}")]
    MixedBase { base: usize, found: usize },

    #[error("repetitions must be at least 1")]
    NoRepetitions,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("replay line {line}: {message}")]
    Replay { line: usize, message: String },

    #[error(transparent)]
    Cluster(#[from] ClusterError),
}

/// Percentage growth of the database: `(new - old) / old * 100`.
pub fn delta_percent(old_size: usize, new_size: usize) -> Result<f64, BenchError> {
    if old_size < 1 {
        return Err(BenchError::EmptyBase(old_size));
    }
    if new_size < old_size {
        return Err(BenchError::Shrinking {
            old: old_size,
            new: new_size,
        });
    }
    Ok((new_size - old_size) as f64 * 100.0 / old_size as f64)
}

/// Cost of one clustering run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cost {
    pub wall_time_ms: f64,
    pub distance_evaluations: u64,
    /// Lloyd iterations; zero for incremental insertion.
    pub iterations: u64,
}

impl Cost {
    pub fn value(&self, basis: CostBasis) -> f64 {
        match basis {
            CostBasis::WallTime => self.wall_time_ms,
            CostBasis::DistanceEvals => self.distance_evaluations as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaPoint {
    old_size: usize,
    new_size: usize,
    pub full_cost: Cost,
    pub incremental_cost: Cost,
}

impl DeltaPoint {
    pub fn new(old_size: usize, new_size: usize, full_cost: Cost, incremental_cost: Cost) -> Result<Self, BenchError> {
        delta_percent(old_size, new_size)?;
        Ok(DeltaPoint {
            old_size,
            new_size,
            full_cost,
            incremental_cost,
        })
    }

    pub fn old_size(&self) -> usize {
        self.old_size
    }

    pub fn new_size(&self) -> usize {
        self.new_size
    }

    pub fn batch_size(&self) -> usize {
        self.new_size - self.old_size
    }

    pub fn delta_percent(&self) -> f64 {
        (self.new_size - self.old_size) as f64 * 100.0 / self.old_size as f64
    }
}

/// Where appended records come from.
#[derive(Debug, Clone, PartialEq)]
pub enum BatchSource {
    /// Base rows drawn uniformly with replacement, each coordinate scaled by
    /// a factor in `[1 - noise, 1 + noise]`.
    Resample { noise: f64 },
    /// Records taken in order from a supplied extension set.
    Extension(Vec<FeatureVector>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub repetitions: usize,
    pub init: InitStrategy,
    pub max_iterations: u64,
    pub source: BatchSource,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            repetitions: DEFAULT_REPETITIONS,
            init: InitStrategy::FirstKDistinct,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            source: BatchSource::Resample { noise: DEFAULT_NOISE },
            seed: 0,
        }
    }
}

/// Measured (or replayed) costs over a grid of δ values.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaSeries {
    pub base_size: usize,
    points: Vec<DeltaPoint>,
    /// Cost of fitting the base alone, when measured.
    pub base_cost: Option<Cost>,
    /// False for replayed series without counter columns.
    pub has_counters: bool,
    pub k: Option<usize>,
    pub metric: Option<Metric>,
    pub config: BenchConfig,
}

impl DeltaSeries {
    /// Points must be non-empty, share `base_size` and have strictly
    /// increasing δ.
    pub fn new(base_size: usize, points: Vec<DeltaPoint>, config: BenchConfig) -> Result<Self, BenchError> {
        if points.is_empty() {
            return Err(BenchError::NoDeltas);
        }
        for p in &points {
            if p.old_size != base_size {
                return Err(BenchError::MixedBase {
                    base: base_size,
                    found: p.old_size,
                });
            }
        }
        if points.windows(2).any(|w| w[1].delta_percent() <= w[0].delta_percent()) {
            return Err(BenchError::DeltasNotIncreasing);
        }
        Ok(DeltaSeries {
            base_size,
            points,
            base_cost: None,
            has_counters: true,
            k: None,
            metric: None,
            config,
        })
    }

    pub fn points(&self) -> &[DeltaPoint] {
        &self.points
    }
}

/// `count` records resampled from `base` with multiplicative noise; ids
/// start at `first_id`.
pub fn resample(base: &[Record], count: usize, noise: f64, seed: u64, first_id: u64) -> Vec<Record> {
    if base.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let src = &base[rng.random_range(0..base.len())].vector;
            let values = src
                .as_slice()
                .iter()
                .map(|x| {
                    let factor = if noise > 0.0 { 1.0 + rng.random_range(-noise..=noise) } else { 1.0 };
                    x * factor
                })
                .collect();
            Record::new(first_id + i as u64, FeatureVector::from_raw(values))
        })
        .collect()
}

fn batch_pool(base: &Dataset, size: usize, config: &BenchConfig) -> Result<Vec<Record>, BenchError> {
    let first_id = base.records.iter().map(|r| r.id.0 + 1).max().unwrap_or(0);
    match &config.source {
        BatchSource::Resample { noise } => Ok(resample(&base.records, size, *noise, config.seed, first_id)),
        BatchSource::Extension(rows) => {
            if rows.len() < size {
                return Err(BenchError::ExtensionTooSmall {
                    needed: size,
                    available: rows.len(),
                });
            }
            rows[..size]
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    v.check_dim(base.dimension())?;
                    Ok(Record::new(RecordId(first_id + i as u64), v.clone()))
                })
                .collect()
        }
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1000.0
}

fn measure_fit(data: &[Record], fit: &FitConfig, reps: usize) -> Result<(Cost, crate::lloyd::LloydFit), BenchError> {
    let mut times = Vec::with_capacity(reps);
    let mut result = None;
    for _ in 0..reps {
        let mut counter = CostCounter::new();
        let start = Instant::now();
        let out = lloyd_fit_counted(data, fit, &mut counter)?;
        times.push(elapsed_ms(start));
        result.get_or_insert((counter, out));
    }
    let (counter, out) = result.expect("at least one repetition");
    Ok((
        Cost {
            wall_time_ms: median(times),
            distance_evaluations: counter.distance_evaluations,
            iterations: counter.lloyd_iterations,
        },
        out,
    ))
}

/// Runs the refit-vs-incremental comparison for each batch size in `deltas`.
///
/// For batch size m the full path refits base + first m batch records from
/// the configured init; the incremental path inserts the same m records into
/// the model fitted on the base alone, without updating means. Runs are
/// sequential; each is repeated `config.repetitions` times and the median
/// wall time is kept.
pub fn run_benchmark(
    base: &Dataset,
    deltas: &[usize],
    k: usize,
    metric: Metric,
    config: &BenchConfig,
) -> Result<DeltaSeries, BenchError> {
    if deltas.is_empty() {
        return Err(BenchError::NoDeltas);
    }
    if deltas[0] == 0 || deltas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(BenchError::DeltasNotIncreasing);
    }
    if config.repetitions == 0 {
        return Err(BenchError::NoRepetitions);
    }
    let n = base.len();
    if n == 0 {
        return Err(BenchError::EmptyBase(0));
    }
    if k < 1 || k > n {
        return Err(ClusterError::InvalidK { k, n }.into());
    }

    let fit = FitConfig::new(k, metric)
        .with_init(config.init.clone())
        .with_max_iterations(config.max_iterations);
    let pool = batch_pool(base, *deltas.last().expect("non-empty"), config)?;

    let (base_cost, base_fit) = measure_fit(&base.records, &fit, config.repetitions)?;
    let base_model = base_fit.model;

    let mut points = Vec::with_capacity(deltas.len());
    for &m in deltas {
        let batch = &pool[..m];
        let mut combined = base.records.clone();
        combined.extend_from_slice(batch);
        let (full_cost, _) = measure_fit(&combined, &fit, config.repetitions)?;

        let mut times = Vec::with_capacity(config.repetitions);
        let mut evals = None;
        for _ in 0..config.repetitions {
            let mut model = base_model.clone();
            let mut counter = CostCounter::new();
            let start = Instant::now();
            incremental_insert_counted(&mut model, batch, false, &mut counter)?;
            times.push(elapsed_ms(start));
            evals.get_or_insert(counter.distance_evaluations);
        }
        let incremental_cost = Cost {
            wall_time_ms: median(times),
            distance_evaluations: evals.expect("at least one repetition"),
            iterations: 0,
        };
        points.push(DeltaPoint::new(n, n + m, full_cost, incremental_cost)?);
    }

    let mut series = DeltaSeries::new(n, points, config.clone())?;
    series.base_cost = Some(base_cost);
    series.k = Some(k);
    series.metric = Some(metric);
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::records_from_vectors;

    fn grid(n: usize) -> Dataset {
        let records = records_from_vectors((0..n).map(|i| {
            let x = (i % 17) as f64 + if i % 3 == 0 { 40.0 } else { 0.0 };
            FeatureVector::new(vec![x, (i % 5) as f64]).unwrap()
        }));
        Dataset::new(vec!["x".into(), "y".into()], records)
    }

    #[test]
    fn delta_percent_examples() {
        assert_eq!(delta_percent(1000, 1100).unwrap(), 10.0);
        assert_eq!(delta_percent(7, 7).unwrap(), 0.0);
        assert_eq!(delta_percent(1000, 1570).unwrap(), 57.0);
        assert!(matches!(delta_percent(0, 5), Err(BenchError::EmptyBase(0))));
        assert!(matches!(delta_percent(10, 5), Err(BenchError::Shrinking { old: 10, new: 5 })));
    }

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn counters_follow_k_times_batch() {
        let base = grid(200);
        let cfg = BenchConfig {
            repetitions: 1,
            ..Default::default()
        };
        let series = run_benchmark(&base, &[20, 40, 60], 4, Metric::Euclidean, &cfg).unwrap();
        let deltas: Vec<f64> = series.points().iter().map(DeltaPoint::delta_percent).collect();
        assert_eq!(deltas, vec![10.0, 20.0, 30.0]);
        for p in series.points() {
            assert_eq!(p.incremental_cost.distance_evaluations, 4 * p.batch_size() as u64);
            assert_eq!(
                p.full_cost.distance_evaluations,
                4 * p.new_size() as u64 * p.full_cost.iterations
            );
        }
        let base_cost = series.base_cost.unwrap();
        assert_eq!(base_cost.distance_evaluations, 4 * 200 * base_cost.iterations);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let base = grid(10);
        let cfg = BenchConfig::default();
        assert!(matches!(run_benchmark(&base, &[], 2, Metric::Euclidean, &cfg), Err(BenchError::NoDeltas)));
        assert!(matches!(
            run_benchmark(&base, &[5, 5], 2, Metric::Euclidean, &cfg),
            Err(BenchError::DeltasNotIncreasing)
        ));
        assert!(matches!(
            run_benchmark(&base, &[5], 11, Metric::Euclidean, &cfg),
            Err(BenchError::Cluster(ClusterError::InvalidK { .. }))
        ));
        let ext = BenchConfig {
            source: BatchSource::Extension(vec![FeatureVector::new(vec![1.0, 1.0]).unwrap()]),
            ..Default::default()
        };
        assert!(matches!(
            run_benchmark(&base, &[2], 2, Metric::Euclidean, &ext),
            Err(BenchError::ExtensionTooSmall { needed: 2, available: 1 })
        ));
    }

    #[test]
    fn resampling_is_seeded_and_bounded() {
        let base = grid(50);
        let a = resample(&base.records, 30, 0.05, 9, 100);
        let b = resample(&base.records, 30, 0.05, 9, 100);
        let c = resample(&base.records, 30, 0.05, 10, 100);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a[0].id, RecordId(100));
        for r in &a {
            let within = base.records.iter().any(|src| {
                src.vector
                    .as_slice()
                    .iter()
                    .zip(r.vector.as_slice())
                    .all(|(s, x)| (x - s).abs() <= 0.05 * s.abs() + 1e-12)
            });
            assert!(within);
        }
    }
}
