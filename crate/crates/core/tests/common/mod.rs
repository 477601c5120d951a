#![allow(dead_code)]

pub mod oracle;
pub mod props;

use inckm::ingest::Dataset;
use inckm::{records_from_vectors, FeatureVector, Record};
use rand::{Rng, SeedableRng};

pub fn fv(xs: &[f64]) -> FeatureVector {
    FeatureVector::new(xs.to_vec()).unwrap()
}

pub fn rows_to_records(rows: &[Vec<f64>]) -> Vec<Record> {
    records_from_vectors(rows.iter().map(|r| fv(r)))
}

/// Worked-example data: A(15) B(7) C(8) D(11) E(5) F(14) G(3) H(1), ids 0..8.
pub fn example1_records() -> Vec<Record> {
    [15.0, 7.0, 8.0, 11.0, 5.0, 14.0, 3.0, 1.0]
        .iter()
        .zip("ABCDEFGH".chars())
        .enumerate()
        .map(|(i, (&x, c))| Record::new(i as u64, fv(&[x])).with_label(c.to_string()))
        .collect()
}

pub fn example1_init() -> inckm::InitStrategy {
    inckm::InitStrategy::Explicit(vec![fv(&[15.0]), fv(&[5.0]), fv(&[1.0])])
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(1.0)
}

/// Runs the library with `max_iterations = t` for every step `t` the oracle
/// takes and checks labels, centers and the stopping point match.
pub fn compare_with_oracle(rows: &[Vec<f64>], init: &[Vec<f64>], metric: inckm::Metric) -> Result<usize, String> {
    use inckm::{lloyd_fit, FitConfig, InitStrategy};
    let norm = match metric {
        inckm::Metric::Manhattan => oracle::Norm::L1,
        inckm::Metric::Euclidean => oracle::Norm::L2,
    };
    let steps = oracle::lloyd_steps(rows, init, norm, 100);
    let records = rows_to_records(rows);
    let init = InitStrategy::Explicit(init.iter().map(|c| fv(c)).collect());
    for (t, step) in steps.iter().enumerate() {
        let cfg = FitConfig::new(step.centers.len(), metric)
            .with_init(init.clone())
            .with_max_iterations(t as u64 + 1);
        let fit = lloyd_fit(&records, &cfg).map_err(|e| e.to_string())?;
        if fit.labels != step.labels {
            return Err(format!("step {}: labels {:?} vs oracle {:?}", t + 1, fit.labels, step.labels));
        }
        for (j, (c, o)) in fit.model.centroids().zip(&step.centers).enumerate() {
            for (x, y) in c.as_slice().iter().zip(o) {
                if (x - y).abs() > 1e-12 * y.abs().max(1.0) {
                    return Err(format!("step {}: center {j} {x} vs oracle {y}", t + 1));
                }
            }
        }
        if fit.converged != !step.changed {
            return Err(format!("step {}: converged flag disagrees", t + 1));
        }
        if fit.model.iterations() != t as u64 + 1 {
            return Err(format!("step {}: iteration count {}", t + 1, fit.model.iterations()));
        }
    }
    Ok(steps.len())
}

/// 25 small random datasets (n <= 12, d <= 3, k <= 3) from a fixed seed,
/// each with first-k-distinct initial centers.
/// Rows, initial centroids and metric.
pub type OracleCase = (Vec<Vec<f64>>, Vec<Vec<f64>>, inckm::Metric);

pub fn small_oracle_cases() -> Vec<OracleCase> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20_110_425);
    let mut cases = Vec::new();
    while cases.len() < 25 {
        let n = rng.random_range(3..=12);
        let d = rng.random_range(1..=3);
        let k = rng.random_range(1..=3);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..d).map(|_| f64::from(rng.random_range(0..12))).collect())
            .collect();
        let metric = if rng.random_bool(0.5) { inckm::Metric::Manhattan } else { inckm::Metric::Euclidean };
        if let Some(init) = oracle::first_k_distinct(&rows, k) {
            cases.push((rows, init, metric));
        }
    }
    cases
}

/// 4-attribute readings scattered around five typical pollution levels.
pub fn air_quality_like(n: usize, seed: u64) -> Dataset {
    let centers = [
        [321.4, 164.4, 10.1, 92.4],
        [252.6, 118.6, 8.4, 72.2],
        [93.5, 36.2, 5.2, 41.5],
        [165.2, 76.0, 6.7, 57.0],
        [388.9, 202.0, 12.0, 107.1],
    ];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|i| {
            let c = centers[rng.random_range(0..centers.len())];
            let v: Vec<f64> = c.iter().map(|x| x * (1.0 + rng.random_range(-0.15..0.15))).collect();
            Record::new(i as u64, FeatureVector::new(v).unwrap())
        })
        .collect();
    Dataset::new(vec!["SPM".into(), "RPM".into(), "SO2".into(), "NOx".into()], records)
}
