mod common;

use common::props;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn nearest_centroid_after_convergence((rows, k) in props::clustering_input(), metric in props::metric()) {
        props::nearest_centroid(rows, k, metric)?;
    }

    #[test]
    fn centroids_stay_means(
        (rows, k) in props::clustering_input(),
        metric in props::metric(),
        mask in prop::collection::vec(any::<bool>(), 1..8),
        extra in prop::collection::vec(-50.0f64..50.0, 0..12),
    ) {
        props::mean_consistency(rows, k, metric, mask, extra)?;
    }

    #[test]
    fn lloyd_error_never_rises((rows, k) in props::clustering_input()) {
        props::sse_non_increasing(rows, k)?;
    }

    #[test]
    fn metric_axioms((a, b, c, metric) in props::triple()) {
        props::metric_axioms(a, b, c, metric)?;
    }

    #[test]
    fn store_round_trip(m in props::stored_model()) {
        props::store_round_trip(m)?;
    }

    #[test]
    fn arff_round_trip(ds in props::dataset()) {
        props::arff_round_trip(ds)?;
    }

    #[test]
    fn csv_round_trip(ds in props::dataset()) {
        props::csv_round_trip(ds)?;
    }

    #[test]
    fn fit_is_deterministic((rows, k) in props::clustering_input(), metric in props::metric()) {
        props::fit_determinism(rows, k, metric)?;
    }

    #[test]
    fn bench_counters_are_deterministic((rows, k) in props::clustering_input(), seed in any::<u64>()) {
        props::bench_determinism(rows, k, seed)?;
    }
}
