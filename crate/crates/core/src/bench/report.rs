//! Report files for a benchmark series.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{BenchError, DeltaSeries, ThresholdEstimate, ThresholdOutcome};

pub const FULL_VS_SIZE: &str = "full_vs_size.csv";
pub const INCREMENTAL_VS_BATCH: &str = "incremental_vs_batch.csv";
pub const DELTA_TABLE: &str = "delta_table.csv";
pub const PLOT_MS: &str = "delta_plot_ms.dat";
pub const PLOT_EVALS: &str = "delta_plot_evals.dat";
pub const SUMMARY: &str = "summary.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub paths: Vec<PathBuf>,
}

fn ms(v: f64) -> String {
    format!("{v:.3}")
}

fn pct(v: f64) -> String {
    format!("{v}")
}

/// Writes the CSV tables, plot data and summary for `series` into `out_dir`.
/// Output depends only on the arguments, so regenerating from the same
/// series gives byte-identical files.
pub fn emit_report(
    series: &DeltaSeries,
    estimates: &[ThresholdEstimate],
    out_dir: &Path,
) -> Result<ReportFiles, BenchError> {
    std::fs::create_dir_all(out_dir).map_err(|source| BenchError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let evals = |n: u64| if series.has_counters { n.to_string() } else { String::new() };

    let mut full = String::from("records,full_ms,full_distance_evals,full_iterations\n");
    if let Some(c) = series.base_cost {
        let _ = writeln!(full, "{},{},{},{}", series.base_size, ms(c.wall_time_ms), evals(c.distance_evaluations), evals(c.iterations));
    }
    let mut incremental = String::from("batch_size,incremental_ms,incremental_distance_evals\n");
    let mut table = String::from("delta_percent,full_ms,incremental_ms\n");
    let mut plot_ms = String::from("# delta_percent full_ms incremental_ms\n");
    let mut plot_evals = String::from("# delta_percent full_distance_evals incremental_distance_evals\n");

    for p in series.points() {
        let (f, i) = (p.full_cost, p.incremental_cost);
        let d = pct(p.delta_percent());
        let _ = writeln!(full, "{},{},{},{}", p.new_size(), ms(f.wall_time_ms), evals(f.distance_evaluations), evals(f.iterations));
        let _ = writeln!(incremental, "{},{},{}", p.batch_size(), ms(i.wall_time_ms), evals(i.distance_evaluations));
        let _ = writeln!(table, "{d},{},{}", ms(f.wall_time_ms), ms(i.wall_time_ms));
        let _ = writeln!(plot_ms, "{d} {} {}", ms(f.wall_time_ms), ms(i.wall_time_ms));
        let _ = writeln!(plot_evals, "{d} {} {}", f.distance_evaluations, i.distance_evaluations);
    }

    let mut files = vec![
        (FULL_VS_SIZE, full),
        (INCREMENTAL_VS_BATCH, incremental),
        (DELTA_TABLE, table),
        (PLOT_MS, plot_ms),
    ];
    if series.has_counters {
        files.push((PLOT_EVALS, plot_evals));
    }
    files.push((SUMMARY, render_summary(series, estimates)));

    let mut paths = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|source| BenchError::Io {
            path: path.clone(),
            source,
        })?;
        paths.push(path);
    }
    Ok(ReportFiles { paths })
}

/// Threshold lines plus the resulting keep-or-refit recommendation.
pub fn render_summary(series: &DeltaSeries, estimates: &[ThresholdEstimate]) -> String {
    let pts = series.points();
    let (lo, hi) = (pts[0].delta_percent(), pts[pts.len() - 1].delta_percent());
    let mut out = String::new();
    let _ = writeln!(out, "base size: {} records", series.base_size);
    let _ = writeln!(out, "delta points: {} ({}% .. {}%)", pts.len(), pct(lo), pct(hi));
    if let (Some(k), Some(metric)) = (series.k, series.metric) {
        let _ = writeln!(
            out,
            "k: {k}, metric: {metric}, repetitions: {}, seed: {}",
            series.config.repetitions, series.config.seed
        );
    }
    for e in estimates {
        match e.outcome {
            ThresholdOutcome::Crossover { percent, bracket } => {
                let _ = writeln!(
                    out,
                    "threshold [{}]: {percent:.1}% (bracket {}% .. {}%)",
                    e.basis,
                    pct(bracket.0),
                    pct(bracket.1)
                );
                let _ = writeln!(
                    out,
                    "policy [{}]: up to {percent:.1}% growth use the previous result (insert incrementally); beyond it rerun K-means",
                    e.basis
                );
            }
            ThresholdOutcome::NoCrossover {
                incremental_cheaper_everywhere,
            } => {
                let _ = writeln!(
                    out,
                    "threshold [{}]: no crossover observed in range ({}% .. {}%)",
                    e.basis,
                    pct(e.range.0),
                    pct(e.range.1)
                );
                if incremental_cheaper_everywhere {
                    let _ = writeln!(
                        out,
                        "policy [{}]: use the previous result for growth up to at least {}%",
                        e.basis,
                        pct(e.range.1)
                    );
                } else {
                    let _ = writeln!(
                        out,
                        "policy [{}]: rerun K-means; incremental insertion is not cheaper in the measured range",
                        e.basis
                    );
                }
            }
        }
    }
    out
}
