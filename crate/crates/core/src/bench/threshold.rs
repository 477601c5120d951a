//! Crossover between the full-refit and incremental cost curves.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::DeltaSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostBasis {
    WallTime,
    DistanceEvals,
}

impl fmt::Display for CostBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CostBasis::WallTime => "wall_time",
            CostBasis::DistanceEvals => "distance_evals",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdOutcome {
    /// Incremental is no more expensive at `bracket.0` and more expensive at
    /// `bracket.1`; `percent` is where the interpolated curves meet.
    Crossover { percent: f64, bracket: (f64, f64) },
    /// No such flip inside the measured range.
    NoCrossover { incremental_cheaper_everywhere: bool },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdEstimate {
    pub basis: CostBasis,
    pub outcome: ThresholdOutcome,
    /// Smallest and largest δ in the series.
    pub range: (f64, f64),
}

impl ThresholdEstimate {
    pub fn crossover_percent(&self) -> Option<f64> {
        match self.outcome {
            ThresholdOutcome::Crossover { percent, .. } => Some(percent),
            ThresholdOutcome::NoCrossover { .. } => None,
        }
    }

    pub fn bracket(&self) -> Option<(f64, f64)> {
        match self.outcome {
            ThresholdOutcome::Crossover { bracket, .. } => Some(bracket),
            ThresholdOutcome::NoCrossover { .. } => None,
        }
    }
}

/// Finds the first adjacent pair of grid points where incremental cost goes
/// from `<=` full cost to `>` full cost and intersects the two piecewise
/// linear curves inside that bracket.
pub fn estimate_threshold(series: &DeltaSeries, basis: CostBasis) -> ThresholdEstimate {
    let pts: Vec<(f64, f64)> = series
        .points()
        .iter()
        .map(|p| (p.delta_percent(), p.incremental_cost.value(basis) - p.full_cost.value(basis)))
        .collect();
    let range = (pts[0].0, pts[pts.len() - 1].0);

    let outcome = pts
        .windows(2)
        .find(|w| w[0].1 <= 0.0 && w[1].1 > 0.0)
        .map(|w| {
            let ((x0, d0), (x1, d1)) = (w[0], w[1]);
            let t = -d0 / (d1 - d0);
            ThresholdOutcome::Crossover {
                percent: x0 + t * (x1 - x0),
                bracket: (x0, x1),
            }
        })
        .unwrap_or(ThresholdOutcome::NoCrossover {
            incremental_cheaper_everywhere: pts.iter().all(|(_, d)| *d <= 0.0),
        });

    ThresholdEstimate { basis, outcome, range }
}
