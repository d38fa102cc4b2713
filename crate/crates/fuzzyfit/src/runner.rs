//! Parallel driver for the synthetic benchmarks.
//!
//! Every `(corruption level, repetition)` cell derives its random streams
//! from the experiment seed alone, so cells are data-independent and can be
//! evaluated in any order. The driver fans them out with rayon, reassembles
//! the per-cell errors in index order, and aggregates sequentially, which
//! makes the parallel curve byte-identical to the sequential one.

use anyhow::Result;
use rayon::prelude::*;

use crate::core::experiment::{cell_errors, summarize, CurvePoint, ExperimentConfig, Which};

/// Run the benchmark with cells evaluated in parallel. Identical output to
/// [`crate::core::experiment::run_experiment`].
pub fn run_experiment_parallel(which: Which, cfg: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize)> = (0..cfg.gamma_grid.len())
        .flat_map(|gi| (0..cfg.repetitions).map(move |rep| (gi, rep)))
        .collect();
    let errors = cells
        .par_iter()
        .map(|&(gi, rep)| cell_errors(which, cfg, gi, rep))
        .collect::<Result<Vec<_>, _>>()?;
    let raw: Vec<Vec<Vec<f64>>> =
        errors.chunks(cfg.repetitions).map(<[Vec<f64>]>::to_vec).collect();
    Ok(summarize(cfg, &raw))
}

/// Render curve points as CSV, one row per `(gamma, method)`.
pub fn curve_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("gamma,method,mean_error,stderr,repetitions\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.gamma,
            p.method.name(),
            p.mean_error,
            p.stderr,
            p.repetitions
        ));
    }
    out
}
