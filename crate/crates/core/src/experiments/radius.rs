//! Ratio of the Hölder-dome radius to the GAP-dome radius along an
//! unscreened solver run.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::norm1;
use crate::problem::LassoProblem;
use crate::regions::{gap_dome_from_gap, holder_dome_from_parts, HalfSpace, RegionKind};
use crate::solver::{fista_solve_observed, Iterate, SolverConfig};

use super::ExperimentConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusRatioRow {
    pub lambda_ratio: f64,
    pub gap_checkpoint: f64,
    /// Mean over the trials that reached the checkpoint; `None` if none did.
    pub mean_ratio: Option<f64>,
    pub trials_counted: usize,
}

fn ratio_at(p: &LassoProblem, it: &Iterate<'_>) -> Result<f64> {
    let y = p.observation();
    let gap_radius = gap_dome_from_gap(y, it.u, it.gap).radius()?;
    let cut = HalfSpace::new(it.ax.to_vec(), p.lambda() * norm1(it.x));
    let holder_radius = holder_dome_from_parts(y, it.u, cut).radius()?;
    if gap_radius == 0.0 {
        // both domes reduce to the point u
        return Ok(1.0);
    }
    Ok(holder_radius / gap_radius)
}

/// Radius ratio at the first iterate whose gap is at most each checkpoint;
/// `None` for checkpoints not reached within `max_iterations`.
pub fn radius_ratio_trial(
    p: &LassoProblem,
    checkpoints: &[f64],
    max_iterations: usize,
) -> Result<Vec<Option<f64>>> {
    let mut ratios = vec![None; checkpoints.len()];
    let Some(&last) = checkpoints.last() else {
        return Ok(ratios);
    };
    let cfg = SolverConfig {
        region: RegionKind::None,
        gap_tolerance: last,
        max_iterations,
        ..SolverConfig::default()
    };
    let mut failure = None;
    let mut next = 0;
    fista_solve_observed(p, &cfg, |it| {
        if failure.is_some() || next == checkpoints.len() || it.gap > checkpoints[next] {
            return;
        }
        match ratio_at(p, it) {
            Ok(r) => {
                while next < checkpoints.len() && it.gap <= checkpoints[next] {
                    ratios[next] = Some(r);
                    next += 1;
                }
            }
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(ratios),
    }
}

/// One row per `(lambda_ratio, checkpoint)`, in configuration order.
pub fn radius_ratio_experiment(cfg: &ExperimentConfig) -> Result<Vec<RadiusRatioRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.lambda_ratios.len() * cfg.gap_checkpoints.len());
    for &lambda_ratio in &cfg.lambda_ratios {
        let per_trial: Vec<Vec<Option<f64>>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let p = cfg.instance(t, lambda_ratio)?;
                radius_ratio_trial(&p, &cfg.gap_checkpoints, cfg.max_iterations)
            })
            .collect::<Result<_>>()?;
        for (k, &gap_checkpoint) in cfg.gap_checkpoints.iter().enumerate() {
            let (sum, count) = per_trial
                .iter()
                .filter_map(|ratios| ratios[k])
                .fold((0.0, 0usize), |(s, c), r| (s + r, c + 1));
            rows.push(RadiusRatioRow {
                lambda_ratio,
                gap_checkpoint,
                mean_ratio: (count > 0).then(|| sum / count as f64),
                trials_counted: count,
            });
        }
    }
    Ok(rows)
}
