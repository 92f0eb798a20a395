//! FLOP-budgeted benchmark of the screening regions and budget calibration.
//!
//! A run with budget `B` stops at the first iteration whose cumulative FLOP
//! count reaches `B`, and budgets influence nothing else. The iteration
//! records of a run with budget `hi` therefore contain the run with any
//! budget `B ≤ hi` as a prefix, which lets calibration bisect on replayed
//! traces instead of re-solving every instance at every probe.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::RegionKind;
use crate::solver::{fista_solve, IterationRecord, SolverConfig};

use super::profile::{success_count, ProfileCurve};
use super::ExperimentConfig;

const INITIAL_BUDGET: u64 = 1 << 20;
const MAX_DOUBLINGS: usize = 48;
const MAX_BISECTIONS: usize = 60;
const RHO_BAND: f64 = 0.02;

/// Iteration records of one budgeted run per instance.
#[derive(Debug, Clone)]
pub struct BudgetReplay {
    traces: Vec<Vec<IterationRecord>>,
}

impl BudgetReplay {
    pub fn new(traces: Vec<Vec<IterationRecord>>) -> Self {
        Self { traces }
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Final gaps the runs would have had under `budget`, which must not
    /// exceed the budget the traces were recorded with.
    pub fn final_gaps(&self, budget: u64) -> Vec<f64> {
        self.traces
            .iter()
            .map(|records| {
                match records
                    .iter()
                    .find(|r| r.flops >= budget)
                    .or(records.last())
                {
                    // a run ends when every atom is screened and then certifies x = 0
                    Some(r) if r.alive == 0 => 0.0,
                    Some(r) => r.gap,
                    None => f64::NAN,
                }
            })
            .collect()
    }

    pub fn success_count(&self, budget: u64, tau: f64) -> usize {
        success_count(&self.final_gaps(budget), tau)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub budget: u64,
    /// Hölder-dome `ρ(target_tau)` at `budget`.
    pub rho: f64,
    pub doublings: usize,
    pub bisections: usize,
}

fn solver_config(cfg: &ExperimentConfig, region: RegionKind, budget: u64) -> SolverConfig {
    SolverConfig {
        region,
        flop_budget: budget,
        gap_tolerance: cfg.gap_tolerance,
        max_iterations: cfg.max_iterations,
        ..SolverConfig::default()
    }
}

fn run_all(
    cfg: &ExperimentConfig,
    lambda_ratio: f64,
    region: RegionKind,
    budget: u64,
) -> Result<Vec<(Vec<IterationRecord>, f64)>> {
    let solver = solver_config(cfg, region, budget);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let p = cfg.instance(t, lambda_ratio)?;
            let trace = fista_solve(&p, &solver)?;
            Ok((trace.records, trace.final_gap))
        })
        .collect()
}

/// Finds a common budget at which the Hölder-dome solver reaches gap
/// `target_tau` on a fraction `target_rho ± 0.02` of the instances.
///
/// The bracket is found by doubling from 2²⁰ FLOPs, then bisected on
/// replayed traces for at most 60 steps.
pub fn calibrate_budget(cfg: &ExperimentConfig, lambda_ratio: f64) -> Result<Calibration> {
    cfg.validate()?;
    let total = cfg.trials as f64;
    let rho_of = |count: usize| count as f64 / total;
    let in_band = |count: usize| (rho_of(count) - cfg.target_rho).abs() <= RHO_BAND + 1e-12;
    let too_low = |count: usize| rho_of(count) < cfg.target_rho;

    let mut lo = 0u64;
    let mut hi = INITIAL_BUDGET;
    let mut doublings = 0;
    let replay = loop {
        let runs = run_all(cfg, lambda_ratio, RegionKind::HolderDome, hi)?;
        let replay = BudgetReplay::new(runs.into_iter().map(|(records, _)| records).collect());
        let count = replay.success_count(hi, cfg.target_tau);
        if in_band(count) {
            return Ok(Calibration {
                budget: hi,
                rho: rho_of(count),
                doublings,
                bisections: 0,
            });
        }
        if !too_low(count) {
            break replay;
        }
        if doublings == MAX_DOUBLINGS {
            return Err(Error::CalibrationFailed {
                lo,
                hi,
                rho_lo: rho_of(replay.success_count(lo, cfg.target_tau)),
                rho_hi: rho_of(count),
                steps: doublings,
            });
        }
        lo = hi;
        hi = hi.saturating_mul(2);
        doublings += 1;
    };

    let mut bisections = 0;
    while bisections < MAX_BISECTIONS && hi - lo > 1 {
        bisections += 1;
        let mid = lo + (hi - lo) / 2;
        let count = replay.success_count(mid, cfg.target_tau);
        if in_band(count) {
            return Ok(Calibration {
                budget: mid,
                rho: rho_of(count),
                doublings,
                bisections,
            });
        }
        if too_low(count) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::CalibrationFailed {
        lo,
        hi,
        rho_lo: rho_of(replay.success_count(lo, cfg.target_tau)),
        rho_hi: rho_of(replay.success_count(hi, cfg.target_tau)),
        steps: bisections,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkOutcome {
    pub lambda_ratio: f64,
    pub budget: u64,
    pub calibration: Option<Calibration>,
    /// Final gap per instance and region, `none` included.
    pub final_gaps: BTreeMap<RegionKind, Vec<f64>>,
    /// Profiles of the three screening regions.
    pub profiles: BTreeMap<RegionKind, ProfileCurve>,
}

impl BenchmarkOutcome {
    pub fn rho(&self, region: RegionKind, tau: f64) -> Option<f64> {
        let gaps = self.final_gaps.get(&region)?;
        Some(success_count(gaps, tau) as f64 / gaps.len() as f64)
    }
}

/// Runs every region on the same instances under a common budget:
/// `cfg.flop_budget` if positive, otherwise a calibrated one.
pub fn benchmark_experiment(cfg: &ExperimentConfig, lambda_ratio: f64) -> Result<BenchmarkOutcome> {
    cfg.validate()?;
    let calibration = if cfg.flop_budget == 0 {
        Some(calibrate_budget(cfg, lambda_ratio)?)
    } else {
        None
    };
    let budget = calibration.as_ref().map_or(cfg.flop_budget, |c| c.budget);

    let mut final_gaps = BTreeMap::new();
    let mut profiles = BTreeMap::new();
    for region in [
        RegionKind::None,
        RegionKind::GapSphere,
        RegionKind::GapDome,
        RegionKind::HolderDome,
    ] {
        let gaps: Vec<f64> = run_all(cfg, lambda_ratio, region, budget)?
            .into_iter()
            .map(|(_, gap)| gap)
            .collect();
        if region != RegionKind::None {
            profiles.insert(region, ProfileCurve::from_gaps(&gaps, &cfg.profile_taus)?);
        }
        final_gaps.insert(region, gaps);
    }
    Ok(BenchmarkOutcome {
        lambda_ratio,
        budget,
        calibration,
        final_gaps,
        profiles,
    })
}
