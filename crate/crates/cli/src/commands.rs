use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::Context;
use lasso_screen::experiments::{benchmark_experiment, radius_ratio_experiment, InstanceSpec};
use lasso_screen::{fista_solve, Error as CoreError, LassoProblem, RegionKind, SolverConfig};
use serde::Serialize;

use crate::config::{BenchmarkConfig, RadiusRatioConfig, SolveConfig};
use crate::output::{fmt_f64, OutputDir};
use crate::problem_file::parse_problem;
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Core validation failures stem from the settings, anything else from the
/// computation.
fn classify(e: CoreError) -> CliError {
    match e {
        CoreError::InvalidArgument(msg) => CliError::Usage(msg),
        other => CliError::Runtime(other.into()),
    }
}

#[derive(Serialize)]
struct SolveResult {
    x_nonzeros: Vec<(usize, f64)>,
    final_gap: f64,
    iterations: usize,
    flops: u64,
    screened_counts_per_iteration: Vec<usize>,
    termination_reason: &'static str,
    lambda: f64,
    lambda_max: f64,
}

fn load_problem(cfg: &SolveConfig, ratio: f64) -> Result<LassoProblem, CliError> {
    match &cfg.problem {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read problem file {}: {e}", path.display())))?;
            let (a, y) =
                parse_problem(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            LassoProblem::with_lambda_ratio(a, y, ratio)
                .context("cannot set up the problem (is A^T y zero?)")
                .map_err(CliError::Runtime)
        }
        None => {
            if cfg.m == 0 || cfg.n == 0 {
                return Err(usage(format!(
                    "dimensions must be positive, got {}x{}",
                    cfg.m, cfg.n
                )));
            }
            let spec = InstanceSpec {
                m: cfg.m,
                n: cfg.n,
                dictionary: cfg.dict,
                toeplitz_sigma: cfg.toeplitz_sigma,
            };
            spec.instance(cfg.seed, ratio).map_err(classify)
        }
    }
}

pub fn solve(cfg: &SolveConfig, out_dir: &Path) -> Result<(), CliError> {
    let ratio = cfg
        .lambda_ratio
        .ok_or_else(|| usage("missing required setting lambda_ratio (--lambda-ratio)"))?;
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(usage(format!("lambda ratio must be positive, got {ratio}")));
    }
    let solver = SolverConfig {
        region: cfg.region,
        flop_budget: cfg.flop_budget,
        gap_tolerance: cfg.gap_tol,
        max_iterations: cfg.max_iterations,
        screen_every: cfg.screen_every,
        record_flop_events: false,
    };
    solver.validate().map_err(classify)?;
    let p = load_problem(cfg, ratio)?;
    let trace = fista_solve(&p, &solver).map_err(|e| CliError::Runtime(e.into()))?;

    let mut out = OutputDir::create(out_dir)?;
    let n = p.n();
    let rows: Vec<Vec<String>> = trace
        .records
        .iter()
        .map(|r| {
            vec![
                r.iteration.to_string(),
                fmt_f64(r.gap),
                r.alive.to_string(),
                (n - r.alive).to_string(),
                r.flops.to_string(),
            ]
        })
        .collect();
    out.write_csv(
        "trace.csv",
        &["iteration", "gap", "alive", "screened", "flops"],
        &rows,
    )?;
    let result = SolveResult {
        x_nonzeros: trace
            .x
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i, *v))
            .collect(),
        final_gap: trace.final_gap,
        iterations: trace.iterations(),
        flops: trace.flops(),
        screened_counts_per_iteration: trace.screened_counts(),
        termination_reason: trace.termination.as_str(),
        lambda: p.lambda(),
        lambda_max: p.lambda_max(),
    };
    out.write_json("result.json", &result)?;
    out.finish("solve", cfg, cfg.seed)?;
    Ok(())
}

pub fn radius_ratio(cfg: &RadiusRatioConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.dict.is_empty() {
        return Err(usage("at least one dictionary is required"));
    }
    let mut rows = Vec::new();
    for &dict in &cfg.dict {
        let exp = cfg.experiment(dict);
        exp.validate().map_err(classify)?;
        eprintln!("radius-ratio: {dict}, {} trials per ratio", exp.trials);
        for row in radius_ratio_experiment(&exp).map_err(|e| CliError::Runtime(e.into()))? {
            rows.push(vec![
                dict.to_string(),
                fmt_f64(row.lambda_ratio),
                fmt_f64(row.gap_checkpoint),
                row.mean_ratio.map(fmt_f64).unwrap_or_default(),
                row.trials_counted.to_string(),
            ]);
        }
    }
    let mut out = OutputDir::create(out_dir)?;
    out.write_csv(
        "radius_ratio.csv",
        &[
            "dict",
            "lambda_ratio",
            "gap_checkpoint",
            "mean_ratio",
            "trials_counted",
        ],
        &rows,
    )?;
    out.finish("radius-ratio", cfg, cfg.seed)?;
    Ok(())
}

#[derive(Serialize)]
struct BudgetSetup {
    dict: String,
    lambda_ratio: f64,
    budget: u64,
    calibrated: bool,
    doublings: Option<usize>,
    bisections: Option<usize>,
    /// `ρ(target_tau)` of each region at `budget`.
    rho_at_target: BTreeMap<RegionKind, f64>,
}

#[derive(Serialize)]
struct BudgetReport {
    target_rho: f64,
    target_tau: f64,
    setups: Vec<BudgetSetup>,
}

pub fn benchmark(cfg: &BenchmarkConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.dict.is_empty() {
        return Err(usage("at least one dictionary is required"));
    }
    let mut profile_rows = Vec::new();
    let mut gap_rows = Vec::new();
    let mut setups = Vec::new();
    for &dict in &cfg.dict {
        let exp = cfg.experiment(dict);
        exp.validate().map_err(classify)?;
        for &ratio in &exp.lambda_ratios {
            eprintln!(
                "benchmark: {dict}, lambda ratio {ratio}, {} instances",
                exp.trials
            );
            let outcome =
                benchmark_experiment(&exp, ratio).map_err(|e| CliError::Runtime(e.into()))?;
            for (region, curve) in &outcome.profiles {
                for (tau, rho) in curve.points() {
                    profile_rows.push(vec![
                        dict.to_string(),
                        fmt_f64(ratio),
                        region.to_string(),
                        fmt_f64(tau),
                        fmt_f64(rho),
                    ]);
                }
            }
            for (region, gaps) in &outcome.final_gaps {
                for (instance, gap) in gaps.iter().enumerate() {
                    gap_rows.push(vec![
                        dict.to_string(),
                        fmt_f64(ratio),
                        region.to_string(),
                        instance.to_string(),
                        fmt_f64(*gap),
                    ]);
                }
            }
            let rho_at_target = outcome
                .final_gaps
                .keys()
                .filter_map(|&r| Some((r, outcome.rho(r, exp.target_tau)?)))
                .collect();
            setups.push(BudgetSetup {
                dict: dict.to_string(),
                lambda_ratio: ratio,
                budget: outcome.budget,
                calibrated: outcome.calibration.is_some(),
                doublings: outcome.calibration.as_ref().map(|c| c.doublings),
                bisections: outcome.calibration.as_ref().map(|c| c.bisections),
                rho_at_target,
            });
        }
    }
    let mut out = OutputDir::create(out_dir)?;
    out.write_csv(
        "profiles.csv",
        &["dict", "lambda_ratio", "region", "tau", "rho"],
        &profile_rows,
    )?;
    out.write_csv(
        "final_gaps.csv",
        &["dict", "lambda_ratio", "region", "instance", "final_gap"],
        &gap_rows,
    )?;
    out.write_json(
        "budget.json",
        &BudgetReport {
            target_rho: cfg.target_rho,
            target_tau: cfg.target_tau,
            setups,
        },
    )?;
    out.finish("benchmark", cfg, cfg.seed)?;
    Ok(())
}
