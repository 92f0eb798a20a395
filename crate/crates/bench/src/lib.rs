//! Fixtures for the criterion benchmarks in `benches/`.

use lasso_screen::experiments::{DictionaryKind, ExperimentConfig};
use lasso_screen::{fista_solve_observed, LassoProblem, RegionKind, SolverConfig};

/// Default-size instance (100 x 500) of the given dictionary.
pub fn instance(dictionary: DictionaryKind, lambda_ratio: f64) -> LassoProblem {
    let cfg = ExperimentConfig {
        dictionary,
        ..ExperimentConfig::default()
    };
    cfg.instance(0, lambda_ratio).expect("benchmark instance")
}

/// Primal-dual pair after `iterations` unscreened FISTA steps.
pub fn iterate_after(p: &LassoProblem, iterations: usize) -> (Vec<f64>, Vec<f64>) {
    let cfg = SolverConfig {
        region: RegionKind::None,
        gap_tolerance: 0.0,
        max_iterations: iterations,
        ..SolverConfig::default()
    };
    let mut pair = (vec![0.0; p.n()], p.observation().to_vec());
    fista_solve_observed(p, &cfg, |it| {
        pair.0.iter_mut().for_each(|v| *v = 0.0);
        for (&j, &v) in it.columns.iter().zip(it.x) {
            pair.0[j] = v;
        }
        pair.1.copy_from_slice(it.u);
    })
    .expect("benchmark run");
    pair
}
