//! Seeded numerical experiments: dome radius ratios along solver runs and
//! FLOP-budgeted performance profiles.
//!
//! Trial `t` of an experiment draws its instance from `seed ⊕ t`, so results
//! do not depend on how trials are scheduled across threads.

pub mod benchmark;
pub mod data;
pub mod profile;
pub mod radius;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::LassoProblem;

pub use benchmark::{
    benchmark_experiment, calibrate_budget, BenchmarkOutcome, BudgetReplay, Calibration,
};
pub use data::{DictionaryKind, InstanceSpec};
pub use profile::{log_grid, success_count, ProfileCurve};
pub use radius::{radius_ratio_experiment, radius_ratio_trial, RadiusRatioRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m: usize,
    pub n: usize,
    pub dictionary: DictionaryKind,
    /// Toeplitz bump width; `m/50` when absent.
    pub toeplitz_sigma: Option<f64>,
    pub lambda_ratios: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Strictly decreasing gap levels at which radius ratios are recorded.
    pub gap_checkpoints: Vec<f64>,
    /// Common budget of the benchmark; 0 means calibrate.
    pub flop_budget: u64,
    pub target_rho: f64,
    pub target_tau: f64,
    /// Increasing thresholds at which profiles are reported.
    pub profile_taus: Vec<f64>,
    pub gap_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            m: 100,
            n: 500,
            dictionary: DictionaryKind::Gaussian,
            toeplitz_sigma: None,
            lambda_ratios: vec![0.3, 0.5, 0.8],
            trials: 50,
            seed: 0,
            gap_checkpoints: (1..=8).map(|k| 10f64.powi(-k)).collect(),
            flop_budget: 0,
            target_rho: 0.5,
            target_tau: 1e-7,
            profile_taus: log_grid(-10, 0, 4),
            gap_tolerance: 1e-12,
            max_iterations: 200_000,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidArgument(msg));
        if self.m == 0 || self.n == 0 {
            return invalid(format!(
                "dimensions must be positive, got {}x{}",
                self.m, self.n
            ));
        }
        if self.trials == 0 {
            return invalid("trials must be positive".into());
        }
        if self.lambda_ratios.is_empty() {
            return invalid("at least one lambda ratio is required".into());
        }
        if let Some(r) = self
            .lambda_ratios
            .iter()
            .find(|r| !(**r > 0.0 && **r < 1.0))
        {
            return invalid(format!("lambda ratios must lie in (0, 1), got {r}"));
        }
        if self
            .gap_checkpoints
            .iter()
            .any(|c| !(*c > 0.0 && c.is_finite()))
            || self.gap_checkpoints.windows(2).any(|w| w[1] >= w[0])
        {
            return invalid("gap checkpoints must be positive and strictly decreasing".into());
        }
        if self
            .profile_taus
            .iter()
            .any(|t| !(*t > 0.0 && t.is_finite()))
            || self.profile_taus.windows(2).any(|w| w[1] <= w[0])
        {
            return invalid("profile thresholds must be positive and strictly increasing".into());
        }
        if !(self.target_rho > 0.0 && self.target_rho < 1.0) {
            return invalid(format!(
                "target rho must lie in (0, 1), got {}",
                self.target_rho
            ));
        }
        if !(self.target_tau > 0.0 && self.target_tau.is_finite()) {
            return invalid(format!(
                "target tau must be positive, got {}",
                self.target_tau
            ));
        }
        if self.gap_tolerance.is_nan() || self.gap_tolerance < 0.0 {
            return invalid(format!(
                "gap tolerance must be nonnegative, got {}",
                self.gap_tolerance
            ));
        }
        if self.max_iterations == 0 {
            return invalid("max_iterations must be positive".into());
        }
        if let Some(s) = self.toeplitz_sigma {
            if !(s > 0.0 && s.is_finite()) {
                return invalid(format!("toeplitz sigma must be positive, got {s}"));
            }
        }
        Ok(())
    }

    pub fn instance_spec(&self) -> InstanceSpec {
        InstanceSpec {
            m: self.m,
            n: self.n,
            dictionary: self.dictionary,
            toeplitz_sigma: self.toeplitz_sigma,
        }
    }

    /// Instance of trial `trial` at `λ = lambda_ratio · λ_max`.
    pub fn instance(&self, trial: usize, lambda_ratio: f64) -> Result<LassoProblem> {
        self.instance_spec()
            .instance(data::trial_seed(self.seed, trial), lambda_ratio)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.gap_checkpoints.len(), 8);
        assert_eq!(cfg.gap_checkpoints[0], 0.1);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let base = ExperimentConfig::default();
        let bad = [
            ExperimentConfig {
                lambda_ratios: vec![1.0],
                ..base.clone()
            },
            ExperimentConfig {
                lambda_ratios: vec![],
                ..base.clone()
            },
            ExperimentConfig {
                gap_checkpoints: vec![1e-2, 1e-1],
                ..base.clone()
            },
            ExperimentConfig {
                profile_taus: vec![1e-2, 1e-3],
                ..base.clone()
            },
            ExperimentConfig {
                trials: 0,
                ..base.clone()
            },
            ExperimentConfig {
                target_rho: 1.0,
                ..base.clone()
            },
            ExperimentConfig {
                toeplitz_sigma: Some(-1.0),
                ..base.clone()
            },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ExperimentConfig {
            seed: 42,
            dictionary: DictionaryKind::Toeplitz,
            ..ExperimentConfig::default()
        };
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            serde_json::from_str::<ExperimentConfig>(&text).unwrap(),
            cfg
        );
    }
}
