//! Resolved per-command settings and their layering:
//! defaults, then the `--config` file, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use lasso_screen::experiments::{log_grid, DictionaryKind, ExperimentConfig};
use lasso_screen::RegionKind;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub dict: DictionaryKind,
    pub toeplitz_sigma: Option<f64>,
    pub lambda_ratio: Option<f64>,
    pub region: RegionKind,
    pub gap_tol: f64,
    pub max_iterations: usize,
    pub flop_budget: u64,
    pub screen_every: usize,
    pub problem: Option<PathBuf>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            m: 100,
            n: 500,
            dict: DictionaryKind::Gaussian,
            toeplitz_sigma: None,
            lambda_ratio: None,
            region: RegionKind::HolderDome,
            gap_tol: 1e-9,
            max_iterations: 200_000,
            flop_budget: 0,
            screen_every: 1,
            problem: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadiusRatioConfig {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub dict: Vec<DictionaryKind>,
    pub toeplitz_sigma: Option<f64>,
    pub lambda_ratios: Vec<f64>,
    pub trials: usize,
    pub gap_checkpoints: Vec<f64>,
    pub max_iterations: usize,
}

impl Default for RadiusRatioConfig {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        Self {
            seed: base.seed,
            m: base.m,
            n: base.n,
            dict: DictionaryKind::ALL.to_vec(),
            toeplitz_sigma: None,
            lambda_ratios: base.lambda_ratios,
            trials: 50,
            gap_checkpoints: base.gap_checkpoints,
            max_iterations: base.max_iterations,
        }
    }
}

impl RadiusRatioConfig {
    pub fn experiment(&self, dictionary: DictionaryKind) -> ExperimentConfig {
        ExperimentConfig {
            m: self.m,
            n: self.n,
            dictionary,
            toeplitz_sigma: self.toeplitz_sigma,
            lambda_ratios: self.lambda_ratios.clone(),
            trials: self.trials,
            seed: self.seed,
            gap_checkpoints: self.gap_checkpoints.clone(),
            max_iterations: self.max_iterations,
            ..ExperimentConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub seed: u64,
    pub m: usize,
    pub n: usize,
    pub dict: Vec<DictionaryKind>,
    pub toeplitz_sigma: Option<f64>,
    pub lambda_ratios: Vec<f64>,
    pub trials: usize,
    pub flop_budget: u64,
    pub target_rho: f64,
    pub target_tau: f64,
    pub profile_taus: Vec<f64>,
    pub gap_tol: f64,
    pub max_iterations: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        Self {
            seed: base.seed,
            m: base.m,
            n: base.n,
            dict: DictionaryKind::ALL.to_vec(),
            toeplitz_sigma: None,
            lambda_ratios: base.lambda_ratios,
            trials: 200,
            flop_budget: 0,
            target_rho: base.target_rho,
            target_tau: base.target_tau,
            profile_taus: log_grid(-10, 0, 4),
            gap_tol: base.gap_tolerance,
            max_iterations: base.max_iterations,
        }
    }
}

impl BenchmarkConfig {
    pub fn experiment(&self, dictionary: DictionaryKind) -> ExperimentConfig {
        ExperimentConfig {
            m: self.m,
            n: self.n,
            dictionary,
            toeplitz_sigma: self.toeplitz_sigma,
            lambda_ratios: self.lambda_ratios.clone(),
            trials: self.trials,
            seed: self.seed,
            flop_budget: self.flop_budget,
            target_rho: self.target_rho,
            target_tau: self.target_tau,
            profile_taus: self.profile_taus.clone(),
            gap_tolerance: self.gap_tol,
            max_iterations: self.max_iterations,
            ..ExperimentConfig::default()
        }
    }
}

/// Merges `T::default()`, the optional config file and the flags, in
/// increasing precedence.
pub fn resolve<T>(
    command: &str,
    file: Option<&Path>,
    flags: &impl Serialize,
    seed: Option<u64>,
) -> Result<T, CliError>
where
    T: Default + Serialize + DeserializeOwned,
{
    let mut merged = to_map(&T::default())?;
    if let Some(path) = file {
        overlay(&mut merged, load_config_file(path, command)?);
    }
    overlay(&mut merged, to_map(flags)?);
    if let Some(seed) = seed {
        merged.insert("seed".into(), seed.into());
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("invalid configuration: {e}")))
}

fn to_map(value: &impl Serialize) -> Result<Map<String, Value>, CliError> {
    match serde_json::to_value(value) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(other) => Err(CliError::Usage(format!(
            "expected a settings object, got {other}"
        ))),
        Err(e) => Err(CliError::Runtime(e.into())),
    }
}

/// Scalars given for list-valued keys become one-element lists.
fn overlay(base: &mut Map<String, Value>, layer: Map<String, Value>) {
    for (key, value) in layer {
        let wrap = matches!(base.get(&key), Some(Value::Array(_)))
            && !matches!(value, Value::Array(_) | Value::Null);
        base.insert(
            key,
            if wrap {
                Value::Array(vec![value])
            } else {
                value
            },
        );
    }
}

/// Reads a JSON object, a manifest (its `config` member), or
/// `key = value` lines.
pub fn load_config_file(path: &Path, command: &str) -> Result<Map<String, Value>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(mut map)) => {
            if let Some(Value::Object(config)) = map.remove("config") {
                if let Some(recorded) = map.get("command").and_then(Value::as_str) {
                    if recorded != command {
                        return Err(CliError::Usage(format!(
                            "manifest {} records command '{recorded}', not '{command}'",
                            path.display()
                        )));
                    }
                }
                return Ok(config);
            }
            Ok(map)
        }
        Ok(_) => Err(CliError::Usage(format!(
            "config file {} is not a JSON object",
            path.display()
        ))),
        Err(_) => parse_key_values(&text)
            .map_err(|e| CliError::Usage(format!("config file {}: {e}", path.display()))),
    }
}

fn parse_scalar(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// `key = value` per line; `#` starts a comment line. Values are read as
/// JSON when possible, comma-separated values as lists, anything else as
/// a string.
pub fn parse_key_values(text: &str) -> Result<Map<String, Value>, String> {
    let mut map = Map::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, raw)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", number + 1));
        };
        let key = key.trim().replace('-', "_");
        let raw = raw.trim();
        let value = match serde_json::from_str::<Value>(raw) {
            Ok(v) => v,
            Err(_) if raw.contains(',') => {
                Value::Array(raw.split(',').map(|s| parse_scalar(s.trim())).collect())
            }
            Err(_) => Value::String(raw.to_string()),
        };
        map.insert(key, value);
    }
    Ok(map)
}
