//! Performance profiles: fraction of instances solved to a gap threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `10^(lo + k/per_decade)` for `k = 0..=(hi − lo)·per_decade`.
pub fn log_grid(lo: i32, hi: i32, per_decade: u32) -> Vec<f64> {
    let steps = (hi - lo) as u32 * per_decade;
    (0..=steps)
        .map(|k| 10f64.powf(lo as f64 + k as f64 / per_decade as f64))
        .collect()
}

/// Number of gaps at or below `tau`. NaN gaps never count.
pub fn success_count(gaps: &[f64], tau: f64) -> usize {
    gaps.iter().filter(|g| **g <= tau).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub taus: Vec<f64>,
    pub rhos: Vec<f64>,
}

impl ProfileCurve {
    /// `ρ(τ)` over `taus`, which must be strictly increasing.
    pub fn from_gaps(gaps: &[f64], taus: &[f64]) -> Result<Self> {
        if gaps.is_empty() {
            return Err(Error::InvalidArgument(
                "profile needs at least one instance".into(),
            ));
        }
        if taus.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "profile thresholds must be strictly increasing".into(),
            ));
        }
        let total = gaps.len() as f64;
        Ok(Self {
            taus: taus.to_vec(),
            rhos: taus
                .iter()
                .map(|&t| success_count(gaps, t) as f64 / total)
                .collect(),
        })
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.taus.iter().copied().zip(self.rhos.iter().copied())
    }
}
