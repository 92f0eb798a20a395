//! Seeded generators for dictionaries, observations and Lasso instances.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{norm2, Dictionary};
use crate::problem::LassoProblem;

// Independent ChaCha streams so that one seed drives both A and y.
const DICTIONARY_STREAM: u64 = 0;
const OBSERVATION_STREAM: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DictionaryKind {
    Gaussian,
    Toeplitz,
}

impl DictionaryKind {
    pub const ALL: [DictionaryKind; 2] = [DictionaryKind::Gaussian, DictionaryKind::Toeplitz];

    pub fn as_str(self) -> &'static str {
        match self {
            DictionaryKind::Gaussian => "gaussian",
            DictionaryKind::Toeplitz => "toeplitz",
        }
    }
}

impl fmt::Display for DictionaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DictionaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(DictionaryKind::Gaussian),
            "toeplitz" => Ok(DictionaryKind::Toeplitz),
            other => Err(Error::InvalidArgument(format!(
                "unknown dictionary kind '{other}'"
            ))),
        }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normalize(v: &mut [f64]) {
    let n = norm2(v);
    if n > 0.0 {
        v.iter_mut().for_each(|e| *e /= n);
    }
}

/// i.i.d. standard normal entries, columns scaled to unit norm.
pub fn gaussian_dictionary(m: usize, n: usize, seed: u64) -> Result<Dictionary> {
    let mut rng = rng(seed, DICTIONARY_STREAM);
    let mut data: Vec<f64> = (0..m * n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    if m > 0 {
        data.chunks_exact_mut(m).for_each(normalize);
    }
    Dictionary::from_column_major(m, n, data)
}

/// Default Gaussian bump width: `m / 50`.
pub fn default_toeplitz_sigma(m: usize) -> f64 {
    m as f64 / 50.0
}

/// Shifted Gaussian bumps `exp(−(j − cᵢ)²/(2σ²))` with centers equally
/// spaced over `[1, m]`, columns scaled to unit norm.
pub fn toeplitz_dictionary(m: usize, n: usize, sigma: f64) -> Result<Dictionary> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bump width must be positive, got {sigma}"
        )));
    }
    let mut data = Vec::with_capacity(m * n);
    for i in 0..n {
        let center = if n == 1 {
            0.5 * (1.0 + m as f64)
        } else {
            1.0 + i as f64 * (m as f64 - 1.0) / (n as f64 - 1.0)
        };
        let start = data.len();
        data.extend((1..=m).map(|j| {
            let d = j as f64 - center;
            (-d * d / (2.0 * sigma * sigma)).exp()
        }));
        normalize(&mut data[start..]);
    }
    Dictionary::from_column_major(m, n, data)
}

/// Uniform draw on the unit sphere of `ℝᵐ`.
pub fn observation(m: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed, OBSERVATION_STREAM);
    let mut y: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut y);
    y
}

/// Seed of trial `t` under base seed `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ trial as u64
}

/// Shape of the random instances used by the experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub m: usize,
    pub n: usize,
    pub dictionary: DictionaryKind,
    /// Gaussian bump width for Toeplitz dictionaries; `m/50` when absent.
    pub toeplitz_sigma: Option<f64>,
}

impl InstanceSpec {
    pub fn dictionary(&self, seed: u64) -> Result<Dictionary> {
        match self.dictionary {
            DictionaryKind::Gaussian => gaussian_dictionary(self.m, self.n, seed),
            DictionaryKind::Toeplitz => toeplitz_dictionary(
                self.m,
                self.n,
                self.toeplitz_sigma
                    .unwrap_or_else(|| default_toeplitz_sigma(self.m)),
            ),
        }
    }

    /// Instance with `λ = ratio · λ_max` drawn from `seed`.
    pub fn instance(&self, seed: u64, lambda_ratio: f64) -> Result<LassoProblem> {
        let a = self.dictionary(seed)?;
        let y = observation(self.m, seed);
        LassoProblem::with_lambda_ratio(a, y, lambda_ratio)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;

    #[test]
    fn gaussian_columns_are_unit_and_deterministic() {
        let a = gaussian_dictionary(20, 30, 7).unwrap();
        for c in a.columns() {
            assert!((norm2(c) - 1.0).abs() <= 1e-12);
        }
        assert_eq!(a, gaussian_dictionary(20, 30, 7).unwrap());
        assert_ne!(a, gaussian_dictionary(20, 30, 8).unwrap());
    }

    #[test]
    fn gaussian_inner_products_have_variance_one_over_m() {
        let (m, n) = (100, 500);
        let a = gaussian_dictionary(m, n, 11).unwrap();
        let mut samples = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n.min(i + 40) {
                let v = dot(a.column(i), a.column(j));
                samples.push(v * v);
            }
        }
        let k = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / k;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0);
        let stderr = (var / k).sqrt();
        assert!(
            (mean - 1.0 / m as f64).abs() <= 3.0 * stderr,
            "mean {mean} stderr {stderr}"
        );
    }

    #[test]
    fn toeplitz_columns_are_local() {
        let a = toeplitz_dictionary(100, 500, 2.0).unwrap();
        for c in a.columns() {
            assert!((norm2(c) - 1.0).abs() <= 1e-12);
            assert!(c.iter().all(|&v| v >= 0.0));
        }
        for i in [0, 100, 250, 480] {
            assert!(dot(a.column(i), a.column(i + 1)) > dot(a.column(i), a.column(i + 10)));
        }
        assert!(toeplitz_dictionary(10, 10, 0.0).is_err());
    }

    #[test]
    fn narrow_toeplitz_square_peaks_on_diagonal() {
        let a = toeplitz_dictionary(12, 12, 0.05).unwrap();
        for (i, c) in a.columns().enumerate() {
            let argmax = c
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .unwrap()
                .0;
            assert_eq!(argmax, i);
        }
    }

    #[test]
    fn observation_is_unit_and_deterministic() {
        let y = observation(100, 3);
        assert!((norm2(&y) - 1.0).abs() <= 1e-12);
        assert_eq!(y, observation(100, 3));
    }

    #[test]
    fn observation_first_coordinate_is_centered() {
        let m = 100;
        let trials = 10_000;
        let mean = (0..trials)
            .map(|s| observation(m, s as u64)[0])
            .sum::<f64>()
            / trials as f64;
        // each coordinate has variance 1/m
        assert!(mean.abs() <= 3.0 / ((m * trials) as f64).sqrt());
    }

    #[test]
    fn dictionary_kind_names() {
        for k in DictionaryKind::ALL {
            assert_eq!(k.as_str().parse::<DictionaryKind>().unwrap(), k);
        }
    }
}
