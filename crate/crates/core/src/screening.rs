//! Safe screening: removing atoms whose coefficient is provably zero.
//!
//! Atom `a_i` can be discarded when `max_{u ∈ R} |⟨a_i, u⟩| < λ` for a safe
//! region `R` containing the dual optimum. The comparison keeps a relative
//! margin of [`SCREEN_RTOL`](crate::regions::SCREEN_RTOL) against rounding.

use crate::error::{Error, Result};
use crate::linalg::{norm2, Dictionary};
use crate::problem::LassoProblem;
use crate::regions::SafeRegion;

/// Surviving atoms, as strictly increasing indices into the original
/// dictionary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreeningState {
    alive: Vec<usize>,
    original_n: usize,
}

impl ScreeningState {
    pub fn new(n: usize) -> Self {
        Self {
            alive: (0..n).collect(),
            original_n: n,
        }
    }

    pub fn from_alive(alive: Vec<usize>, original_n: usize) -> Result<Self> {
        let increasing = alive.windows(2).all(|w| w[0] < w[1]);
        if !increasing || alive.last().is_some_and(|&i| i >= original_n) {
            return Err(Error::InvalidArgument(
                "alive indices must be strictly increasing and in range".into(),
            ));
        }
        Ok(Self { alive, original_n })
    }

    pub fn alive(&self) -> &[usize] {
        &self.alive
    }

    pub fn original_n(&self) -> usize {
        self.original_n
    }

    pub fn screened_total(&self) -> usize {
        self.original_n - self.alive.len()
    }

    pub fn is_alive(&self, i: usize) -> bool {
        self.alive.binary_search(&i).is_ok()
    }

    /// Indices removed so far.
    pub fn screened(&self) -> Vec<usize> {
        (0..self.original_n)
            .filter(|i| !self.is_alive(*i))
            .collect()
    }
}

/// True when the atom is provably inactive at the optimum.
pub fn screen_atom(region: &SafeRegion, atom: &[f64], lambda: f64) -> Result<bool> {
    Ok(region.tester()?.screens(atom, norm2(atom), lambda))
}

/// Removes every alive atom that passes the screening test.
pub fn screen_all(
    p: &LassoProblem,
    region: &SafeRegion,
    state: &ScreeningState,
) -> Result<ScreeningState> {
    if state.original_n != p.n() {
        return Err(Error::DimensionMismatch {
            what: "screening state",
            expected: p.n(),
            found: state.original_n,
        });
    }
    let tester = region.tester()?;
    let mut alive = Vec::with_capacity(state.alive.len());
    for &i in &state.alive {
        let atom = p.dictionary().column(i);
        if !tester.screens(atom, norm2(atom), p.lambda()) {
            alive.push(i);
        }
    }
    Ok(ScreeningState {
        alive,
        original_n: state.original_n,
    })
}

/// The problem restricted to the surviving atoms. When every atom has been
/// screened the reduced problem is absent and the solution is `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactProblem {
    pub problem: Option<LassoProblem>,
    pub index_map: Vec<usize>,
    pub original_n: usize,
}

impl CompactProblem {
    /// Zero-pads a solution of the reduced problem back to the original
    /// atom indexing.
    pub fn expand(&self, x_reduced: &[f64]) -> Result<Vec<f64>> {
        if x_reduced.len() != self.index_map.len() {
            return Err(Error::DimensionMismatch {
                what: "reduced solution",
                expected: self.index_map.len(),
                found: x_reduced.len(),
            });
        }
        let mut x = vec![0.0; self.original_n];
        for (&i, &v) in self.index_map.iter().zip(x_reduced) {
            x[i] = v;
        }
        Ok(x)
    }
}

pub fn compact_problem(p: &LassoProblem, state: &ScreeningState) -> Result<CompactProblem> {
    if state.original_n != p.n() {
        return Err(Error::DimensionMismatch {
            what: "screening state",
            expected: p.n(),
            found: state.original_n,
        });
    }
    let problem = if state.alive.is_empty() {
        None
    } else {
        let dictionary: Dictionary = p.dictionary().select_columns(&state.alive)?;
        Some(LassoProblem::new(
            dictionary,
            p.observation().to_vec(),
            p.lambda(),
        )?)
    };
    Ok(CompactProblem {
        problem,
        index_map: state.alive.clone(),
        original_n: state.original_n,
    })
}
