//! Deterministic floating-point operation cost model.
//!
//! A multiply-add counts as two operations. Scalar bookkeeping is charged
//! small fixed constants. The same model is applied to every solver
//! variant, screening overhead included.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "event")]
pub enum FlopEvent {
    /// `⟨a, b⟩` with vectors of length `m`.
    InnerProduct { m: usize },
    /// `y − Ax` over `k` atoms.
    Residual { m: usize, k: usize },
    /// `Aᵀr` over `k` atoms.
    Gradient { m: usize, k: usize },
    /// Soft thresholding of `k` entries.
    Prox { k: usize },
    /// `Aᵀρ` followed by the rescaling of `ρ`.
    DualScaling { m: usize, k: usize },
    /// Sphere test on `atoms` atoms: one inner product each.
    SphereScreen { m: usize, atoms: usize },
    /// Dome test on `atoms` atoms: `⟨a, c⟩` and `⟨a, g⟩` plus scalar work.
    DomeScreen { m: usize, atoms: usize },
    /// `⟨g, c⟩`, computed once per dome.
    DomeSetup { m: usize },
    /// Center, radius, half-space and center norm of a safe region.
    RegionBuild { m: usize },
    /// `y − Az` and the gradient step `z + Aᵀr / L`.
    GradientStep { m: usize, k: usize },
    /// Momentum update of `z` and of the maintained product `Az`.
    Momentum { m: usize, k: usize },
    /// Primal and dual objectives from the residual and the dual point.
    Gap { m: usize, k: usize },
    /// Removing one nonzero coefficient from a maintained product `Ax`.
    ColumnUpdate { m: usize },
    /// Power iteration on `AᵀA`.
    PowerIteration {
        m: usize,
        n: usize,
        iterations: usize,
    },
    /// `‖y‖²`, computed once.
    Setup { m: usize },
    /// Norms of `n` atoms, computed once by screening solvers.
    ColumnNorms { m: usize, n: usize },
}

pub fn flop_cost(event: &FlopEvent) -> u64 {
    let c = |v: usize| v as u64;
    match *event {
        FlopEvent::InnerProduct { m } => 2 * c(m),
        FlopEvent::Residual { m, k } => 2 * c(m) * c(k),
        FlopEvent::Gradient { m, k } => 2 * c(m) * c(k),
        FlopEvent::Prox { k } => 3 * c(k),
        FlopEvent::DualScaling { m, k } => 2 * c(m) * c(k) + 2 * c(m),
        FlopEvent::SphereScreen { m, atoms } => c(atoms) * (2 * c(m) + 4),
        FlopEvent::DomeScreen { m, atoms } => c(atoms) * (4 * c(m) + 20),
        FlopEvent::DomeSetup { m } => 2 * c(m),
        FlopEvent::RegionBuild { m } => 6 * c(m),
        FlopEvent::GradientStep { m, k } => c(m) + 2 * c(k),
        FlopEvent::Momentum { m, k } => 3 * c(m) + 3 * c(k) + 8,
        FlopEvent::Gap { m, k } => 5 * c(m) + 2 * c(k),
        FlopEvent::ColumnUpdate { m } => 2 * c(m),
        FlopEvent::PowerIteration { m, n, iterations } => {
            c(iterations) * (4 * c(m) * c(n) + 3 * c(n))
        }
        FlopEvent::Setup { m } => 2 * c(m),
        FlopEvent::ColumnNorms { m, n } => 2 * c(m) * c(n),
    }
}

/// Running total, optionally keeping the event log.
#[derive(Debug, Clone, Default)]
pub struct FlopCounter {
    total: u64,
    log: Option<Vec<FlopEvent>>,
}

impl FlopCounter {
    pub fn new(keep_log: bool) -> Self {
        Self {
            total: 0,
            log: keep_log.then(Vec::new),
        }
    }

    #[inline]
    pub fn add(&mut self, event: FlopEvent) {
        self.total += flop_cost(&event);
        if let Some(log) = self.log.as_mut() {
            log.push(event);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn into_log(self) -> Option<Vec<FlopEvent>> {
        self.log
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_examples() {
        assert_eq!(flop_cost(&FlopEvent::InnerProduct { m: 100 }), 200);
        assert_eq!(
            flop_cost(&FlopEvent::SphereScreen { m: 100, atoms: 1 }),
            204
        );
        assert_eq!(flop_cost(&FlopEvent::DomeScreen { m: 100, atoms: 1 }), 420);
        assert_eq!(
            flop_cost(&FlopEvent::DualScaling { m: 100, k: 500 }),
            100_200
        );
    }

    #[test]
    fn plain_iteration_core_cost() {
        let (m, k) = (100, 500);
        let core = flop_cost(&FlopEvent::Residual { m, k })
            + flop_cost(&FlopEvent::Gradient { m, k })
            + flop_cost(&FlopEvent::Prox { k });
        assert_eq!(core, 201_500);
        // step and momentum bookkeeping on top of the matrix products
        let extra =
            flop_cost(&FlopEvent::GradientStep { m, k }) + flop_cost(&FlopEvent::Momentum { m, k });
        assert_eq!(extra, 100 + 1000 + 300 + 1500 + 8);
    }

    #[test]
    fn counter_keeps_log_on_request() {
        let mut c = FlopCounter::new(true);
        c.add(FlopEvent::Prox { k: 2 });
        c.add(FlopEvent::InnerProduct { m: 3 });
        assert_eq!(c.total(), 12);
        assert_eq!(c.into_log().unwrap().len(), 2);
        let mut quiet = FlopCounter::new(false);
        quiet.add(FlopEvent::Prox { k: 2 });
        assert!(quiet.into_log().is_none());
    }
}
