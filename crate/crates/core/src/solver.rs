//! FISTA for the Lasso with safe screening interleaved at every iteration.
//!
//! Each iteration takes a proximal gradient step at the extrapolated point,
//! rescales the new residual into a dual feasible point, evaluates the
//! duality gap, builds the configured safe region from the current primal
//! and dual points, and physically removes the atoms it screens. The
//! dictionary is compacted in place; the step size `1/L` computed on the
//! full dictionary stays valid because removing columns cannot increase
//! the spectral norm.
//!
//! Gaps reported by a screening run are gaps of the reduced problem. The
//! reduced problem shares the primal optimum of the full one, so they still
//! bound the suboptimality `P(x) − P(x*)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flops::{FlopCounter, FlopEvent};
use crate::linalg::{axpy, norm1, norm2, norm2_sq, norm_inf, Dictionary};
use crate::problem::{dual_scale_factor, dual_value, soft_threshold_scalar, LassoProblem};
use crate::regions::{
    gap_dome_from_gap, gap_sphere_from_gap, holder_dome_from_parts, HalfSpace, RegionKind,
    SafeRegion,
};

const POWER_MAX_ITERATIONS: usize = 50;
const POWER_REL_TOL: f64 = 1e-6;
const LIPSCHITZ_INFLATION: f64 = 1.01;
const POWER_SEED: u64 = 0x6c69_7073_6368_6974;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub region: RegionKind,
    /// Stop once the cumulative FLOP count reaches this value; 0 disables.
    pub flop_budget: u64,
    pub gap_tolerance: f64,
    pub max_iterations: usize,
    pub screen_every: usize,
    /// Keep the full FLOP event log in the trace.
    #[serde(default)]
    pub record_flop_events: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            region: RegionKind::HolderDome,
            flop_budget: 0,
            gap_tolerance: 1e-9,
            max_iterations: 10_000,
            screen_every: 1,
            record_flop_events: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "max_iterations must be positive".into(),
            ));
        }
        if self.screen_every == 0 {
            return Err(Error::InvalidArgument(
                "screen_every must be positive".into(),
            ));
        }
        if self.gap_tolerance.is_nan() || self.gap_tolerance < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "gap tolerance must be nonnegative, got {}",
                self.gap_tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    GapTolerance,
    FlopBudget,
    MaxIterations,
    AllScreened,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::GapTolerance => "gap_tolerance",
            Termination::FlopBudget => "flop_budget",
            Termination::MaxIterations => "max_iterations",
            Termination::AllScreened => "all_screened",
        }
    }
}

/// State after iteration `iteration`: gap of `(x, u)` before screening,
/// atoms alive after screening, cumulative FLOPs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub gap: f64,
    pub alive: usize,
    pub flops: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    /// Final primal point, zero-padded to the original atom count.
    pub x: Vec<f64>,
    /// Original indices of the atoms never screened, increasing.
    pub alive: Vec<usize>,
    pub final_gap: f64,
    pub termination: Termination,
    pub lipschitz: f64,
    pub flop_events: Option<Vec<FlopEvent>>,
}

impl SolverTrace {
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.iteration)
    }

    pub fn flops(&self) -> u64 {
        self.records.last().map_or(0, |r| r.flops)
    }

    pub fn screened_counts(&self) -> Vec<usize> {
        let n = self.x.len();
        self.records.iter().map(|r| n - r.alive).collect()
    }
}

/// What an observer sees at each iteration, before screening.
#[derive(Debug)]
pub struct Iterate<'a> {
    pub iteration: usize,
    /// Coefficients of the alive atoms.
    pub x: &'a [f64],
    /// Original indices of the alive atoms.
    pub columns: &'a [usize],
    pub ax: &'a [f64],
    pub u: &'a [f64],
    pub primal: f64,
    pub gap: f64,
}

/// Upper bound on `‖A‖₂²` by power iteration on `AᵀA`, inflated by 1%.
pub fn estimate_lipschitz(a: &Dictionary) -> Result<f64> {
    Ok(power_iteration(a)?.0)
}

fn power_iteration(a: &Dictionary) -> Result<(f64, usize)> {
    let n = a.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(POWER_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let v_norm = norm2(&v);
    v.iter_mut().for_each(|e| *e /= v_norm);
    let mut av = vec![0.0; a.nrows()];
    let mut w = vec![0.0; n];
    let mut estimate = 0.0;
    let mut iterations = 0;
    while iterations < POWER_MAX_ITERATIONS {
        iterations += 1;
        a.matvec_into(&v, &mut av);
        a.matvec_t_into(&av, &mut w);
        let next = norm2(&w);
        if next == 0.0 {
            return Err(Error::InvalidArgument(
                "cannot estimate the Lipschitz constant of a zero dictionary".into(),
            ));
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / next;
        }
        let converged = (next - estimate).abs() <= POWER_REL_TOL * next;
        estimate = next;
        if converged {
            break;
        }
    }
    Ok((estimate * LIPSCHITZ_INFLATION, iterations))
}

pub fn fista_solve(p: &LassoProblem, cfg: &SolverConfig) -> Result<SolverTrace> {
    fista_solve_observed(p, cfg, |_| {})
}

/// Runs the solver and calls `observe` once per iteration (iteration 0 is
/// the starting point `x = 0`).
pub fn fista_solve_observed<F>(
    p: &LassoProblem,
    cfg: &SolverConfig,
    observe: F,
) -> Result<SolverTrace>
where
    F: FnMut(&Iterate<'_>),
{
    cfg.validate()?;
    let mut flops = FlopCounter::new(cfg.record_flop_events);
    let (lipschitz, power_iters) = power_iteration(p.dictionary())?;
    flops.add(FlopEvent::PowerIteration {
        m: p.m(),
        n: p.n(),
        iterations: power_iters,
    });
    let mut run = Run::new(p, cfg, lipschitz, flops);
    run.solve(observe)
}

struct Run<'p> {
    p: &'p LassoProblem,
    cfg: &'p SolverConfig,
    lipschitz: f64,
    flops: FlopCounter,
    y_norm_sq: f64,
    dict: Dictionary,
    columns: Vec<usize>,
    column_norms: Vec<f64>,
    x: Vec<f64>,
    z: Vec<f64>,
    ax: Vec<f64>,
    az: Vec<f64>,
    momentum: f64,
    records: Vec<IterationRecord>,
    // scratch
    rho: Vec<f64>,
    u: Vec<f64>,
    corr: Vec<f64>,
}

impl<'p> Run<'p> {
    fn new(
        p: &'p LassoProblem,
        cfg: &'p SolverConfig,
        lipschitz: f64,
        mut flops: FlopCounter,
    ) -> Self {
        let (m, n) = (p.m(), p.n());
        flops.add(FlopEvent::Setup { m });
        let column_norms = if cfg.region == RegionKind::None {
            Vec::new()
        } else {
            flops.add(FlopEvent::ColumnNorms { m, n });
            p.dictionary().columns().map(norm2).collect()
        };
        Self {
            p,
            cfg,
            lipschitz,
            flops,
            y_norm_sq: norm2_sq(p.observation()),
            dict: p.dictionary().clone(),
            columns: (0..n).collect(),
            column_norms,
            x: vec![0.0; n],
            z: vec![0.0; n],
            ax: vec![0.0; m],
            az: vec![0.0; m],
            momentum: 1.0,
            records: Vec::new(),
            rho: vec![0.0; m],
            u: vec![0.0; m],
            corr: vec![0.0; n],
        }
    }

    fn m(&self) -> usize {
        self.p.m()
    }

    fn k(&self) -> usize {
        self.columns.len()
    }

    fn solve<F: FnMut(&Iterate<'_>)>(&mut self, mut observe: F) -> Result<SolverTrace> {
        let mut gap = self.certify_step(0, &mut observe)?;
        let mut iteration = 0;
        let termination = loop {
            if self.columns.is_empty() {
                break Termination::AllScreened;
            }
            if gap <= self.cfg.gap_tolerance {
                break Termination::GapTolerance;
            }
            if self.cfg.flop_budget > 0 && self.flops.total() >= self.cfg.flop_budget {
                break Termination::FlopBudget;
            }
            if iteration >= self.cfg.max_iterations {
                break Termination::MaxIterations;
            }
            iteration += 1;
            self.proximal_step();
            gap = self.certify_step(iteration, &mut observe)?;
        };

        let x = {
            let mut full = vec![0.0; self.p.n()];
            for (&j, &v) in self.columns.iter().zip(&self.x) {
                full[j] = v;
            }
            full
        };
        // With every atom screened the reduced problem has optimum x = 0 and
        // dual optimum y, so the certified gap is exactly zero.
        let final_gap = if termination == Termination::AllScreened {
            0.0
        } else {
            gap
        };
        Ok(SolverTrace {
            records: std::mem::take(&mut self.records),
            x,
            alive: std::mem::take(&mut self.columns),
            final_gap,
            termination,
            lipschitz: self.lipschitz,
            flop_events: std::mem::take(&mut self.flops).into_log(),
        })
    }

    /// One FISTA step: `x⁺ = prox(z + Aᵀ(y − Az)/L)`, then momentum.
    fn proximal_step(&mut self) {
        let (m, k) = (self.m(), self.k());
        let y = self.p.observation();
        let step = 1.0 / self.lipschitz;
        let threshold = self.p.lambda() * step;

        for ((r, yi), azi) in self.rho.iter_mut().zip(y).zip(&self.az) {
            *r = yi - azi;
        }
        self.dict.matvec_t_into(&self.rho, &mut self.corr[..k]);
        self.flops.add(FlopEvent::Gradient { m, k });
        self.flops.add(FlopEvent::GradientStep { m, k });

        let x_new: Vec<f64> = self
            .z
            .iter()
            .zip(&self.corr[..k])
            .map(|(zj, gj)| soft_threshold_scalar(zj + step * gj, threshold))
            .collect();
        self.flops.add(FlopEvent::Prox { k });

        let mut ax_new = vec![0.0; m];
        self.dict.matvec_into(&x_new, &mut ax_new);
        self.flops.add(FlopEvent::Residual { m, k });

        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * self.momentum * self.momentum).sqrt());
        let beta = (self.momentum - 1.0) / t_next;
        for ((zj, xn), xo) in self.z.iter_mut().zip(&x_new).zip(&self.x) {
            *zj = xn + beta * (xn - xo);
        }
        for ((azi, an), ao) in self.az.iter_mut().zip(&ax_new).zip(&self.ax) {
            *azi = an + beta * (an - ao);
        }
        self.flops.add(FlopEvent::Momentum { m, k });
        self.momentum = t_next;
        self.x = x_new;
        self.ax = ax_new;
    }

    /// Dual scaling, gap, observer, screening and the iteration record.
    fn certify_step<F: FnMut(&Iterate<'_>)>(
        &mut self,
        iteration: usize,
        observe: &mut F,
    ) -> Result<f64> {
        let (m, k) = (self.m(), self.k());
        let y = self.p.observation();
        let lambda = self.p.lambda();

        for ((r, yi), axi) in self.rho.iter_mut().zip(y).zip(&self.ax) {
            *r = yi - axi;
        }
        self.dict.matvec_t_into(&self.rho, &mut self.corr[..k]);
        let scale = dual_scale_factor(norm_inf(&self.corr[..k]), lambda);
        for (ui, ri) in self.u.iter_mut().zip(&self.rho) {
            *ui = ri / scale;
        }
        self.flops.add(FlopEvent::DualScaling { m, k });

        let l1 = norm1(&self.x);
        let primal = 0.5 * norm2_sq(&self.rho) + lambda * l1;
        let dual = dual_value(y, self.y_norm_sq, &self.u);
        let gap = primal - dual;
        self.flops.add(FlopEvent::Gap { m, k });

        observe(&Iterate {
            iteration,
            x: &self.x,
            columns: &self.columns,
            ax: &self.ax,
            u: &self.u,
            primal,
            gap,
        });

        if self.cfg.region != RegionKind::None
            && iteration.is_multiple_of(self.cfg.screen_every)
            && k > 0
        {
            self.screen(gap, l1)?;
        }
        self.records.push(IterationRecord {
            iteration,
            gap,
            alive: self.k(),
            flops: self.flops.total(),
        });
        Ok(gap)
    }

    fn screen(&mut self, gap: f64, l1: f64) -> Result<()> {
        let (m, k) = (self.m(), self.k());
        let y = self.p.observation();
        let lambda = self.p.lambda();
        let region: SafeRegion = match self.cfg.region {
            RegionKind::None => return Ok(()),
            RegionKind::GapSphere => gap_sphere_from_gap(&self.u, gap).into(),
            RegionKind::GapDome => gap_dome_from_gap(y, &self.u, gap).into(),
            RegionKind::HolderDome => {
                holder_dome_from_parts(y, &self.u, HalfSpace::new(self.ax.clone(), lambda * l1))
                    .into()
            }
        };
        self.flops.add(FlopEvent::RegionBuild { m });
        if self.cfg.region.is_dome() {
            self.flops.add(FlopEvent::DomeSetup { m });
            self.flops.add(FlopEvent::DomeScreen { m, atoms: k });
        } else {
            self.flops.add(FlopEvent::SphereScreen { m, atoms: k });
        }

        let tester = region.tester()?;
        let mut keep = Vec::with_capacity(k);
        for j in 0..k {
            keep.push(!tester.screens(self.dict.column(j), self.column_norms[j], lambda));
        }
        if keep.iter().all(|&b| b) {
            return Ok(());
        }

        for j in (0..k).filter(|&j| !keep[j]) {
            let col = self.dict.column(j);
            if self.x[j] != 0.0 {
                axpy(-self.x[j], col, &mut self.ax);
                self.flops.add(FlopEvent::ColumnUpdate { m });
            }
            if self.z[j] != 0.0 {
                axpy(-self.z[j], col, &mut self.az);
                self.flops.add(FlopEvent::ColumnUpdate { m });
            }
        }
        let kept: Vec<usize> = (0..k).filter(|&j| keep[j]).collect();
        self.dict = if kept.is_empty() {
            // keep a placeholder; no column is ever read once k == 0
            self.dict.select_columns(&[0])?
        } else {
            self.dict.select_columns(&kept)?
        };
        self.columns = kept.iter().map(|&j| self.columns[j]).collect();
        self.column_norms = kept.iter().map(|&j| self.column_norms[j]).collect();
        self.x = kept.iter().map(|&j| self.x[j]).collect();
        self.z = kept.iter().map(|&j| self.z[j]).collect();
        Ok(())
    }
}
