//! Lasso solver toolkit built around safe screening.
//!
//! The crate provides the Lasso primal/dual machinery ([`problem`]), safe
//! region geometry including the GAP sphere, GAP dome and Hölder dome
//! ([`regions`]), screening rules ([`screening`]), a FISTA solver that
//! screens at every iteration under a FLOP budget ([`solver`]) and the
//! radius-ratio and performance-profile experiments ([`experiments`]).

pub mod error;
pub mod experiments;
pub mod flops;
pub mod linalg;
pub mod problem;
pub mod regions;
pub mod screening;
pub mod solver;

pub use error::{Error, Result};
pub use flops::{flop_cost, FlopCounter, FlopEvent};
pub use linalg::Dictionary;
pub use problem::{soft_threshold, LassoProblem, DEFAULT_FEASIBILITY_TOL};
pub use regions::{
    cutting_halfspace, gap_dome, gap_sphere, holder_dome, strict_inclusion_witness, Dome,
    HalfSpace, RegionKind, SafeRegion, Sphere,
};
pub use screening::{compact_problem, screen_all, screen_atom, CompactProblem, ScreeningState};
pub use solver::{
    estimate_lipschitz, fista_solve, fista_solve_observed, Iterate, IterationRecord, SolverConfig,
    SolverTrace, Termination,
};
