use thiserror::Error;

/// Errors raised by the screening toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dual point is infeasible: ||A^T u||_inf = {norm} exceeds lambda = {lambda}")]
    InfeasibleDual { norm: f64, lambda: f64 },

    #[error("safe region is empty")]
    EmptyRegion,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "budget calibration failed after {steps} steps: bracket [{lo}, {hi}] \
         gives rho in [{rho_lo}, {rho_hi}]"
    )]
    CalibrationFailed {
        lo: u64,
        hi: u64,
        rho_lo: f64,
        rho_hi: f64,
        steps: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            found,
        })
    }
}
