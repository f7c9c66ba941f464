use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative solve stopped before reaching its tolerance.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// Closed-form evaluation requested on a branch that has none.
    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    /// The critical coupling is undefined for a free lattice (beta = 0).
    #[error("critical value undefined: {0}")]
    UndefinedCriticalValue(String),

    /// Operation restricted to the attractive branch.
    #[error("unsupported branch: {0}")]
    UnsupportedBranch(String),

    /// Radial integration may not start at or below the origin.
    #[error("singular endpoint: {0}")]
    Singularity(String),

    /// Adaptive stepping failed (step underflow or step budget exhausted).
    #[error("integration failure: {0}")]
    IntegrationFailure(String),

    /// Flux in (1/2, 1): map alpha to 1 - alpha and flip the circulation.
    #[error("flux {alpha} exceeds 1/2: reduce by the alpha -> 1 - alpha symmetry (use alpha = {reduced})")]
    ReduceBySymmetry { alpha: f64, reduced: f64 },

    /// Energy window empty or reaching above the comparison threshold.
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// Trial function fails the required boundary conditions.
    #[error("boundary violation: {0}")]
    BoundaryViolation(String),

    /// Two independent computations of the same quantity disagree.
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
