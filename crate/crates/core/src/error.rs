use thiserror::Error;

/// Errors raised by geometric operations, solvers and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("empty body: the halfspace intersection is empty")]
    EmptyBody,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The body has zero volume; `affine_dim` is the dimension of its affine hull.
    #[error("degenerate body: affine hull has dimension {affine_dim}")]
    DegenerateBody { affine_dim: usize },

    #[error("measure is not an Alexandrov measure: {0}")]
    AlexandrovViolation(String),

    #[error("solver did not converge (best residual {residual:.3e})")]
    NonConvergence { residual: f64 },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
