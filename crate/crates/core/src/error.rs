use thiserror::Error;

/// Errors raised by geometric queries and the numerical kernels behind them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate normal at row {0}")]
    DegenerateNormal(usize),
    #[error("unbounded")]
    Unbounded,
    #[error("empty")]
    Empty,
    #[error("singular linear map")]
    Singular,
    #[error("zero direction")]
    ZeroDirection,
    #[error("hull undefined: the points fit in no translate of the gauge")]
    HullUndefined,
    #[error("no covering translate")]
    NoCoveringTranslate,
    #[error("infeasible")]
    Infeasible,
    #[error("empty point set")]
    EmptyPointSet,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
