use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: u32, max: u32 },

    #[error("spline evaluation routes disagree for degree {degree} at x = {x}")]
    CrossCheckMismatch { degree: u32, x: String },

    #[error("matrix order {order} is too small for half-bandwidth {bandwidth}")]
    OrderTooSmall { order: usize, bandwidth: usize },

    #[error("operation requires half-bandwidth {expected}, found {found}")]
    BandwidthMismatch { expected: usize, found: usize },

    #[error("factorization broke down at row {row} (pivot below the working-precision threshold)")]
    FactorizationBreakdown { row: usize },

    #[error("bisection did not converge within {iterations} iterations at {precision} bits")]
    NonConvergence { iterations: u32, precision: u32 },

    #[error("circulant of order {order} is numerically singular at {precision} bits")]
    SingularCirculant { order: usize, precision: u32 },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
}
