use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {x} lies outside the domain [0, {l}]")]
    OutOfDomain { x: f64, l: f64 },

    #[error("history function requested at x = {0} > 0")]
    HistoryDomain(f64),

    #[error(
        "quadrature construction failed for lambda = {lambda}, nu = {nu}, N = {order}: {reason}"
    )]
    Quadrature {
        lambda: f64,
        nu: f64,
        order: usize,
        reason: &'static str,
    },

    #[error("singular Jacobian at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },

    #[error("non-finite residual in {row} at Newton iteration {iteration}")]
    NonFiniteResidual { row: String, iteration: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}
