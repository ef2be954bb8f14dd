use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge after {panels} panels (error estimate {estimate:e}, tolerance {tolerance:e})")]
    NonConvergence {
        panels: usize,
        estimate: f64,
        tolerance: f64,
    },
    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },
    #[error("series division by a series with zero constant term")]
    ZeroLeadingTerm,
    #[error("rational power of the constant term leaves Q(2^(1/3))")]
    NonRepresentablePower,
    #[error("series reversion needs zero constant term and nonzero linear term")]
    NotInvertible,
    #[error("pole cancellation failed: coefficient of degree {degree} is nonzero")]
    PoleCancellationFailure { degree: i32 },
    #[error("invalid tolerance {0:e}; expected a value in [1e-15, 1e-3]")]
    InvalidTolerance(f64),
}
