use thiserror::Error;

use crate::rational::Rational;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series has no nonzero coefficient in its stored range")]
    ZeroLeadingCoefficient,

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("coefficient of q^{index} requested but the series is only known below q^{precision}")]
    PrecisionExceeded { index: i64, precision: i64 },

    #[error("principal-part problem in weight {weight} has no unique solution")]
    NonUniqueSolution { weight: i64 },

    #[error("series is not the seed times a polynomial in j (residual at q^{index})")]
    NotPolynomialInJ { index: i64 },

    #[error("class-coordinate matrix is singular")]
    SingularCoordinateMatrix,

    #[error("obstruction does not vanish: {0:?}")]
    Obstructed(Vec<Rational>),

    #[error("series is not in the span of the basis (residual at q^{index})")]
    NotInSpan { index: i64 },

    #[error("linear system inconsistent: {0}")]
    Inconsistent(String),

    #[error("evaluation point has height {height:.6} below the expansion's validity height {min_height:.6}")]
    RegionGuard { height: f64, min_height: f64 },

    #[error("tail ratio {ratio:.6} does not certify convergence")]
    DivergentTail { ratio: f64 },

    #[error("evaluation paths disagree: relative difference {0:e}")]
    PathMismatch(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}
