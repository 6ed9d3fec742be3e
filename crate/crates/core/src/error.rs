use thiserror::Error;

/// Failure modes of the numerical kernel and the manifold layers above it.
///
/// Numeric payloads are reported in `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("eigenvalue {eigenvalue} overflows the exponential")]
    Overflow { eigenvalue: f64 },
    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue}, max {max_eigenvalue})")]
    NotPositiveDefinite {
        min_eigenvalue: f64,
        max_eigenvalue: f64,
    },
    #[error("matrix is not symmetric (max asymmetry {asymmetry})")]
    NotSymmetric { asymmetry: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("{solver} did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("H0 system is singular or ill-conditioned (condition number {condition})")]
    SingularH0 { condition: f64 },
    #[error("linear system is not positive definite")]
    SingularSystem,
    #[error("group elements belong to different charts ({left} vs {right})")]
    ChartMismatch { left: String, right: String },
    #[error("empty sample")]
    EmptySample,
    #[error("sample lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("covariance has a vanishing diagonal entry at index {index}")]
    SingularDiag { index: usize },
    #[error("point is not on the manifold: {0}")]
    NotMember(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
