use thiserror::Error;

/// Errors raised by the numerical routines and the operator validators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix data is not square: expected {expected} entries, found {found}")]
    NotSquare { expected: usize, found: usize },

    #[error("matrix is not Hermitian (relative defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator does not have unit trace (trace {trace:.12})")]
    NotUnitTrace { trace: f64 },

    #[error("operator is zero")]
    ZeroOperator,

    #[error("operator is singular")]
    SingularOperator,

    #[error("matrix is not an orthogonal projection (defect {defect:.3e})")]
    NotProjection { defect: f64 },

    #[error("matrix is not a rank-one projection (index {index})")]
    NotRankOneProjection { index: usize },

    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("function `{function}` is not defined at {point}")]
    OutsideDomain { function: String, point: f64 },

    #[error("function `{function}`: declared property `{property}` fails on the sampling grid")]
    FlagViolation { function: String, property: String },

    #[error("function `{function}` has no declared {what}")]
    Undeclared { function: String, what: String },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("negative infinity is outside the supported extended-real range")]
    NegativeInfinity,

    #[error(
        "transition probability not preserved for inputs {first} and {second}: tr PQ = {expected:.6e}, image gives {found:.6e}"
    )]
    TransitionProbability {
        first: usize,
        second: usize,
        expected: f64,
        found: f64,
    },

    #[error("no tabulated image for the given input")]
    NotTabulated,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
