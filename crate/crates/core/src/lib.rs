//! Quantum f-divergences, Rényi and sandwiched Rényi divergences, the
//! generalized quantity `D'_{f,g}`, and tools for testing which maps on
//! states preserve them.
//!
//! Operators are dense complex matrices; all spectral work goes through a
//! cyclic Jacobi eigensolver with clustered eigenvalues, so support and
//! orthogonality decisions are made on ranks rather than on numeric blow-up.

pub mod cli;
pub mod divergence;
pub mod error;
pub mod extended;
pub mod function;
pub mod matrixcore;
pub mod operators;
pub mod preserver;
pub mod sampling;

pub use divergence::{
    d_fg, d_fg_limit_probe, f_divergence, f_divergence_superop, renyi_traditional, sandwiched_core,
    sandwiched_renyi, umegaki, Divergence, LimitProbe,
};
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use function::{Domain, FunctionFlags, Limit, ScalarFunctionSpec};
pub use matrixcore::ComplexMatrix;
pub use operators::{DensityOperator, PositiveOperator};
pub use preserver::{StateMap, SymmetryKind};
pub use sampling::SeededRng;
