//! Superoperators on `B(H)` under column-major vectorization.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// A linear map on `n x n` matrices, stored as its `n² x n²` matrix acting on `vec(T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Superoperator {
    pub fn from_matrix(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dim() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: matrix.dim(),
            });
        }
        Ok(Self { dim, matrix })
    }

    /// Dimension `n` of the underlying space (the matrix is `n² x n²`).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.matrix.mul_vec(v)
    }

    pub fn apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: t.dim(),
            });
        }
        ComplexMatrix::unvectorize(&self.apply_vec(&t.vectorize()))
    }

    pub fn compose(&self, other: &Superoperator) -> Result<Superoperator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `‖ST − TS‖_F`.
    pub fn commutator_norm(&self, other: &Superoperator) -> f64 {
        (&(&self.matrix * &other.matrix) - &(&other.matrix * &self.matrix)).frobenius_norm()
    }
}

/// `L_A R_B : T ↦ A T B`, i.e. the matrix `Bᵀ ⊗ A` on `vec(T)`.
pub fn superop_lr(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Superoperator> {
    a.check_same_dim(b)?;
    Superoperator::from_matrix(a.dim(), b.transpose().kron(a))
}

/// `L_A : T ↦ A T`.
pub fn left_mul(a: &ComplexMatrix) -> Superoperator {
    superop_lr(a, &ComplexMatrix::identity(a.dim())).expect("same dimension")
}

/// `R_B : T ↦ T B`.
pub fn right_mul(b: &ComplexMatrix) -> Superoperator {
    superop_lr(&ComplexMatrix::identity(b.dim()), b).expect("same dimension")
}
