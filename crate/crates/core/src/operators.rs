//! Validated positive operators and density operators with cached spectral data.

use std::ops::Deref;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrixcore::spectral::support_of;
use crate::matrixcore::{psd_decomposition, range_basis, ComplexMatrix, SpectralDecomposition};

/// Trace and positivity tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-10;

/// A positive semidefinite matrix together with its clustered spectrum and support.
#[derive(Debug, Clone)]
pub struct PositiveOperator {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
    support: ComplexMatrix,
    rank: usize,
}

impl PositiveOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let spectrum = psd_decomposition(&matrix)?;
        let (support, rank) = support_of(&spectrum);
        Ok(Self {
            matrix: matrix.hermitian_part(),
            spectrum,
            support,
            rank,
        })
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(diag))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Clustered spectrum with sub-threshold eigenvalues set to zero.
    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn support(&self) -> &ComplexMatrix {
        &self.support
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Invertible, i.e. full rank.
    pub fn is_definite(&self) -> bool {
        self.rank == self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Orthonormal basis of the support.
    pub fn support_basis(&self) -> Vec<Vec<Complex64>> {
        self.spectrum
            .clusters()
            .iter()
            .filter(|c| c.eigenvalue > 0.0)
            .flat_map(|c| c.vectors.iter().cloned())
            .collect()
    }

    /// `Σ_{λ>0} φ(λ) P_λ`: the function applied on the support, zero on the kernel.
    pub fn on_support<F: FnMut(f64) -> f64>(&self, mut phi: F) -> ComplexMatrix {
        self.spectrum.map(|l| if l > 0.0 { phi(l) } else { 0.0 })
    }

    /// `supp self ⊆ supp other`, decided by ranks: `rank(P + Q) = rank(Q)`.
    pub fn support_within(&self, other: &PositiveOperator) -> Result<bool> {
        Ok(joint_support_rank(self, other)? == other.rank)
    }

    /// `supp self ⟂ supp other`, decided by ranks: `rank(P + Q) = rank(P) + rank(Q)`.
    pub fn support_orthogonal(&self, other: &PositiveOperator) -> Result<bool> {
        Ok(joint_support_rank(self, other)? == self.rank + other.rank)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.matrix.scale(c))
    }
}

fn joint_support_rank(a: &PositiveOperator, b: &PositiveOperator) -> Result<usize> {
    a.matrix.check_same_dim(&b.matrix)?;
    let sum = &a.support + &b.support;
    Ok(PositiveOperator::new(sum)?.rank)
}

/// A positive semidefinite operator with unit trace.
#[derive(Debug, Clone)]
pub struct DensityOperator(PositiveOperator);

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let inner = PositiveOperator::new(matrix)?;
        let min = inner.spectrum.min_eigenvalue();
        if min < -DENSITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        let trace = inner.trace();
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        Ok(Self(inner))
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diag(diag))
    }

    pub fn positive(&self) -> &PositiveOperator {
        &self.0
    }

    pub fn into_positive(self) -> PositiveOperator {
        self.0
    }

    /// `true` when this is a rank-one projection (a pure state).
    pub fn is_pure(&self) -> bool {
        self.0.rank == 1
    }
}

impl Deref for DensityOperator {
    type Target = PositiveOperator;

    fn deref(&self) -> &PositiveOperator {
        &self.0
    }
}

impl AsRef<PositiveOperator> for DensityOperator {
    fn as_ref(&self) -> &PositiveOperator {
        &self.0
    }
}

impl AsRef<PositiveOperator> for PositiveOperator {
    fn as_ref(&self) -> &PositiveOperator {
        self
    }
}

impl TryFrom<ComplexMatrix> for PositiveOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl TryFrom<ComplexMatrix> for DensityOperator {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

/// Validates that `p` is a rank-one orthogonal projection and returns a unit vector spanning it.
pub fn rank_one_vector(p: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let basis = range_basis(p)?;
    if basis.len() != 1 {
        return Err(Error::NotRankOneProjection { index: 0 });
    }
    Ok(basis.into_iter().next().expect("one vector"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_validation() {
        assert!(DensityOperator::from_diag(&[0.5, 0.5]).is_ok());
        assert!(matches!(
            DensityOperator::from_diag(&[0.5, 0.6]),
            Err(Error::NotUnitTrace { .. })
        ));
        assert!(matches!(
            DensityOperator::from_diag(&[1.5, -0.5]),
            Err(Error::NotPositive { .. })
        ));
        // rounding noise below the tolerance is clamped
        let d = DensityOperator::from_diag(&[1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(d.rank(), 1);
    }

    #[test]
    fn definiteness_and_support() {
        let a = PositiveOperator::from_diag(&[0.5, 0.5, 0.0]).unwrap();
        assert_eq!(a.rank(), 2);
        assert!(!a.is_definite());
        let b = PositiveOperator::from_diag(&[0.2, 0.3, 0.5]).unwrap();
        assert!(b.is_definite());
        assert!(a.support_within(&b).unwrap());
        assert!(!b.support_within(&a).unwrap());

        let c = PositiveOperator::from_diag(&[0.0, 0.0, 1.0]).unwrap();
        assert!(a.support_orthogonal(&c).unwrap());
        assert!(!a.support_orthogonal(&b).unwrap());
    }

    #[test]
    fn zero_operator() {
        let z = PositiveOperator::new(ComplexMatrix::zeros(2)).unwrap();
        assert!(z.is_zero());
    }
}
