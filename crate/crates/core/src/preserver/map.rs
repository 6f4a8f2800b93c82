//! Maps on states: unitary and antiunitary conjugations, Kraus channels and tabulated maps.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixcore::ComplexMatrix;
use crate::operators::DensityOperator;

/// Completeness and unitarity tolerance for map construction.
pub const MAP_TOL: f64 = 1e-10;

/// Whether a symmetry is implemented by a unitary or an antiunitary operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryKind {
    Unitary,
    Antiunitary,
}

impl SymmetryKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SymmetryKind::Unitary => "unitary",
            SymmetryKind::Antiunitary => "antiunitary",
        }
    }
}

impl std::fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `U A U*` for the unitary kind, `U conj(A) U*` for the antiunitary kind.
pub fn conjugate(kind: SymmetryKind, u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    match kind {
        SymmetryKind::Unitary => a.conjugate_by(u),
        SymmetryKind::Antiunitary => a.conj().conjugate_by(u),
    }
}

#[derive(Debug, Clone)]
pub enum StateMap {
    UnitaryConjugation(ComplexMatrix),
    /// `A ↦ U conj(A) U*`, conjugation taken entrywise in the standard basis.
    AntiunitaryConjugation(ComplexMatrix),
    KrausChannel(Vec<ComplexMatrix>),
    /// Explicit input/output pairs; inputs are matched up to `1e-12` in Frobenius norm.
    Tabulated(Vec<(ComplexMatrix, ComplexMatrix)>),
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let defect = u.unitarity_defect();
    if defect > MAP_TOL {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

impl StateMap {
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        Ok(StateMap::UnitaryConjugation(u))
    }

    pub fn antiunitary(u: ComplexMatrix) -> Result<Self> {
        check_unitary(&u)?;
        Ok(StateMap::AntiunitaryConjugation(u))
    }

    pub fn conjugation(kind: SymmetryKind, u: ComplexMatrix) -> Result<Self> {
        match kind {
            SymmetryKind::Unitary => Self::unitary(u),
            SymmetryKind::Antiunitary => Self::antiunitary(u),
        }
    }

    pub fn identity(n: usize) -> Self {
        StateMap::UnitaryConjugation(ComplexMatrix::identity(n))
    }

    /// Transpose in the standard basis, which on Hermitian inputs is entrywise conjugation.
    pub fn transpose(n: usize) -> Self {
        StateMap::AntiunitaryConjugation(ComplexMatrix::identity(n))
    }

    /// Checks `Σ K*K = I` within [`MAP_TOL`].
    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus family".into()))?;
        let n = first.dim();
        let mut sum = ComplexMatrix::zeros(n);
        for k in &ops {
            k.check_same_dim(first)?;
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = (&sum - &ComplexMatrix::identity(n)).frobenius_norm();
        if defect > MAP_TOL {
            return Err(Error::InvalidParameter(format!(
                "Kraus operators are not complete: ‖Σ K*K − I‖_F = {defect:.3e}"
            )));
        }
        Ok(StateMap::KrausChannel(ops))
    }

    /// `A ↦ (1 − p) A + p tr(A) I/n` through the Weyl operators `XᵃZᵇ`.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) || n == 0 {
            return Err(Error::InvalidParameter(format!(
                "depolarizing parameter {p} must lie in [0, 1]"
            )));
        }
        let nn = (n * n) as f64;
        let mut ops = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let w = if a == 0 && b == 0 {
                    (1.0 - p + p / nn).sqrt()
                } else {
                    (p / nn).sqrt()
                };
                ops.push(weyl(n, a, b).scale(w));
            }
        }
        Self::kraus(ops)
    }

    pub fn tabulated(pairs: Vec<(ComplexMatrix, ComplexMatrix)>) -> Result<Self> {
        let first = pairs
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty table".into()))?;
        for (i, o) in &pairs {
            i.check_same_dim(&first.0)?;
            o.check_same_dim(&first.0)?;
        }
        Ok(StateMap::Tabulated(pairs))
    }

    pub fn dim(&self) -> usize {
        match self {
            StateMap::UnitaryConjugation(u) | StateMap::AntiunitaryConjugation(u) => u.dim(),
            StateMap::KrausChannel(ops) => ops[0].dim(),
            StateMap::Tabulated(pairs) => pairs[0].0.dim(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            StateMap::UnitaryConjugation(_) => "unitary_conjugation",
            StateMap::AntiunitaryConjugation(_) => "antiunitary_conjugation",
            StateMap::KrausChannel(_) => "kraus_channel",
            StateMap::Tabulated(_) => "tabulated",
        }
    }

    /// The implementing operator and its kind, for conjugation maps.
    pub fn symmetry(&self) -> Option<(SymmetryKind, &ComplexMatrix)> {
        match self {
            StateMap::UnitaryConjugation(u) => Some((SymmetryKind::Unitary, u)),
            StateMap::AntiunitaryConjugation(u) => Some((SymmetryKind::Antiunitary, u)),
            _ => None,
        }
    }

    pub fn apply_matrix(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        match self {
            StateMap::UnitaryConjugation(u) => Ok(conjugate(SymmetryKind::Unitary, u, a)),
            StateMap::AntiunitaryConjugation(u) => Ok(conjugate(SymmetryKind::Antiunitary, u, a)),
            StateMap::KrausChannel(ops) => {
                let mut out = ComplexMatrix::zeros(a.dim());
                for k in ops {
                    out = &out + &a.conjugate_by(k);
                }
                Ok(out)
            }
            StateMap::Tabulated(pairs) => pairs
                .iter()
                .find(|(i, _)| (i - a).frobenius_norm() <= 1e-12)
                .map(|(_, o)| o.clone())
                .ok_or(Error::NotTabulated),
        }
    }

    /// Applies the map and validates the output as a density operator.
    pub fn apply(&self, a: &DensityOperator) -> Result<DensityOperator> {
        DensityOperator::new(self.apply_matrix(a.matrix())?.hermitian_part())
    }

    /// `next ∘ self` for two conjugation maps.
    pub fn then(&self, next: &StateMap) -> Result<StateMap> {
        let (j, u) = self
            .symmetry()
            .ok_or_else(|| Error::InvalidParameter("composition needs conjugation maps".into()))?;
        let (k, v) = next
            .symmetry()
            .ok_or_else(|| Error::InvalidParameter("composition needs conjugation maps".into()))?;
        // V c_k(U c_j(A) U*) V* = (V c_k(U)) c_{j⊕k}(A) (V c_k(U))*
        let inner = match k {
            SymmetryKind::Unitary => u.clone(),
            SymmetryKind::Antiunitary => u.conj(),
        };
        let w = v * &inner;
        Ok(if j == k {
            StateMap::UnitaryConjugation(w)
        } else {
            StateMap::AntiunitaryConjugation(w)
        })
    }
}

/// `XᵃZᵇ` with `X|k⟩ = |k+1 mod n⟩` and `Z|k⟩ = ω^k |k⟩`.
pub fn weyl(n: usize, a: usize, b: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for k in 0..n {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * ((b * k) % n) as f64 / n as f64);
        m[((k + a) % n, k)] = phase;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_unitary, random_antiunitary, random_density, SeededRng};

    #[test]
    fn depolarizing_is_complete_and_mixes() {
        let map = StateMap::depolarizing(3, 0.5).unwrap();
        let mut rng = SeededRng::new(1);
        let a = random_density(3, 1, &mut rng).unwrap();
        let out = map.apply(&a).unwrap();
        let expected = &a.matrix().scale(0.5) + &ComplexMatrix::identity(3).scale(0.5 / 3.0);
        assert!((out.matrix() - &expected).frobenius_norm() < 1e-12);
    }

    #[test]
    fn incomplete_kraus_is_rejected() {
        let k = ComplexMatrix::identity(2).scale(0.9);
        assert!(StateMap::kraus(vec![k]).is_err());
        assert!(StateMap::depolarizing(2, 1.5).is_err());
    }

    #[test]
    fn antiunitary_on_real_diagonal_is_plain_similarity() {
        let mut rng = SeededRng::new(2);
        let map = random_antiunitary(3, &mut rng);
        let (_, u) = map.symmetry().unwrap();
        let a = ComplexMatrix::from_diag(&[0.2, 0.3, 0.5]);
        let out = map.apply_matrix(&a).unwrap();
        assert!((&out - &a.conjugate_by(u)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn antiunitary_preserves_states() {
        let mut rng = SeededRng::new(3);
        let map = random_antiunitary(3, &mut rng);
        for i in 0..100 {
            let a = random_density(3, 1 + i % 3, &mut rng).unwrap();
            let out = map.apply(&a).unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-12);
            assert_eq!(out.rank(), a.rank());
        }
    }

    #[test]
    fn two_antiunitaries_compose_to_a_unitary() {
        let mut rng = SeededRng::new(4);
        let m = random_antiunitary(3, &mut rng);
        let mm = m.then(&m).unwrap();
        assert!(matches!(mm, StateMap::UnitaryConjugation(_)));
        let a = random_density(3, 2, &mut rng).unwrap();
        let direct = m
            .apply_matrix(&m.apply_matrix(a.matrix()).unwrap())
            .unwrap();
        assert!((&direct - &mm.apply_matrix(a.matrix()).unwrap()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn transpose_matches_conjugation_on_hermitian_inputs() {
        let mut rng = SeededRng::new(6);
        let a = random_density(3, 3, &mut rng).unwrap();
        let out = StateMap::transpose(3).apply_matrix(a.matrix()).unwrap();
        assert!((&out - &a.matrix().transpose()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn tabulated_lookup() {
        let mut rng = SeededRng::new(7);
        let u = haar_unitary(2, &mut rng);
        let a = random_density(2, 1, &mut rng).unwrap();
        let map =
            StateMap::tabulated(vec![(a.matrix().clone(), a.matrix().conjugate_by(&u))]).unwrap();
        assert!(map.apply(&a).is_ok());
        let b = random_density(2, 1, &mut rng).unwrap();
        assert!(matches!(map.apply(&b), Err(Error::NotTabulated)));
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            StateMap::unitary(m),
            Err(Error::NotUnitary { .. })
        ));
    }
}
