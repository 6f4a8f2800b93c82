//! Sampling checks that a map preserves a divergence or acts as a given conjugation.

use serde::Serialize;

use crate::divergence::Divergence;
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::matrixcore::ComplexMatrix;
use crate::operators::DensityOperator;
use crate::sampling::{random_density, SeededRng};

use super::map::{conjugate, StateMap, SymmetryKind, MAP_TOL};

/// Rank for the `i`-th sample: full, one, or a random intermediate rank, in turn.
pub fn mixed_rank(n: usize, i: usize, rng: &mut SeededRng) -> usize {
    match i % 3 {
        0 => n,
        1 => 1,
        _ if n <= 2 => 1,
        _ => 2 + rng.below(n - 2),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceWitness {
    pub index: usize,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub before: ExtendedReal,
    pub after: ExtendedReal,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub samples: usize,
    /// Largest deviation: absolute for the logarithmic divergences, relative to
    /// `max(1, |value|)` for the raw trace quantities, which grow without bound
    /// as `B` approaches singularity.
    pub max_deviation: f64,
    pub infinity_mismatches: usize,
    pub witness: Option<InvarianceWitness>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

fn deviation_scale(divergence: &Divergence, value: ExtendedReal) -> f64 {
    match divergence {
        Divergence::Umegaki | Divergence::Renyi { .. } | Divergence::Sandwiched { .. } => 1.0,
        _ => value.finite().map_or(1.0, |v| v.abs().max(1.0)),
    }
}

/// Compares `Δ(A‖B)` with `Δ(φ(A)‖φ(B))` on seeded density pairs of mixed rank.
///
/// `+∞` values are compared by class. The witness is the first pair with an
/// infinity mismatch, otherwise the pair of largest deviation when it exceeds `tol`.
pub fn check_invariance(
    map: &StateMap,
    divergence: &Divergence,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<InvarianceReport> {
    if matches!(map, StateMap::Tabulated(_)) {
        return Err(Error::InvalidParameter(
            "a tabulated map cannot be evaluated on sampled states".into(),
        ));
    }
    let n = map.dim();
    let mut rng = SeededRng::new(seed);
    let mut max_dev = 0.0_f64;
    let mut mismatches = 0;
    let mut first_mismatch = None;
    let mut worst = None;

    for i in 0..n_samples {
        let ra = mixed_rank(n, i, &mut rng);
        let rb = mixed_rank(n, i / 3, &mut rng);
        let a = random_density(n, ra, &mut rng)?;
        let b = random_density(n, rb, &mut rng)?;
        let fa = map.apply(&a)?;
        let fb = map.apply(&b)?;
        let before = divergence.evaluate(&a, &b)?;
        let after = divergence.evaluate(&fa, &fb)?;
        let witness = || InvarianceWitness {
            index: i,
            a: a.matrix().clone(),
            b: b.matrix().clone(),
            before,
            after,
        };
        match before.abs_diff(&after) {
            Some(d) => {
                let d = d / deviation_scale(divergence, before);
                if d > max_dev || worst.is_none() {
                    max_dev = max_dev.max(d);
                    worst = Some(witness());
                }
            }
            None => {
                if !before.same_class(&after) {
                    mismatches += 1;
                    if first_mismatch.is_none() {
                        first_mismatch = Some(witness());
                    }
                }
            }
        }
    }

    let witness = if first_mismatch.is_some() {
        first_mismatch
    } else if max_dev > tol {
        worst
    } else {
        None
    };
    Ok(InvarianceReport {
        samples: n_samples,
        max_deviation: max_dev,
        infinity_mismatches: mismatches,
        witness,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationReport {
    pub samples: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// First sampled input whose deviation exceeds the tolerance.
    pub witness: Option<ComplexMatrix>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// `max ‖φ(A) − c(U, A)‖_F` over seeded densities of mixed rank, where `c` is
/// the conjugation of the given kind.
pub fn verify_conjugation(
    map: &StateMap,
    u: &ComplexMatrix,
    kind: SymmetryKind,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ConjugationReport> {
    let defect = u.unitarity_defect();
    if defect > tol.max(MAP_TOL) {
        return Err(Error::NotUnitary { defect });
    }
    let n = map.dim();
    if u.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: u.dim(),
        });
    }
    let mut rng = SeededRng::new(seed);
    let mut max_dev = 0.0_f64;
    let mut witness = None;
    for i in 0..n_samples {
        let r = mixed_rank(n, i, &mut rng);
        let a: DensityOperator = random_density(n, r, &mut rng)?;
        let image = map.apply_matrix(a.matrix())?;
        let d = (&image - &conjugate(kind, u, a.matrix())).frobenius_norm();
        max_dev = max_dev.max(d);
        if d > tol && witness.is_none() {
            witness = Some(a.matrix().clone());
        }
    }
    Ok(ConjugationReport {
        samples: n_samples,
        max_deviation: max_dev,
        tolerance: tol,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::ComplexMatrix;
    use crate::sampling::haar_unitary;
    use num_complex::Complex64;

    #[test]
    fn identity_map_has_zero_deviation() {
        let report = check_invariance(
            &StateMap::identity(3),
            &Divergence::Sandwiched { alpha: 2.0 },
            30,
            1,
            1e-12,
        )
        .unwrap();
        assert_eq!(report.max_deviation, 0.0);
        assert_eq!(report.infinity_mismatches, 0);
        assert!(report.passed());
    }

    #[test]
    fn haar_conjugation_preserves_sandwiched() {
        let mut rng = SeededRng::new(10);
        let map = StateMap::unitary(haar_unitary(3, &mut rng)).unwrap();
        let report =
            check_invariance(&map, &Divergence::Sandwiched { alpha: 0.5 }, 60, 3, 1e-9).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.max_deviation < 1e-9);
    }

    #[test]
    fn depolarizing_is_caught() {
        let map = StateMap::depolarizing(2, 0.5).unwrap();
        let report =
            check_invariance(&map, &Divergence::Sandwiched { alpha: 2.0 }, 60, 7, 1e-8).unwrap();
        assert!(!report.passed());
        assert!(report.max_deviation > 1e-3 || report.infinity_mismatches > 0);
    }

    #[test]
    fn global_phase_is_invisible() {
        let mut rng = SeededRng::new(12);
        let u = haar_unitary(3, &mut rng);
        let map = StateMap::unitary(u.clone()).unwrap();
        let phased = u.scale_complex(Complex64::from_polar(1.0, 0.7));
        let r = verify_conjugation(&map, &phased, SymmetryKind::Unitary, 20, 1, 1e-10).unwrap();
        assert!(r.passed());
        assert!(r.max_deviation < 1e-10);
        let other = haar_unitary(3, &mut rng);
        let r = verify_conjugation(&map, &other, SymmetryKind::Unitary, 20, 1, 1e-10).unwrap();
        assert!(!r.passed());
        assert!(r.max_deviation > 0.1);
    }

    #[test]
    fn verify_rejects_non_unitary() {
        let map = StateMap::identity(2);
        let m = ComplexMatrix::from_diag(&[1.0, 0.5]);
        assert!(matches!(
            verify_conjugation(&map, &m, SymmetryKind::Unitary, 5, 1, 1e-10),
            Err(Error::NotUnitary { .. })
        ));
    }
}
