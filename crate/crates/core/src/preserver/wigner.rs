//! Recovering the (anti)unitary behind a map from the images of a few rank-one projections.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrixcore::{basis_vector, hs_inner, rank_one, ComplexMatrix};
use crate::operators::rank_one_vector;

use super::map::{conjugate, StateMap, SymmetryKind};

/// Tolerance on preserved transition probabilities.
pub const TRANSITION_TOL: f64 = 1e-8;

/// Projections (or their images) in the order used for reconstruction:
/// `e_i e_i*` for `i = 1..n`, then `(e_1 + e_j)(e_1 + e_j)*/2` for `j = 2..n`,
/// then the phase probe `(e_1 + i e_2)(e_1 + i e_2)*/2` when `n ≥ 2`.
#[derive(Debug, Clone)]
pub struct WignerImages {
    pub basis: Vec<ComplexMatrix>,
    pub superpositions: Vec<ComplexMatrix>,
    pub phase_probe: Option<ComplexMatrix>,
}

impl WignerImages {
    /// The input projections themselves.
    pub fn inputs(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let e = |k| basis_vector(n, k);
        let proj = |v: &[Complex64]| rank_one(v, v);
        let basis = (0..n).map(|k| proj(&e(k))).collect::<Result<Vec<_>>>()?;
        let superpositions = (1..n)
            .map(|j| {
                let v: Vec<Complex64> = e(0)
                    .iter()
                    .zip(e(j))
                    .map(|(a, b)| (a + b) * FRAC_1_SQRT_2)
                    .collect();
                proj(&v)
            })
            .collect::<Result<Vec<_>>>()?;
        let phase_probe = if n >= 2 {
            let i = Complex64::i();
            let v: Vec<Complex64> = e(0)
                .iter()
                .zip(e(1))
                .map(|(a, b)| (a + i * b) * FRAC_1_SQRT_2)
                .collect();
            Some(proj(&v)?)
        } else {
            None
        };
        Ok(Self {
            basis,
            superpositions,
            phase_probe,
        })
    }

    /// Images of [`WignerImages::inputs`] under `map`.
    pub fn from_map(map: &StateMap) -> Result<Self> {
        let inputs = Self::inputs(map.dim())?;
        inputs.map_all(|p| map.apply_matrix(p))
    }

    /// Applies `f` to every projection.
    pub fn map_all<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&ComplexMatrix) -> Result<ComplexMatrix>,
    {
        Ok(Self {
            basis: self.basis.iter().map(&mut f).collect::<Result<_>>()?,
            superpositions: self
                .superpositions
                .iter()
                .map(&mut f)
                .collect::<Result<_>>()?,
            phase_probe: self.phase_probe.as_ref().map(&mut f).transpose()?,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// All projections in index order.
    pub fn all(&self) -> Vec<&ComplexMatrix> {
        self.basis
            .iter()
            .chain(&self.superpositions)
            .chain(self.phase_probe.as_ref())
            .collect()
    }

    /// Rebuilds the structure from a flat list in index order.
    pub fn from_list(list: Vec<ComplexMatrix>) -> Result<Self> {
        let total = list.len();
        // n + (n − 1) + 1 = 2n for n ≥ 2, and 1 for n = 1
        let n = if total == 1 { 1 } else { total / 2 };
        if total != Self::count(n) {
            return Err(Error::InvalidParameter(format!(
                "{total} projections do not form a reconstruction set"
            )));
        }
        let mut it = list.into_iter();
        let basis: Vec<_> = it.by_ref().take(n).collect();
        let superpositions: Vec<_> = it.by_ref().take(n - 1).collect();
        let phase_probe = it.next();
        Ok(Self {
            basis,
            superpositions,
            phase_probe,
        })
    }

    /// Number of projections used in dimension `n`.
    pub fn count(n: usize) -> usize {
        if n <= 1 {
            n
        } else {
            2 * n
        }
    }

    /// Human-readable name of the projection at `index` (1-based basis labels).
    pub fn label(n: usize, index: usize) -> String {
        if index < n {
            format!("basis[{}]", index + 1)
        } else if index < 2 * n - 1 {
            format!("superposition[1,{}]", index - n + 2)
        } else {
            "phase-probe".to_string()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WignerResult {
    pub u: ComplexMatrix,
    pub kind: SymmetryKind,
    /// Largest Frobenius defect over the supplied projections.
    pub residual: f64,
}

/// Reconstructs `U` and its kind with `φ(P) = U P U*` (or `U conj(P) U*`) on
/// the supplied projections.
///
/// The images must be rank-one projections with the transition probabilities
/// `tr PQ` of the inputs preserved within [`TRANSITION_TOL`].
pub fn wigner_reconstruct(images: &WignerImages) -> Result<WignerResult> {
    let n = images.dim();
    let inputs = WignerImages::inputs(n)?;
    let input_list = inputs.all();
    let image_list = images.all();
    if image_list.len() != input_list.len() {
        return Err(Error::InvalidParameter(format!(
            "expected {} projections in dimension {n}, found {}",
            input_list.len(),
            image_list.len()
        )));
    }

    let mut vectors = Vec::with_capacity(image_list.len());
    for (index, p) in image_list.iter().enumerate() {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.dim(),
            });
        }
        let v = rank_one_vector(p).map_err(|_| Error::NotRankOneProjection { index })?;
        if ((*p - &rank_one(&v, &v)?).frobenius_norm()) > TRANSITION_TOL {
            return Err(Error::NotRankOneProjection { index });
        }
        vectors.push(v);
    }

    for i in 0..input_list.len() {
        for j in i + 1..input_list.len() {
            let expected = hs_inner(input_list[i], input_list[j])?.re;
            let found = hs_inner(image_list[i], image_list[j])?.re;
            if (expected - found).abs() > TRANSITION_TOL {
                return Err(Error::TransitionProbability {
                    first: i,
                    second: j,
                    expected,
                    found,
                });
            }
        }
    }

    // Columns: u_1, then u_j rephased so that (u_1 + u_j)/√2 spans the j-th superposition image.
    let mut columns = vec![vectors[0].clone()];
    for j in 1..n {
        let uj = &vectors[j];
        let s = &images.superpositions[j - 1];
        // u_j* S u_1 = |λ|² c / 2 when S = |λ|²(u_1 + c u_j)(u_1 + c u_j)*/2
        let z: Complex64 = uj
            .iter()
            .zip(s.mul_vec(&vectors[0]))
            .map(|(a, b)| a.conj() * b)
            .sum();
        let c = z / z.norm();
        columns.push(uj.iter().map(|x| x * c).collect());
    }
    let mut u = ComplexMatrix::from_columns(&columns)?;

    let kind = match &images.phase_probe {
        None => SymmetryKind::Unitary,
        Some(image) => {
            let probe = inputs.phase_probe.as_ref().expect("n >= 2");
            let du = (image - &conjugate(SymmetryKind::Unitary, &u, probe)).frobenius_norm();
            let da = (image - &conjugate(SymmetryKind::Antiunitary, &u, probe)).frobenius_norm();
            if da < du {
                SymmetryKind::Antiunitary
            } else {
                SymmetryKind::Unitary
            }
        }
    };

    fix_global_phase(&mut u);

    let residual = input_list
        .iter()
        .zip(&image_list)
        .map(|(p, q)| (*q - &conjugate(kind, &u, p)).frobenius_norm())
        .fold(0.0, f64::max);
    Ok(WignerResult { u, kind, residual })
}

/// Makes the first entry of the first column with modulus above `1e-10` real and positive.
pub fn fix_global_phase(u: &mut ComplexMatrix) {
    let n = u.dim();
    let Some(z) = (0..n).map(|i| u[(i, 0)]).find(|z| z.norm() > 1e-10) else {
        return;
    };
    let phase = z.conj() / z.norm();
    *u = u.scale_complex(phase);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_unitary, random_antiunitary, SeededRng};

    #[test]
    fn identity_images_give_identity() {
        for n in 1..5 {
            let images = WignerImages::from_map(&StateMap::identity(n)).unwrap();
            let r = wigner_reconstruct(&images).unwrap();
            assert_eq!(r.kind, SymmetryKind::Unitary);
            assert!(r.residual < 1e-10);
            assert!((&r.u - &ComplexMatrix::identity(n)).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn recovers_haar_conjugation_up_to_phase() {
        let mut rng = SeededRng::new(21);
        let u0 = haar_unitary(3, &mut rng);
        let map = StateMap::unitary(u0.clone()).unwrap();
        let r = wigner_reconstruct(&WignerImages::from_map(&map).unwrap()).unwrap();
        assert_eq!(r.kind, SymmetryKind::Unitary);
        let mut expected = u0;
        fix_global_phase(&mut expected);
        assert!((&r.u - &expected).frobenius_norm() < 1e-9);
        let z = r.u[(0, 0)];
        assert!(z.im.abs() < 1e-15 && z.re > 0.0);
    }

    #[test]
    fn transpose_is_antiunitary() {
        let images = WignerImages::inputs(3)
            .unwrap()
            .map_all(|p| Ok(p.transpose()))
            .unwrap();
        let r = wigner_reconstruct(&images).unwrap();
        assert_eq!(r.kind, SymmetryKind::Antiunitary);
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn antiunitary_round_trip() {
        let mut rng = SeededRng::new(22);
        let map = random_antiunitary(4, &mut rng);
        let r = wigner_reconstruct(&WignerImages::from_map(&map).unwrap()).unwrap();
        assert_eq!(r.kind, SymmetryKind::Antiunitary);
        assert!(r.residual < 1e-9);
    }

    #[test]
    fn tampered_image_names_the_pair() {
        let mut images = WignerImages::from_map(&StateMap::identity(3)).unwrap();
        images.superpositions[0] = images.basis[2].clone();
        match wigner_reconstruct(&images) {
            Err(Error::TransitionProbability { first, second, .. }) => {
                assert!(first < second);
                assert!(first == 3 || second == 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_projection_is_rejected() {
        let mut images = WignerImages::from_map(&StateMap::identity(2)).unwrap();
        images.basis[1] = ComplexMatrix::identity(2);
        assert!(matches!(
            wigner_reconstruct(&images),
            Err(Error::NotRankOneProjection { index: 1 })
        ));
    }

    #[test]
    fn labels_and_flat_round_trip() {
        assert_eq!(WignerImages::label(3, 0), "basis[1]");
        assert_eq!(WignerImages::label(3, 3), "superposition[1,2]");
        assert_eq!(WignerImages::label(3, 5), "phase-probe");
        let images = WignerImages::inputs(3).unwrap();
        let flat: Vec<ComplexMatrix> = images.all().into_iter().cloned().collect();
        assert_eq!(flat.len(), WignerImages::count(3));
        let back = WignerImages::from_list(flat).unwrap();
        assert_eq!(back.superpositions.len(), 2);
        assert!(back.phase_probe.is_some());
    }
}
