//! Deterministic, seeded samplers: Ginibre matrices, Haar unitaries, random
//! density and positive definite operators.
//!
//! The stream is SplitMix64; uniforms take the top 53 bits of each word and
//! Gaussians use the Box–Muller transform, so a seed pins every sample on
//! every platform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::matrixcore::{qr_decompose, ComplexMatrix};
use crate::operators::{DensityOperator, PositiveOperator};
use crate::preserver::StateMap;

/// Environment variable consulted for the seed when none is given on the command line.
pub const SEED_ENV: &str = "QDIV_SEED";

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: SplitMix64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open_zero(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Standard complex Gaussian (`E|z|² = 1`) by Box–Muller.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u1 = self.uniform_open_zero();
        let u2 = self.uniform();
        let r = (-u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin())
    }

    /// Real standard normal (the real part of a Box–Muller pair, rescaled).
    pub fn gaussian(&mut self) -> f64 {
        self.complex_gaussian().re * std::f64::consts::SQRT_2
    }

    /// Exponential(1).
    pub fn exponential(&mut self) -> f64 {
        -self.uniform_open_zero().ln()
    }

    /// Uniform point on the open probability simplex with `k` coordinates.
    pub fn simplex(&mut self, k: usize) -> Vec<f64> {
        let e: Vec<f64> = (0..k).map(|_| self.exponential()).collect();
        let total: f64 = e.iter().sum();
        e.into_iter().map(|x| x / total).collect()
    }

    /// Uniform unit vector in `C^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..n).map(|_| self.complex_gaussian()).collect();
        let norm = crate::matrixcore::vec_norm(&v);
        v.into_iter().map(|z| z / norm).collect()
    }
}

/// `n x n` matrix of i.i.d. standard complex Gaussians, filled row by row.
pub fn ginibre(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let data = (0..n * n).map(|_| rng.complex_gaussian()).collect();
    ComplexMatrix::from_row_major(n, data).expect("n >= 1")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `R`'s diagonal divided out.
pub fn haar_unitary(n: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let (q, r) = qr_decompose(&ginibre(n, rng));
    let phases: Vec<Complex64> = (0..n)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    &q * &ComplexMatrix::from_complex_diag(&phases)
}

/// `U diag(p_1, …, p_r, 0, …) U*` with `p` uniform on the simplex and `U` Haar.
pub fn random_density(n: usize, rank: usize, rng: &mut SeededRng) -> Result<DensityOperator> {
    if rank == 0 || rank > n {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} outside 1..={n}"
        )));
    }
    let mut diag = rng.simplex(rank);
    diag.resize(n, 0.0);
    let u = haar_unitary(n, rng);
    DensityOperator::new(
        ComplexMatrix::from_diag(&diag)
            .conjugate_by(&u)
            .hermitian_part(),
    )
}

/// `U diag(λ) U*` with `λ` log-uniform in `[κ^{-1/2}, κ^{1/2}]`.
pub fn random_positive_definite(
    n: usize,
    kappa: f64,
    rng: &mut SeededRng,
) -> Result<PositiveOperator> {
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "condition cap {kappa} must be a finite number >= 1"
        )));
    }
    let half = 0.5 * kappa.ln();
    let diag: Vec<f64> = (0..n)
        .map(|_| rng.uniform_range(-half, half).exp())
        .collect();
    let u = haar_unitary(n, rng);
    PositiveOperator::new(
        ComplexMatrix::from_diag(&diag)
            .conjugate_by(&u)
            .hermitian_part(),
    )
}

/// Antiunitary conjugation `A ↦ U conj(A) U*` with a fresh Haar unitary part.
pub fn random_antiunitary(n: usize, rng: &mut SeededRng) -> StateMap {
    StateMap::AntiunitaryConjugation(haar_unitary(n, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_stream() {
        // Reference values of SplitMix64 seeded with 0.
        let mut rng = SeededRng::new(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn ginibre_one_by_one() {
        let mut rng = SeededRng::new(3);
        let g = ginibre(1, &mut rng);
        assert_eq!(g.dim(), 1);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = SeededRng::new(11);
        for n in 1..6 {
            let u = haar_unitary(n, &mut rng);
            assert!(u.unitarity_defect() <= 1e-12);
        }
    }

    #[test]
    fn density_rank_and_trace() {
        let mut rng = SeededRng::new(5);
        for n in 2..5 {
            for r in 1..=n {
                let d = random_density(n, r, &mut rng).unwrap();
                assert_eq!(d.rank(), r);
                assert!((d.trace() - 1.0).abs() <= 1e-12);
                if r == n {
                    assert!(d.is_definite());
                }
            }
        }
        assert!(random_density(2, 3, &mut rng).is_err());
        assert!(random_density(2, 0, &mut rng).is_err());
    }

    #[test]
    fn positive_definite_conditioning() {
        let mut rng = SeededRng::new(8);
        let p = random_positive_definite(3, 1.0, &mut rng).unwrap();
        let spec = p.spectrum();
        assert_eq!(spec.clusters().len(), 1);
        for _ in 0..20 {
            let p = random_positive_definite(4, 50.0, &mut rng).unwrap();
            let spec = p.spectrum();
            assert!(spec.min_eigenvalue() > 0.0);
            assert!(spec.max_eigenvalue() / spec.min_eigenvalue() <= 50.0 * (1.0 + 1e-10));
        }
        assert!(random_positive_definite(2, 0.5, &mut rng).is_err());
    }
}
