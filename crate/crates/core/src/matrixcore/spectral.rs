//! Clustered spectral decompositions and the functional calculus built on them.

use num_complex::Complex64;

use super::eigen::{eig_hermitian, HermitianEigen};
use super::matrix::{basis_vector, inner, rank_one, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::function::{Domain, ScalarFunctionSpec};

/// Default relative gap below which neighbouring eigenvalues are merged.
pub const TAU_SPEC: f64 = 1e-10;
/// Eigenvalues at or below this fraction of the largest one are treated as zero.
pub const TAU_SUPP: f64 = 1e-12;
/// Eigenvalues down to `-TAU_PSD · ‖A‖₂` are accepted as rounding noise.
pub const TAU_PSD: f64 = 1e-10;

/// One distinct eigenvalue and the orthogonal projection onto its eigenspace.
#[derive(Debug, Clone)]
pub struct SpectralCluster {
    pub eigenvalue: f64,
    pub projection: ComplexMatrix,
    pub multiplicity: usize,
    /// Orthonormal eigenvectors spanning the eigenspace.
    pub vectors: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    dim: usize,
    clusters: Vec<SpectralCluster>,
}

impl SpectralDecomposition {
    fn from_eigen(eigen: &HermitianEigen, tau_spec: f64) -> Self {
        let n = eigen.eigenvalues.len();
        let spectral_norm = eigen
            .eigenvalues
            .iter()
            .fold(0.0_f64, |m, &l| m.max(l.abs()));
        let gap = tau_spec * spectral_norm.max(1.0);

        let mut groups: Vec<Vec<usize>> = Vec::new();
        for k in 0..n {
            match groups.last_mut() {
                Some(g) if eigen.eigenvalues[k] - eigen.eigenvalues[*g.last().unwrap()] <= gap => {
                    g.push(k)
                }
                _ => groups.push(vec![k]),
            }
        }

        let clusters = groups
            .into_iter()
            .map(|g| {
                let eigenvalue =
                    g.iter().map(|&k| eigen.eigenvalues[k]).sum::<f64>() / g.len() as f64;
                let vectors: Vec<Vec<Complex64>> =
                    g.iter().map(|&k| eigen.eigenvectors.column(k)).collect();
                SpectralCluster {
                    eigenvalue,
                    projection: projection_from_vectors(n, &vectors),
                    multiplicity: g.len(),
                    vectors,
                }
            })
            .collect();
        SpectralDecomposition { dim: n, clusters }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn clusters(&self) -> &[SpectralCluster] {
        &self.clusters
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.clusters.iter().map(|c| c.eigenvalue)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.clusters.last().map_or(0.0, |c| c.eigenvalue)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.clusters.first().map_or(0.0, |c| c.eigenvalue)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().fold(0.0_f64, |m, l| m.max(l.abs()))
    }

    /// `Σ φ(λ) P_λ` for an arbitrary scalar map.
    pub fn map<F>(&self, mut phi: F) -> ComplexMatrix
    where
        F: FnMut(f64) -> f64,
    {
        let mut out = ComplexMatrix::zeros(self.dim);
        for c in &self.clusters {
            let v = phi(c.eigenvalue);
            if v != 0.0 {
                out = &out + &c.projection.scale(v);
            }
        }
        out
    }

    /// `Σ λ P_λ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    /// Replaces eigenvalues `<= tol` by exact zeros and merges the resulting zero clusters.
    pub(crate) fn snap_zero(mut self, tol: f64) -> Self {
        let mut zero: Option<SpectralCluster> = None;
        let mut rest = Vec::with_capacity(self.clusters.len());
        for c in self.clusters.drain(..) {
            if c.eigenvalue <= tol {
                zero = Some(match zero {
                    None => SpectralCluster {
                        eigenvalue: 0.0,
                        ..c
                    },
                    Some(mut z) => {
                        z.projection = &z.projection + &c.projection;
                        z.multiplicity += c.multiplicity;
                        z.vectors.extend(c.vectors);
                        z
                    }
                });
            } else {
                rest.push(c);
            }
        }
        if let Some(z) = zero {
            let pos = rest
                .iter()
                .position(|c| c.eigenvalue > 0.0)
                .unwrap_or(rest.len());
            rest.insert(pos, z);
        }
        self.clusters = rest;
        self
    }
}

fn projection_from_vectors(n: usize, vectors: &[Vec<Complex64>]) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(n);
    for v in vectors {
        p = &p + &rank_one(v, v).expect("eigenvectors share the dimension");
    }
    p
}

/// Eigendecomposition with eigenvalues within `tau_spec · max(1, ‖A‖₂)` of each other merged.
pub fn cluster_spectrum(a: &ComplexMatrix, tau_spec: f64) -> Result<SpectralDecomposition> {
    let eigen = eig_hermitian(a)?;
    Ok(SpectralDecomposition::from_eigen(&eigen, tau_spec))
}

/// `φ(A) = Σ φ(λ) P_λ` using the clustered spectrum of `A`.
///
/// When `φ` lives on the non-negative half-line, eigenvalues in
/// `[-TAU_PSD · ‖A‖₂, TAU_SUPP · ‖A‖₂]` are read as zero.
pub fn apply_spectral_fn(a: &ComplexMatrix, phi: &ScalarFunctionSpec) -> Result<ComplexMatrix> {
    let spec = cluster_spectrum(a, TAU_SPEC)?;
    apply_to_decomposition(&spec, phi)
}

pub fn apply_to_decomposition(
    spec: &SpectralDecomposition,
    phi: &ScalarFunctionSpec,
) -> Result<ComplexMatrix> {
    let noise = TAU_PSD * spec.spectral_norm();
    let tiny = TAU_SUPP * spec.spectral_norm();
    let mut values = Vec::with_capacity(spec.clusters.len());
    for c in &spec.clusters {
        let mut l = c.eigenvalue;
        if phi.domain() == Domain::NonNegative && l >= -noise && l <= tiny {
            l = 0.0;
        }
        if phi.domain() == Domain::Positive && l <= 0.0 {
            return Err(Error::OutsideDomain {
                function: phi.name().to_string(),
                point: c.eigenvalue,
            });
        }
        values.push(phi.eval(l)?);
    }
    let mut values = values.into_iter();
    Ok(spec.map(|_| values.next().expect("one value per cluster")))
}

/// Checks positive semidefiniteness and returns the decomposition with
/// sub-threshold eigenvalues (relative `TAU_SUPP`) set to exactly zero.
pub fn psd_decomposition(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let spec = cluster_spectrum(a, TAU_SPEC)?;
    let norm = spec.spectral_norm();
    let min = spec.min_eigenvalue();
    if min < -TAU_PSD * norm {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    let cutoff = TAU_SUPP * spec.max_eigenvalue().max(0.0);
    Ok(spec.snap_zero(cutoff))
}

/// Projection onto the support of `A` (eigenvalues above `TAU_SUPP · λ_max`) and its rank.
pub fn support_projection(a: &ComplexMatrix) -> Result<(ComplexMatrix, usize)> {
    let spec = psd_decomposition(a)?;
    Ok(support_of(&spec))
}

pub(crate) fn support_of(spec: &SpectralDecomposition) -> (ComplexMatrix, usize) {
    let mut p = ComplexMatrix::zeros(spec.dim());
    let mut rank = 0;
    for c in spec.clusters() {
        if c.eigenvalue > 0.0 {
            p = &p + &c.projection;
            rank += c.multiplicity;
        }
    }
    (p, rank)
}

/// Projection tolerance used when validating inputs.
pub const TAU_PROJ: f64 = 1e-8;

/// `‖P² − P‖_F` together with the Hermitian defect.
pub fn projection_defect(p: &ComplexMatrix) -> f64 {
    let idem = (&(p * p) - p).frobenius_norm();
    let herm = (p - &p.adjoint()).frobenius_norm();
    idem.max(herm)
}

/// Orthonormal basis of the range of a projection.
pub fn range_basis(p: &ComplexMatrix) -> Result<Vec<Vec<Complex64>>> {
    let defect = projection_defect(p);
    if defect > TAU_PROJ {
        return Err(Error::NotProjection { defect });
    }
    let eigen = eig_hermitian(&p.hermitian_part())?;
    Ok(eigen
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.5)
        .map(|(k, _)| eigen.eigenvectors.column(k))
        .collect())
}

/// `V* A V` for an orthonormal family `V` (given as columns).
pub fn compress_with_basis(a: &ComplexMatrix, basis: &[Vec<Complex64>]) -> Result<ComplexMatrix> {
    let r = basis.len();
    if r == 0 {
        return Err(Error::InvalidParameter("empty subspace".into()));
    }
    let av: Vec<Vec<Complex64>> = basis.iter().map(|v| a.mul_vec(v)).collect();
    let mut out = ComplexMatrix::zeros(r);
    for i in 0..r {
        for j in 0..r {
            out[(i, j)] = inner(&av[j], &basis[i]);
        }
    }
    Ok(out)
}

/// Compression of `A` to the range of the projection `P`, as a `rank(P)`-dimensional matrix.
pub fn compress_to_support(a: &ComplexMatrix, p: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same_dim(p)?;
    let basis = range_basis(p)?;
    compress_with_basis(a, &basis)
}

/// Polar decomposition `X = U H` with `H = (X*X)^{1/2}` and `U` unitary.
///
/// For singular `X` the partial isometry is completed on the kernel by
/// Gram–Schmidt over the standard basis.
pub fn polar_unitary(x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = x.dim();
    let gram = (&x.adjoint() * x).hermitian_part();
    let eigen = eig_hermitian(&gram)?;
    let sigma: Vec<f64> = eigen
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    let sigma_max = sigma.iter().fold(0.0_f64, |m, &s| m.max(s));
    let cutoff = 1e-12 * sigma_max;

    let h = {
        let d = ComplexMatrix::from_diag(&sigma);
        (&eigen.eigenvectors * &d) * eigen.eigenvectors.adjoint()
    };

    let mut left: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut right: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut kernel: Vec<Vec<Complex64>> = Vec::new();
    // Largest singular values first so the image vectors are the best conditioned.
    for k in (0..n).rev() {
        let w = eigen.eigenvectors.column(k);
        if sigma[k] > cutoff && sigma_max > 0.0 {
            let u: Vec<Complex64> = x.mul_vec(&w).iter().map(|z| z / sigma[k]).collect();
            left.push(u);
            right.push(w);
        } else {
            kernel.push(w);
        }
    }
    kernel.reverse();
    let completion = orthonormal_completion(&left, n, kernel.len());
    for (w, u) in kernel.into_iter().zip(completion) {
        right.push(w);
        left.push(u);
    }

    let mut u = ComplexMatrix::zeros(n);
    for (l, r) in left.iter().zip(&right) {
        u = &u + &rank_one(l, r)?;
    }
    Ok((u, h))
}

/// Extends an orthonormal family by `count` vectors using Gram–Schmidt over `e_1, …, e_n`.
fn orthonormal_completion(
    family: &[Vec<Complex64>],
    n: usize,
    count: usize,
) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = family.to_vec();
    let mut added = Vec::with_capacity(count);
    for k in 0..n {
        if added.len() == count {
            break;
        }
        let mut v = basis_vector(n, k);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for b in &basis {
                let c = inner(&v, b);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm > 1e-6 {
            let v: Vec<Complex64> = v.iter().map(|z| z / norm).collect();
            basis.push(v.clone());
            added.push(v);
        }
    }
    added
}
