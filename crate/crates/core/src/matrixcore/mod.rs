//! Dense complex Hermitian linear algebra: eigendecomposition, spectral
//! clustering, functional calculus, support projections, rank-one builders
//! and superoperator matrices.

pub mod eigen;
pub mod matrix;
pub mod spectral;
pub mod superop;

pub use eigen::{eig_hermitian, eig_hermitian_with, HermitianEigen};
pub use matrix::{basis_vector, hs_inner, inner, qr_decompose, rank_one, vec_norm, ComplexMatrix};
pub use spectral::{
    apply_spectral_fn, apply_to_decomposition, cluster_spectrum, compress_to_support,
    compress_with_basis, polar_unitary, projection_defect, psd_decomposition, range_basis,
    support_projection, SpectralCluster, SpectralDecomposition, TAU_PROJ, TAU_PSD, TAU_SPEC,
    TAU_SUPP,
};
pub use superop::{left_mul, right_mul, superop_lr, Superoperator};
