//! Quantum f-divergences, the Umegaki relative entropy and the traditional Rényi relative entropy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::function::ScalarFunctionSpec;
use crate::matrixcore::{hs_inner, psd_decomposition, superop_lr, ComplexMatrix};
use crate::operators::{DensityOperator, PositiveOperator};

use super::{check_alpha, overlap};

/// `S_f(A‖B) = Σ_a Σ_{b≠0} b f(a/b) tr P_a Q_b + γ Σ_a a tr P_a Q_0`, with `0·∞ = 0`.
///
/// The `γ = +∞` branch is decided by the support ranks of `A` and `B`.
pub fn f_divergence(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
) -> Result<ExtendedReal> {
    a.matrix().check_same_dim(b.matrix())?;
    let gamma = f.gamma().ok_or_else(|| Error::Undeclared {
        function: f.name().to_string(),
        what: "gamma".into(),
    })?;

    let mut total = 0.0;
    for pa in a.spectrum().clusters() {
        for qb in b.spectrum().clusters() {
            if qb.eigenvalue == 0.0 {
                continue;
            }
            let tr = overlap(pa, qb);
            let ratio = pa.eigenvalue / qb.eigenvalue;
            match f.eval(ratio) {
                Ok(v) => total += qb.eigenvalue * v * tr,
                // an undefined value only matters when it carries weight
                Err(e) if tr > OVERLAP_TOL => return Err(e),
                Err(_) => {}
            }
        }
    }

    if b.is_definite() {
        return Ok(ExtendedReal::Finite(total));
    }
    match gamma {
        ExtendedReal::PosInfinity => {
            if a.support_within(b)? {
                Ok(ExtendedReal::Finite(total))
            } else {
                Ok(ExtendedReal::PosInfinity)
            }
        }
        ExtendedReal::Finite(g) => {
            // γ tr(A Q_0)
            let kernel = &ComplexMatrix::identity(b.dim()) - b.support();
            let weight = hs_inner(a.matrix(), &kernel)?.re.max(0.0);
            Ok(ExtendedReal::Finite(total + g * weight))
        }
    }
}

/// Overlaps below this are treated as structural zeros when `f` is undefined at the ratio.
pub const OVERLAP_TOL: f64 = 1e-10;

/// `⟨√B, f(L_A R_{B⁻¹}) √B⟩_HS` evaluated on the `n² x n²` superoperator matrix.
pub fn f_divergence_superop(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
) -> Result<f64> {
    a.matrix().check_same_dim(b.matrix())?;
    if !b.is_definite() {
        return Err(Error::SingularOperator);
    }
    let b_inv = b.on_support(|x| 1.0 / x);
    let sqrt_b = b.on_support(f64::sqrt);
    let modular = superop_lr(a.matrix(), &b_inv)?;
    // Bᵀ⁻¹ ⊗ A is Hermitian and positive since both factors are.
    let spec = psd_decomposition(&modular.matrix().hermitian_part())?;
    let f_modular = crate::matrixcore::apply_to_decomposition(&spec, f)?;
    let v = sqrt_b.vectorize();
    let fv = f_modular.mul_vec(&v);
    let value: Complex64 = fv.iter().zip(&v).map(|(x, y)| x * y.conj()).sum();
    Ok(value.re)
}

/// Umegaki relative entropy `tr A(log A − log B)`, `+∞` unless `supp A ⊆ supp B`.
pub fn umegaki(a: &DensityOperator, b: &DensityOperator) -> Result<ExtendedReal> {
    a.matrix().check_same_dim(b.matrix())?;
    if !a.support_within(b)? {
        return Ok(ExtendedReal::PosInfinity);
    }
    let entropy_term: f64 = a
        .spectrum()
        .clusters()
        .iter()
        .filter(|c| c.eigenvalue > 0.0)
        .map(|c| c.multiplicity as f64 * c.eigenvalue * c.eigenvalue.ln())
        .sum();
    let mut cross = 0.0;
    for qb in b.spectrum().clusters() {
        if qb.eigenvalue > 0.0 {
            cross += qb.eigenvalue.ln() * hs_inner(a.matrix(), &qb.projection)?.re;
        }
    }
    Ok(ExtendedReal::Finite(entropy_term - cross))
}

/// `tr A^α B^{1−α}` with both powers taken on the supports.
pub(crate) fn petz_trace(a: &PositiveOperator, b: &PositiveOperator, alpha: f64) -> Result<f64> {
    let mut total = 0.0;
    for pa in a.spectrum().clusters() {
        if pa.eigenvalue == 0.0 {
            continue;
        }
        for qb in b.spectrum().clusters() {
            if qb.eigenvalue == 0.0 {
                continue;
            }
            let tr = overlap(pa, qb);
            total += pa.eigenvalue.powf(alpha) * qb.eigenvalue.powf(1.0 - alpha) * tr;
        }
    }
    Ok(total)
}

/// Traditional Rényi relative entropy `(α − 1)⁻¹ log tr A^α B^{1−α}`.
///
/// For `α < 1` the value is `+∞` exactly when the supports are orthogonal; for
/// `α > 1` it is `+∞` unless `supp A ⊆ supp B`.
pub fn renyi_traditional(
    a: &DensityOperator,
    b: &DensityOperator,
    alpha: f64,
) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    a.matrix().check_same_dim(b.matrix())?;
    let infinite = if alpha < 1.0 {
        a.support_orthogonal(b)?
    } else {
        !a.support_within(b)?
    };
    if infinite {
        return Ok(ExtendedReal::PosInfinity);
    }
    let tr = petz_trace(a, b, alpha)?;
    Ok(ExtendedReal::Finite(tr.ln() / (alpha - 1.0)))
}
