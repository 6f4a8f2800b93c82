//! Divergences between positive operators with `+∞` handled by support conditions.

mod dfg;
mod fdiv;
mod sandwiched;

pub use dfg::{
    classify, d_fg, d_fg_limit_probe, default_schedule, sandwiched_pair, LimitProbe, SingularCase,
    DEFAULT_PROBE_CAP,
};
pub use fdiv::{f_divergence, f_divergence_superop, renyi_traditional, umegaki, OVERLAP_TOL};
pub use sandwiched::{sandwiched_core, sandwiched_renyi};

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::function::ScalarFunctionSpec;
use crate::matrixcore::{
    cluster_spectrum, inner, ComplexMatrix, SpectralCluster, TAU_SPEC, TAU_SUPP,
};
use crate::operators::PositiveOperator;

/// Accepts `α ∈ (0, 1) ∪ (1, ∞)`.
pub fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha != 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "alpha = {alpha} must lie in (0, 1) or (1, inf)"
        )))
    }
}

/// `tr PQ` for two spectral projections, from their eigenvectors.
///
/// Summing `|⟨v, w⟩|²` keeps the result non-negative and squares the rounding
/// left between nearly orthogonal eigenspaces, which matters once the weight
/// `q^{1−α}` of a small eigenvalue is large.
pub(crate) fn overlap(p: &SpectralCluster, q: &SpectralCluster) -> f64 {
    p.vectors
        .iter()
        .flat_map(|v| q.vectors.iter().map(move |w| inner(v, w).norm_sqr()))
        .sum()
}

/// `tr g(F A F)` for Hermitian `F` and positive `A`, given `‖F‖₂` and `‖A‖₂`.
///
/// The product is positive by construction, so eigenvalues at or below
/// `TAU_SUPP · ‖F‖₂² ‖A‖₂` are rounding noise and are read as zero. Using the
/// scale of the factors rather than of the product keeps a product that is
/// entirely noise (orthogonal supports) at exactly zero.
pub(crate) fn congruence_trace<G: FnMut(f64) -> f64>(
    f: &ComplexMatrix,
    f_norm: f64,
    a: &ComplexMatrix,
    a_norm: f64,
    mut g: G,
) -> Result<f64> {
    let x = (&(f * a) * f).hermitian_part();
    let scale = f_norm * f_norm * a_norm;
    let spec = cluster_spectrum(&x, TAU_SPEC)?;
    let cutoff = TAU_SUPP * scale.max(spec.max_eigenvalue());
    Ok(spec
        .clusters()
        .iter()
        .map(|c| {
            let l = if c.eigenvalue <= cutoff {
                0.0
            } else {
                c.eigenvalue
            };
            g(l) * c.multiplicity as f64
        })
        .sum())
}

/// `max |φ(λ)|` over the spectrum of `b`, the spectral norm of `φ(B)`.
pub(crate) fn mapped_norm<F: FnMut(f64) -> f64>(b: &PositiveOperator, mut phi: F) -> f64 {
    b.spectrum()
        .clusters()
        .iter()
        .map(|c| phi(c.eigenvalue).abs())
        .fold(0.0, f64::max)
}

/// A divergence selected at run time.
#[derive(Debug, Clone)]
pub enum Divergence {
    Umegaki,
    Renyi {
        alpha: f64,
    },
    Sandwiched {
        alpha: f64,
    },
    SandwichedCore {
        alpha: f64,
    },
    FDivergence {
        f: ScalarFunctionSpec,
    },
    Dfg {
        f: ScalarFunctionSpec,
        g: ScalarFunctionSpec,
    },
}

impl Divergence {
    pub fn tag(&self) -> &'static str {
        match self {
            Divergence::Umegaki => "umegaki",
            Divergence::Renyi { .. } => "renyi",
            Divergence::Sandwiched { .. } => "sandwiched",
            Divergence::SandwichedCore { .. } => "sandwiched-core",
            Divergence::FDivergence { .. } => "fdiv",
            Divergence::Dfg { .. } => "dfg",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Divergence::Renyi { alpha }
            | Divergence::Sandwiched { alpha }
            | Divergence::SandwichedCore { alpha } => Some(alpha),
            _ => None,
        }
    }

    /// Evaluates on a pair of positive operators. Umegaki and the traditional
    /// Rényi divergence require unit trace.
    pub fn evaluate(&self, a: &PositiveOperator, b: &PositiveOperator) -> Result<ExtendedReal> {
        use crate::operators::DensityOperator;
        match self {
            Divergence::Umegaki => {
                let a = DensityOperator::new(a.matrix().clone())?;
                let b = DensityOperator::new(b.matrix().clone())?;
                umegaki(&a, &b)
            }
            Divergence::Renyi { alpha } => {
                let a = DensityOperator::new(a.matrix().clone())?;
                let b = DensityOperator::new(b.matrix().clone())?;
                renyi_traditional(&a, &b, *alpha)
            }
            Divergence::Sandwiched { alpha } => sandwiched_renyi(a, b, *alpha),
            Divergence::SandwichedCore { alpha } => sandwiched_core(a, b, *alpha),
            Divergence::FDivergence { f } => f_divergence(a, b, f),
            Divergence::Dfg { f, g } => d_fg(a, b, f, g),
        }
    }
}
