//! Numerical certificates for the trace identities, order characterization,
//! functional equation and scalar criteria that the preserver arguments rely on.

use serde::Serialize;

use crate::divergence::{check_alpha, d_fg};
use crate::error::{Error, Result};
use crate::function::{Limit, ScalarFunctionSpec};
use crate::matrixcore::{polar_unitary, psd_decomposition, rank_one, ComplexMatrix, TAU_SPEC};
use crate::operators::PositiveOperator;
use crate::sampling::SeededRng;

fn trace_h(x: &ComplexMatrix, h: &ScalarFunctionSpec) -> Result<f64> {
    let spec = psd_decomposition(&x.hermitian_part())?;
    let mut total = 0.0;
    for c in spec.clusters() {
        total += h.eval(c.eigenvalue.max(0.0))? * c.multiplicity as f64;
    }
    Ok(total)
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSimilarity {
    /// `tr h(BAB)`
    pub lhs: f64,
    /// `tr h(√A B² √A)`
    pub rhs: f64,
    pub deviation: f64,
    /// `‖W (BAB) W* − √A B² √A‖_F` for the polar factor `√A B = W |√A B|`.
    pub polar_residual: f64,
}

/// Compares `tr h(BAB)` with `tr h(√A B² √A)`.
pub fn trace_similarity_check(
    a: &PositiveOperator,
    b: &PositiveOperator,
    h: &ScalarFunctionSpec,
) -> Result<TraceSimilarity> {
    a.matrix().check_same_dim(b.matrix())?;
    let bm = b.matrix();
    let sqrt_a = a.spectrum().map(|l| l.max(0.0).sqrt());
    let bab = &(bm * a.matrix()) * bm;
    let x = &sqrt_a * bm;
    let other = &x * &x.adjoint();
    let lhs = trace_h(&bab, h)?;
    let rhs = trace_h(&other, h)?;
    let (w, _) = polar_unitary(&x)?;
    let polar_residual = (&bab.conjugate_by(&w) - &other).frobenius_norm();
    Ok(TraceSimilarity {
        lhs,
        rhs,
        deviation: (lhs - rhs).abs(),
        polar_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OrderVerdict {
    /// `B² ≤ C²` and no probe violated the trace inequality.
    Consistent,
    /// A positive definite `A` with `tr h(BAB) > tr h(CAC)`.
    Counterexample {
        a: ComplexMatrix,
        lhs: f64,
        rhs: f64,
    },
    /// `B² ≰ C²` but the search found no violation.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrderDominance {
    /// Spectral decision `B² ≤ C²`.
    pub spectral_le: bool,
    /// Smallest eigenvalue of `C² − B²`.
    pub min_gap_eigenvalue: f64,
    pub verdict: OrderVerdict,
    /// Largest `tr h(BAB) − tr h(CAC)` seen over the probes.
    pub max_excess: f64,
    pub probes: usize,
}

impl OrderDominance {
    /// The verdict agrees with the spectral comparison.
    pub fn agrees(&self) -> bool {
        match self.verdict {
            OrderVerdict::Consistent => self.spectral_le,
            OrderVerdict::Counterexample { .. } => !self.spectral_le,
            OrderVerdict::Inconclusive => !self.spectral_le,
        }
    }
}

/// Probe shift for the rank-one probes `x x* + δI`.
pub const PROBE_DELTA: f64 = 1e-6;

/// Decides `B² ≤ C²` spectrally, then searches `A = x x* + δI` for a violation of
/// `tr h(BAB) ≤ tr h(CAC)`.
///
/// The first probe uses the eigenvector of the smallest eigenvalue of `C² − B²`;
/// the rest use seeded random unit vectors.
pub fn order_dominance_test(
    b: &PositiveOperator,
    c: &PositiveOperator,
    h: &ScalarFunctionSpec,
    n_samples: usize,
    seed: u64,
) -> Result<OrderDominance> {
    b.matrix().check_same_dim(c.matrix())?;
    if !h.flags().strictly_increasing {
        return Err(Error::Hypothesis(format!(
            "h = {} must be strictly increasing",
            h.name()
        )));
    }
    if h.value_at_zero() != Some(0.0) {
        return Err(Error::Hypothesis(format!(
            "h = {} must satisfy h(0) = 0",
            h.name()
        )));
    }
    let n = b.dim();
    let bm = b.matrix();
    let cm = c.matrix();
    let gap = (&(cm * cm) - &(bm * bm)).hermitian_part();
    let gap_spec = crate::matrixcore::cluster_spectrum(&gap, TAU_SPEC)?;
    let min_gap_eigenvalue = gap_spec.min_eigenvalue();
    let scale = gap_spec
        .spectral_norm()
        .max((bm * bm).frobenius_norm())
        .max(1.0);
    let spectral_le = min_gap_eigenvalue >= -1e-10 * scale;

    let mut rng = SeededRng::new(seed);
    let mut max_excess = f64::NEG_INFINITY;
    let mut counterexample = None;
    let lowest = gap_spec.clusters()[0].vectors[0].clone();
    for k in 0..n_samples.max(1) {
        let x = if k == 0 {
            lowest.clone()
        } else {
            rng.unit_vector(n)
        };
        let a = rank_one(&x, &x)?.add_scaled_identity(PROBE_DELTA);
        let lhs = trace_h(&(&(bm * &a) * bm), h)?;
        let rhs = trace_h(&(&(cm * &a) * cm), h)?;
        let excess = lhs - rhs;
        max_excess = max_excess.max(excess);
        if counterexample.is_none() && excess > 1e-10 * lhs.abs().max(rhs.abs()).max(1.0) {
            counterexample = Some(OrderVerdict::Counterexample { a, lhs, rhs });
        }
    }
    let verdict = match counterexample {
        Some(v) => v,
        None if spectral_le => OrderVerdict::Consistent,
        None => OrderVerdict::Inconclusive,
    };
    Ok(OrderDominance {
        spectral_le,
        min_gap_eigenvalue,
        verdict,
        max_excess,
        probes: n_samples.max(1),
    })
}

/// `max |Σ_k b_k f(a_k / b_k)|` over seeded pairs of positive probability vectors of length `n`.
pub fn functional_eq_residual(
    f: &ScalarFunctionSpec,
    n: usize,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "length {n} must be at least 2"
        )));
    }
    let mut rng = SeededRng::new(seed);
    let mut worst = 0.0_f64;
    for _ in 0..n_samples {
        let a = rng.simplex(n);
        let b = rng.simplex(n);
        let mut s = 0.0;
        for (ak, bk) in a.iter().zip(&b) {
            s += bk * f.eval(ak / bk)?;
        }
        worst = worst.max(s.abs());
    }
    Ok(worst)
}

/// `((t^{1−α} + s^{1−α})/2, ((t^{(1−α)/α} + s^{(1−α)/α})/2)^α)`.
pub fn prop1_sides(alpha: f64, t: f64, s: f64) -> (f64, f64) {
    let lhs = 0.5 * (t.powf(1.0 - alpha) + s.powf(1.0 - alpha));
    let q = (1.0 - alpha) / alpha;
    let rhs = (0.5 * (t.powf(q) + s.powf(q))).powf(alpha);
    (lhs, rhs)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Prop1Witness {
    pub alpha: f64,
    pub t: f64,
    pub s: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

impl Prop1Witness {
    pub fn at(alpha: f64, t: f64, s: f64) -> Self {
        let (lhs, rhs) = prop1_sides(alpha, t, s);
        Self {
            alpha,
            t,
            s,
            lhs,
            rhs,
            gap: (lhs - rhs).abs(),
        }
    }
}

pub const PROP1_GRID: usize = 64;
pub const PROP1_LOWER: f64 = 1e-3;
pub const PROP1_UPPER: f64 = 0.5;

/// Log-spaced grid of [`PROP1_GRID`] points in `[1e-3, 0.5]`.
pub fn prop1_grid() -> Vec<f64> {
    let (lo, hi) = (PROP1_LOWER.ln(), PROP1_UPPER.ln());
    (0..PROP1_GRID)
        .map(|k| {
            if k + 1 == PROP1_GRID {
                PROP1_UPPER
            } else {
                (lo + (hi - lo) * k as f64 / (PROP1_GRID - 1) as f64).exp()
            }
        })
        .collect()
}

/// The grid pair with the largest `|lhs − rhs|`; ties keep the first in row-major order.
pub fn prop1_refutation(alpha: f64) -> Result<Prop1Witness> {
    check_alpha(alpha)?;
    let grid = prop1_grid();
    let mut best = Prop1Witness::at(alpha, grid[0], grid[0]);
    for &t in &grid {
        for &s in &grid {
            let w = Prop1Witness::at(alpha, t, s);
            if w.gap > best.gap {
                best = w;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Thm4Verdict {
    ScalarMultipleOfIdentity,
    Violation { gap: f64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct Thm4Report {
    pub verdict: Thm4Verdict,
    /// `mean(x y)`
    pub mean_product: f64,
    /// `mean(x) mean(y)`
    pub product_of_means: f64,
    pub gap: f64,
    /// All eigenvalues equal within the clustering tolerance.
    pub spectral_scalar: bool,
}

/// With `x_k = t_k^{−2α}` and `y_k = t_k^{2α/(1−α)}` over the eigenvalues of `T`,
/// decides whether `mean(xy) = mean(x) mean(y)`, which holds exactly when `T` is scalar.
pub fn thm4_scalar_test(t: &PositiveOperator, alpha: f64) -> Result<Thm4Report> {
    check_alpha(alpha)?;
    if !t.is_definite() {
        return Err(Error::SingularOperator);
    }
    let mut eig = Vec::with_capacity(t.dim());
    for c in t.spectrum().clusters() {
        eig.extend(std::iter::repeat_n(c.eigenvalue, c.multiplicity));
    }
    let m = eig.len() as f64;
    let px = -2.0 * alpha;
    let py = 2.0 * alpha / (1.0 - alpha);
    let x: Vec<f64> = eig.iter().map(|l| l.powf(px)).collect();
    let y: Vec<f64> = eig.iter().map(|l| l.powf(py)).collect();
    let mean_product = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / m;
    let product_of_means = (x.iter().sum::<f64>() / m) * (y.iter().sum::<f64>() / m);
    let gap = mean_product - product_of_means;
    let scale = mean_product.abs().max(product_of_means.abs());
    let verdict = if gap.abs() <= 1e-10 * scale {
        Thm4Verdict::ScalarMultipleOfIdentity
    } else {
        Thm4Verdict::Violation { gap }
    };
    Ok(Thm4Report {
        verdict,
        mean_product,
        product_of_means,
        gap,
        spectral_scalar: t.spectrum().clusters().len() == 1,
    })
}

/// `D'_{f,g}(A‖B) ≤ 1e-10`, which for admissible `f, g` is equivalent to `AB = 0`.
pub fn orthogonality_indicator(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
    g: &ScalarFunctionSpec,
) -> Result<bool> {
    if f.limit_at_zero() != Some(Limit::Finite(0.0)) {
        return Err(Error::Hypothesis(format!(
            "f = {} must tend to 0 at 0+",
            f.name()
        )));
    }
    if !g.is_injective() {
        return Err(Error::Hypothesis(format!(
            "g = {} must be injective",
            g.name()
        )));
    }
    if g.value_at_zero() != Some(0.0) {
        return Err(Error::Hypothesis(format!(
            "g = {} must satisfy g(0) = 0",
            g.name()
        )));
    }
    let v = d_fg(a, b, f, g)?;
    Ok(v.finite().is_some_and(|x| x <= 1e-10))
}
