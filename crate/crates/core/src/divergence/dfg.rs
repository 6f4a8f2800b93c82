//! The generalized quantity `D'_{f,g}(A‖B) = tr g(f(B) A f(B))` and its
//! extension to singular `B` through the limit `B + εI`, `ε ↘ 0`.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::function::{Limit, ScalarFunctionSpec};
use crate::matrixcore::{compress_with_basis, ComplexMatrix};
use crate::operators::PositiveOperator;

use super::congruence_trace;

/// Which closed form applies to a singular second argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularCase {
    /// `f(ε) → 0`: compress to `supp B`.
    Vanishing,
    /// `f(ε) → ∞`: compress to `supp B` when `supp A ⊆ supp B`, otherwise `+∞`.
    Blowup,
}

/// Checks the hypotheses on `f, g` and classifies the singular case.
pub fn classify(f: &ScalarFunctionSpec, g: &ScalarFunctionSpec) -> Result<SingularCase> {
    if g.value_at_zero() != Some(0.0) {
        return Err(Error::Hypothesis(format!(
            "g = {} must satisfy g(0) = 0",
            g.name()
        )));
    }
    match f.limit_at_zero() {
        None => Err(Error::Undeclared {
            function: f.name().to_string(),
            what: "limit at 0+".into(),
        }),
        Some(Limit::Finite(0.0)) => Ok(SingularCase::Vanishing),
        Some(Limit::Finite(v)) => Err(Error::Hypothesis(format!(
            "f = {} has limit {v} at 0+, expected 0 or +inf",
            f.name()
        ))),
        Some(Limit::PosInfinity) => {
            if !g.flags().strictly_increasing || g.limit_at_infinity() != Some(Limit::PosInfinity) {
                return Err(Error::Hypothesis(format!(
                    "f = {} blows up at 0+, so g = {} must be strictly increasing with limit +inf",
                    f.name(),
                    g.name()
                )));
            }
            Ok(SingularCase::Blowup)
        }
    }
}

/// `f(B)` from the clustered spectrum of `B` shifted by `shift`, with its spectral norm.
fn apply_shifted(
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
    shift: f64,
) -> Result<(ComplexMatrix, f64)> {
    let mut err = None;
    let mut norm = 0.0_f64;
    let m = b.spectrum().map(|l| match f.eval(l + shift) {
        Ok(v) => {
            norm = norm.max(v.abs());
            v
        }
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok((m, norm)),
    }
}

/// `tr g(F A F)`.
fn g_trace(
    fm: &ComplexMatrix,
    f_norm: f64,
    a: &ComplexMatrix,
    a_norm: f64,
    g: &ScalarFunctionSpec,
) -> Result<f64> {
    let mut err = None;
    let v = congruence_trace(fm, f_norm, a, a_norm, |t| match g.eval(t) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            0.0
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `tr g(f(B₀) A₀ f(B₀))` with `A₀, B₀` the compressions to `supp B`.
fn compressed_value(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
    g: &ScalarFunctionSpec,
) -> Result<f64> {
    let basis = b.support_basis();
    if basis.is_empty() {
        return Ok(0.0);
    }
    let b0 = PositiveOperator::new(compress_with_basis(b.matrix(), &basis)?)?;
    let a0 = compress_with_basis(a.matrix(), &basis)?;
    let (fb0, norm) = apply_shifted(&b0, f, 0.0)?;
    g_trace(&fb0, norm, &a0, a.spectrum().spectral_norm(), g)
}

/// `D'_{f,g}(A‖B)`.
pub fn d_fg(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
    g: &ScalarFunctionSpec,
) -> Result<ExtendedReal> {
    a.matrix().check_same_dim(b.matrix())?;
    if b.is_definite() {
        if g.value_at_zero() != Some(0.0) {
            return Err(Error::Hypothesis(format!(
                "g = {} must satisfy g(0) = 0",
                g.name()
            )));
        }
        let (fb, norm) = apply_shifted(b, f, 0.0)?;
        let v = g_trace(&fb, norm, a.matrix(), a.spectrum().spectral_norm(), g)?;
        return Ok(ExtendedReal::Finite(v));
    }
    match classify(f, g)? {
        SingularCase::Vanishing => Ok(ExtendedReal::Finite(compressed_value(a, b, f, g)?)),
        SingularCase::Blowup => {
            if a.support_within(b)? {
                Ok(ExtendedReal::Finite(compressed_value(a, b, f, g)?))
            } else {
                Ok(ExtendedReal::PosInfinity)
            }
        }
    }
}

/// The pair `f(t) = t^{(1−α)/2α}`, `g(t) = t^α` for which `D'_{f,g}` is the sandwiched trace core.
pub fn sandwiched_pair(alpha: f64) -> Result<(ScalarFunctionSpec, ScalarFunctionSpec)> {
    super::check_alpha(alpha)?;
    Ok((
        ScalarFunctionSpec::power((1.0 - alpha) / (2.0 * alpha))?,
        ScalarFunctionSpec::power(alpha)?,
    ))
}

pub const DEFAULT_PROBE_CAP: f64 = 1e12;

/// `ε = 10^{-1}, 10^{-2}, …, 10^{-24}`.
pub fn default_schedule() -> Vec<f64> {
    (1..=24).map(|k| 10f64.powi(-k)).collect()
}

/// Values of `tr g(f(B + εI) A f(B + εI))` along a schedule.
#[derive(Debug, Clone)]
pub struct LimitProbe {
    pub epsilons: Vec<f64>,
    pub values: Vec<f64>,
    /// Last value, or `+∞` when the tail exceeded the cap while increasing.
    pub estimate: ExtendedReal,
    pub diverged: bool,
}

/// Evaluates the regularized quantity along a decreasing schedule of `ε`.
///
/// `f(B + εI)` is formed from the clustered spectrum of `B`, so the kernel of
/// `B` contributes `f(ε)` exactly.
pub fn d_fg_limit_probe(
    a: &PositiveOperator,
    b: &PositiveOperator,
    f: &ScalarFunctionSpec,
    g: &ScalarFunctionSpec,
    schedule: &[f64],
    cap: f64,
) -> Result<LimitProbe> {
    a.matrix().check_same_dim(b.matrix())?;
    if b.is_definite() {
        if g.value_at_zero() != Some(0.0) {
            return Err(Error::Hypothesis(format!(
                "g = {} must satisfy g(0) = 0",
                g.name()
            )));
        }
    } else {
        classify(f, g)?;
    }
    if schedule.is_empty()
        || schedule.iter().any(|&e| !(e > 0.0))
        || schedule.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::InvalidParameter(
            "schedule must be a non-empty strictly decreasing list of positive numbers".into(),
        ));
    }

    let mut values = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        let (fb, _) = apply_shifted(b, f, eps)?;
        // the factor norm grows without bound in the blow-up case, so noise is
        // judged against the product alone
        let v = g_trace(&fb, 0.0, a.matrix(), 0.0, g).unwrap_or(f64::INFINITY);
        let v = if v.is_finite() { v } else { f64::INFINITY };
        values.push(v);
    }

    let tail = &values[values.len().saturating_sub(3)..];
    let increasing = tail.windows(2).all(|w| w[1] >= w[0]);
    let last = *values.last().expect("non-empty schedule");
    let diverged = last > cap && increasing;
    let estimate = if diverged || !last.is_finite() {
        ExtendedReal::PosInfinity
    } else {
        ExtendedReal::Finite(last)
    };
    Ok(LimitProbe {
        epsilons: schedule.to_vec(),
        values,
        estimate,
        diverged,
    })
}
