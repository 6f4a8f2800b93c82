//! The sandwiched Rényi divergence and its trace core.

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::operators::PositiveOperator;

use super::{check_alpha, congruence_trace, mapped_norm};

/// `tr (B^p A B^p)^α` with `p = (1 − α)/2α`, the `B`-powers taken on `supp B`.
///
/// For `α > 1` the value is `+∞` unless `supp A ⊆ supp B`.
pub fn sandwiched_core(
    a: &PositiveOperator,
    b: &PositiveOperator,
    alpha: f64,
) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    a.matrix().check_same_dim(b.matrix())?;
    if alpha > 1.0 && !a.support_within(b)? {
        return Ok(ExtendedReal::PosInfinity);
    }
    if a.support_orthogonal(b)? {
        return Ok(ExtendedReal::ZERO);
    }
    let p = (1.0 - alpha) / (2.0 * alpha);
    let power = |x: f64| if x > 0.0 { x.powf(p) } else { 0.0 };
    let bp = b.on_support(power);
    let tr = congruence_trace(
        &bp,
        mapped_norm(b, power),
        a.matrix(),
        a.spectrum().spectral_norm(),
        |t| t.powf(alpha),
    )?;
    Ok(ExtendedReal::Finite(tr))
}

/// Sandwiched Rényi divergence `(α − 1)⁻¹ log((tr A)⁻¹ tr (B^p A B^p)^α)`.
///
/// `+∞` when the supports are orthogonal (`α < 1`) or when `supp A ⊄ supp B` (`α > 1`).
pub fn sandwiched_renyi(
    a: &PositiveOperator,
    b: &PositiveOperator,
    alpha: f64,
) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    a.matrix().check_same_dim(b.matrix())?;
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let infinite = if alpha < 1.0 {
        a.support_orthogonal(b)?
    } else {
        !a.support_within(b)?
    };
    if infinite {
        return Ok(ExtendedReal::PosInfinity);
    }
    match sandwiched_core(a, b, alpha)? {
        ExtendedReal::Finite(core) => Ok(ExtendedReal::Finite(
            (core / a.trace()).ln() / (alpha - 1.0),
        )),
        ExtendedReal::PosInfinity => Ok(ExtendedReal::PosInfinity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrixcore::{rank_one, ComplexMatrix};
    use num_complex::Complex64;

    fn pos(d: &[f64]) -> PositiveOperator {
        PositiveOperator::from_diag(d).unwrap()
    }

    #[test]
    fn self_core_is_one() {
        let a = pos(&[0.1, 0.2, 0.7]);
        for alpha in [0.3, 0.5, 2.0, 3.0] {
            let v = sandwiched_core(&a, &a, alpha).unwrap().finite().unwrap();
            assert!((v - 1.0).abs() < 1e-13, "alpha {alpha}: {v}");
            let d = sandwiched_renyi(&a, &a, alpha).unwrap().finite().unwrap();
            assert!(d.abs() < 1e-13);
        }
    }

    #[test]
    fn commuting_reduction() {
        let (x, y): ([f64; 3], [f64; 3]) = ([0.1, 0.2, 0.7], [0.5, 0.25, 0.25]);
        for alpha in [0.5, 2.0] {
            let expected: f64 = x
                .iter()
                .zip(y)
                .map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha))
                .sum();
            let v = sandwiched_core(&pos(&x), &pos(&y), alpha)
                .unwrap()
                .finite()
                .unwrap();
            assert!((v - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn support_violation_is_infinite() {
        let a = pos(&[0.5, 0.5]);
        let b = pos(&[1.0, 0.0]);
        assert_eq!(
            sandwiched_core(&a, &b, 2.0).unwrap(),
            ExtendedReal::PosInfinity
        );
        assert_eq!(
            sandwiched_renyi(&a, &b, 2.0).unwrap(),
            ExtendedReal::PosInfinity
        );
        // α < 1 stays finite on overlapping supports
        let v = sandwiched_renyi(&a, &b, 0.5).unwrap();
        assert!(v.is_finite());
    }

    #[test]
    fn orthogonal_pure_states() {
        let x = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let y = [Complex64::new(0.8, 0.0), Complex64::new(0.0, -0.6)];
        let a = PositiveOperator::new(rank_one(&x, &x).unwrap()).unwrap();
        let b = PositiveOperator::new(rank_one(&y, &y).unwrap()).unwrap();
        assert_eq!(
            sandwiched_renyi(&a, &b, 0.5).unwrap(),
            ExtendedReal::PosInfinity
        );
        assert_eq!(sandwiched_core(&a, &b, 0.5).unwrap(), ExtendedReal::ZERO);
    }

    #[test]
    fn scale_invariance() {
        let a = PositiveOperator::new(
            ComplexMatrix::from_rows(&[
                vec![Complex64::new(0.6, 0.0), Complex64::new(0.1, 0.2)],
                vec![Complex64::new(0.1, -0.2), Complex64::new(0.4, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let b = pos(&[0.3, 0.7]);
        for alpha in [0.5, 2.0, 3.0] {
            let d1 = sandwiched_renyi(&a, &b, alpha).unwrap().finite().unwrap();
            let d2 = sandwiched_renyi(&a.scaled(3.7).unwrap(), &b.scaled(3.7).unwrap(), alpha)
                .unwrap()
                .finite()
                .unwrap();
            assert!((d1 - d2).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_zero_and_bad_alpha() {
        let z = PositiveOperator::new(ComplexMatrix::zeros(2)).unwrap();
        let b = pos(&[0.3, 0.7]);
        assert!(matches!(
            sandwiched_renyi(&z, &b, 2.0),
            Err(Error::ZeroOperator)
        ));
        assert!(sandwiched_core(&b, &b, 1.0).is_err());
        assert!(sandwiched_core(&b, &b, 0.0).is_err());
    }
}
