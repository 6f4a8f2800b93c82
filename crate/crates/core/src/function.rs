//! Scalar functions with declared domain and limit behaviour.
//!
//! The divergences need more than a callable: the value at zero, the slope
//! `γ = lim f(t)/t` at infinity, the limit at `0⁺` and monotonicity or
//! convexity flags decide which branch of a formula applies. These facts are
//! declared up front and spot-checked on a grid when the spec is built.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;

/// Where the callable may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `[0, ∞)`
    NonNegative,
    /// `(0, ∞)`
    Positive,
}

/// A one-sided limit that is either finite or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    PosInfinity,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FunctionFlags {
    pub strictly_increasing: bool,
    pub strictly_decreasing: bool,
    pub strictly_convex: bool,
    pub strictly_concave: bool,
    pub injective: bool,
}

type Callable = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A real function on `[0, ∞)` or `(0, ∞)` together with its declared behaviour.
#[derive(Clone)]
pub struct ScalarFunctionSpec {
    name: String,
    evaluate: Callable,
    domain: Domain,
    value_at_zero: Option<f64>,
    gamma: Option<ExtendedReal>,
    limit_at_zero: Option<Limit>,
    limit_at_infinity: Option<Limit>,
    flags: FunctionFlags,
}

impl fmt::Debug for ScalarFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunctionSpec")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("value_at_zero", &self.value_at_zero)
            .field("gamma", &self.gamma)
            .field("limit_at_zero", &self.limit_at_zero)
            .field("limit_at_infinity", &self.limit_at_infinity)
            .field("flags", &self.flags)
            .finish()
    }
}

/// Builder for [`ScalarFunctionSpec`]; `build` validates the declared flags.
pub struct ScalarFunctionBuilder {
    spec: ScalarFunctionSpec,
}

impl ScalarFunctionBuilder {
    pub fn domain(mut self, domain: Domain) -> Self {
        self.spec.domain = domain;
        self
    }

    pub fn value_at_zero(mut self, v: f64) -> Self {
        self.spec.value_at_zero = Some(v);
        self
    }

    /// `γ = lim_{t→∞} f(t)/t`. Negative infinity is rejected in `build`.
    pub fn gamma(mut self, gamma: f64) -> Self {
        self.spec.gamma = Some(match ExtendedReal::new(gamma) {
            Ok(g) => g,
            Err(_) => ExtendedReal::Finite(f64::NAN),
        });
        self
    }

    pub fn limit_at_zero(mut self, limit: Limit) -> Self {
        self.spec.limit_at_zero = Some(limit);
        self
    }

    pub fn limit_at_infinity(mut self, limit: Limit) -> Self {
        self.spec.limit_at_infinity = Some(limit);
        self
    }

    pub fn flags(mut self, flags: FunctionFlags) -> Self {
        self.spec.flags = flags;
        self
    }

    pub fn build(self) -> Result<ScalarFunctionSpec> {
        let spec = self.spec;
        if let Some(ExtendedReal::Finite(g)) = spec.gamma {
            if g.is_nan() {
                return Err(Error::NegativeInfinity);
            }
        }
        spec.check_flags()?;
        Ok(spec)
    }
}

/// 100 log-spaced points in `[1e-3, 1e3]`.
fn flag_grid() -> Vec<f64> {
    (0..100)
        .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 99.0))
        .collect()
}

impl ScalarFunctionSpec {
    pub fn builder<F>(name: impl Into<String>, f: F) -> ScalarFunctionBuilder
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        ScalarFunctionBuilder {
            spec: ScalarFunctionSpec {
                name: name.into(),
                evaluate: Arc::new(f),
                domain: Domain::NonNegative,
                value_at_zero: None,
                gamma: None,
                limit_at_zero: None,
                limit_at_infinity: None,
                flags: FunctionFlags::default(),
            },
        }
    }

    /// `t ↦ t^p` with `0^p = 0` for `p > 0` and `0^0 = 1`.
    pub fn power(p: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::InvalidParameter(format!("power exponent {p}")));
        }
        let name = format!("power({p})");
        let b = Self::builder(name, move |t: f64| {
            if t == 0.0 {
                if p > 0.0 {
                    0.0
                } else if p == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                t.powf(p)
            }
        });
        let b = if p > 0.0 {
            let flags = FunctionFlags {
                strictly_increasing: true,
                strictly_convex: p > 1.0,
                strictly_concave: p < 1.0,
                injective: true,
                ..Default::default()
            };
            b.value_at_zero(0.0)
                .limit_at_zero(Limit::Finite(0.0))
                .limit_at_infinity(Limit::PosInfinity)
                .gamma(if p < 1.0 {
                    0.0
                } else if p == 1.0 {
                    1.0
                } else {
                    f64::INFINITY
                })
                .flags(flags)
        } else if p == 0.0 {
            b.value_at_zero(1.0)
                .limit_at_zero(Limit::Finite(1.0))
                .limit_at_infinity(Limit::Finite(1.0))
                .gamma(0.0)
        } else {
            let flags = FunctionFlags {
                strictly_decreasing: true,
                strictly_convex: true,
                injective: true,
                ..Default::default()
            };
            b.domain(Domain::Positive)
                .limit_at_zero(Limit::PosInfinity)
                .limit_at_infinity(Limit::Finite(0.0))
                .gamma(0.0)
                .flags(flags)
        };
        b.build()
    }

    /// `t ↦ t log t` with value 0 at 0.
    pub fn xlogx() -> Self {
        Self::builder("xlogx", |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() })
            .value_at_zero(0.0)
            .limit_at_zero(Limit::Finite(0.0))
            .limit_at_infinity(Limit::PosInfinity)
            .gamma(f64::INFINITY)
            .flags(FunctionFlags {
                strictly_convex: true,
                ..Default::default()
            })
            .build()
            .expect("xlogx flags are valid")
    }

    /// `t ↦ c (t − 1)`.
    pub fn linear(c: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::InvalidParameter(format!("linear coefficient {c}")));
        }
        let flags = FunctionFlags {
            strictly_increasing: c > 0.0,
            strictly_decreasing: c < 0.0,
            injective: c != 0.0,
            ..Default::default()
        };
        let at_inf = if c > 0.0 {
            Some(Limit::PosInfinity)
        } else if c == 0.0 {
            Some(Limit::Finite(0.0))
        } else {
            None
        };
        let mut b = Self::builder(format!("linear({c})"), move |t: f64| c * (t - 1.0))
            .value_at_zero(-c)
            .limit_at_zero(Limit::Finite(-c))
            .gamma(c)
            .flags(flags);
        if let Some(l) = at_inf {
            b = b.limit_at_infinity(l);
        }
        b.build()
    }

    /// `t ↦ t / (1 + t)`.
    pub fn saturating() -> Self {
        Self::builder("frac", |t: f64| t / (1.0 + t))
            .value_at_zero(0.0)
            .limit_at_zero(Limit::Finite(0.0))
            .limit_at_infinity(Limit::Finite(1.0))
            .gamma(0.0)
            .flags(FunctionFlags {
                strictly_increasing: true,
                strictly_concave: true,
                injective: true,
                ..Default::default()
            })
            .build()
            .expect("t/(1+t) flags are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn value_at_zero(&self) -> Option<f64> {
        self.value_at_zero
    }

    pub fn gamma(&self) -> Option<ExtendedReal> {
        self.gamma
    }

    pub fn limit_at_zero(&self) -> Option<Limit> {
        self.limit_at_zero
    }

    pub fn limit_at_infinity(&self) -> Option<Limit> {
        self.limit_at_infinity
    }

    pub fn flags(&self) -> FunctionFlags {
        self.flags
    }

    /// Strictly monotone functions are injective even if not flagged so.
    pub fn is_injective(&self) -> bool {
        self.flags.injective || self.flags.strictly_increasing || self.flags.strictly_decreasing
    }

    /// Evaluates without domain checks.
    pub fn eval_unchecked(&self, t: f64) -> f64 {
        (self.evaluate)(t)
    }

    /// Evaluates at `t`, honouring the declared domain and value at zero.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let outside = || Error::OutsideDomain {
            function: self.name.clone(),
            point: t,
        };
        if t.is_nan() || t < 0.0 {
            return Err(outside());
        }
        if t == 0.0 {
            return match (self.domain, self.value_at_zero) {
                (_, Some(v)) => Ok(v),
                (Domain::Positive, None) => Err(outside()),
                (Domain::NonNegative, None) => self.finite((self.evaluate)(0.0), t),
            };
        }
        self.finite((self.evaluate)(t), t)
    }

    fn finite(&self, v: f64, t: f64) -> Result<f64> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::OutsideDomain {
                function: self.name.clone(),
                point: t,
            })
        }
    }

    fn check_flags(&self) -> Result<()> {
        let grid = flag_grid();
        let values: Vec<f64> = grid.iter().map(|&t| (self.evaluate)(t)).collect();
        let violation = |property: &str| Error::FlagViolation {
            function: self.name.clone(),
            property: property.to_string(),
        };
        let f = &self.flags;
        if f.strictly_increasing && f.strictly_decreasing {
            return Err(violation("strictly_increasing and strictly_decreasing"));
        }
        if f.strictly_convex && f.strictly_concave {
            return Err(violation("strictly_convex and strictly_concave"));
        }
        if f.strictly_increasing && values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(violation("strictly_increasing"));
        }
        if f.strictly_decreasing && values.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(violation("strictly_decreasing"));
        }
        if f.strictly_convex || f.strictly_concave {
            for (i, j) in (0..grid.len() - 2).map(|i| (i, i + 2)) {
                let mid = (self.evaluate)(0.5 * (grid[i] + grid[j]));
                let chord = 0.5 * (values[i] + values[j]);
                let slack = 1e-12 * (mid.abs() + chord.abs()).max(1e-300);
                if f.strictly_convex && mid > chord + slack {
                    return Err(violation("strictly_convex"));
                }
                if f.strictly_concave && mid < chord - slack {
                    return Err(violation("strictly_concave"));
                }
            }
        }
        if f.injective {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(violation("injective"));
            }
        }
        Ok(())
    }
}
