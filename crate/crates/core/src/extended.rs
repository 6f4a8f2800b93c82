//! Real numbers extended by `+∞`, with `0 · ∞ = 0`.

use std::fmt;
use std::ops::Add;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite real or `+∞`. `−∞` and NaN are not representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInfinity,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::InvalidParameter(
                "NaN is not an extended real".into(),
            ))
        } else if x == f64::NEG_INFINITY {
            Err(Error::NegativeInfinity)
        } else if x == f64::INFINITY {
            Ok(ExtendedReal::PosInfinity)
        } else {
            Ok(ExtendedReal::Finite(x))
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::PosInfinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::PosInfinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInfinity => f64::INFINITY,
        }
    }

    /// Product with the convention `0 · ∞ = 0`. Fails when the result would be `−∞`.
    pub fn mul(self, rhs: ExtendedReal) -> Result<ExtendedReal> {
        use ExtendedReal::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            (Finite(a), PosInfinity) | (PosInfinity, Finite(a)) => {
                if a == 0.0 {
                    Ok(Finite(0.0))
                } else if a > 0.0 {
                    Ok(PosInfinity)
                } else {
                    Err(Error::NegativeInfinity)
                }
            }
            (PosInfinity, PosInfinity) => Ok(PosInfinity),
        }
    }

    /// Absolute difference of two finite values; `None` when either is infinite.
    pub fn abs_diff(&self, other: &ExtendedReal) -> Option<f64> {
        Some((self.finite()? - other.finite()?).abs())
    }

    /// Same infinity classification.
    pub fn same_class(&self, other: &ExtendedReal) -> bool {
        self.is_infinite() == other.is_infinite()
    }

    /// `"inf"` or the value with `digits` digits after the decimal point.
    /// Values that round to zero print without a sign.
    pub fn format_fixed(&self, digits: usize) -> String {
        match *self {
            ExtendedReal::Finite(x) => {
                let s = format!("{x:.digits$}");
                match s.strip_prefix('-') {
                    Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
                    _ => s,
                }
            }
            ExtendedReal::PosInfinity => "inf".to_string(),
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;

    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        match (self, rhs) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a + b),
            _ => ExtendedReal::PosInfinity,
        }
    }
}

impl std::iter::Sum for ExtendedReal {
    fn sum<I: Iterator<Item = ExtendedReal>>(iter: I) -> Self {
        iter.fold(ExtendedReal::ZERO, |a, b| a + b)
    }
}

impl From<ExtendedReal> for f64 {
    fn from(x: ExtendedReal) -> f64 {
        x.to_f64()
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInfinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(ExtendedReal::PosInfinity);
        }
        let x: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not an extended real: `{s}`")))?;
        ExtendedReal::new(x)
    }
}

// Finite values serialize as JSON numbers, `+∞` as the string "inf".
impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ExtendedReal::Finite(x) => serializer.serialize_f64(x),
            ExtendedReal::PosInfinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor;

        impl Visitor<'_> for ExtVisitor {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<ExtendedReal, E> {
                ExtendedReal::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<ExtendedReal, E> {
                Ok(ExtendedReal::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<ExtendedReal, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ExtVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedReal::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        assert_eq!(Finite(0.0).mul(PosInfinity).unwrap(), Finite(0.0));
        assert_eq!(PosInfinity.mul(Finite(0.0)).unwrap(), Finite(0.0));
        assert_eq!(PosInfinity.mul(Finite(2.0)).unwrap(), PosInfinity);
        assert!(matches!(
            PosInfinity.mul(Finite(-1.0)),
            Err(Error::NegativeInfinity)
        ));
    }

    #[test]
    fn addition_absorbs_infinity() {
        assert_eq!(Finite(1.0) + Finite(2.5), Finite(3.5));
        assert_eq!(Finite(1.0) + PosInfinity, PosInfinity);
        let s: ExtendedReal = [Finite(1.0), Finite(-2.0), PosInfinity].into_iter().sum();
        assert_eq!(s, PosInfinity);
    }

    #[test]
    fn construction_rejects_nan_and_negative_infinity() {
        assert!(ExtendedReal::new(f64::NAN).is_err());
        assert!(matches!(
            ExtendedReal::new(f64::NEG_INFINITY),
            Err(Error::NegativeInfinity)
        ));
        assert_eq!(ExtendedReal::new(f64::INFINITY).unwrap(), PosInfinity);
    }

    #[test]
    fn json_spelling() {
        assert_eq!(serde_json::to_string(&PosInfinity).unwrap(), "\"inf\"");
        let back: ExtendedReal = serde_json::from_str("\"inf\"").unwrap();
        assert_eq!(back, PosInfinity);
        let back: ExtendedReal = serde_json::from_str("0.25").unwrap();
        assert_eq!(back, Finite(0.25));
        assert_eq!(PosInfinity.format_fixed(12), "inf");
        assert_eq!(Finite(0.0).format_fixed(12), "0.000000000000");
        assert_eq!(Finite(-1e-16).format_fixed(12), "0.000000000000");
        assert_eq!(Finite(-0.5).format_fixed(3), "-0.500");
    }
}
