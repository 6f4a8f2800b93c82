//! Operator files: JSON documents `{dim, role, re, im}` with floats written to
//! 17 significant digits so they re-parse bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::matrixcore::spectral::{projection_defect, TAU_PROJ};
use crate::matrixcore::ComplexMatrix;
use crate::operators::{DensityOperator, PositiveOperator};
use crate::preserver::MAP_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Density,
    Positive,
    Projection,
    Unitary,
}

impl Role {
    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Density => "density",
            Role::Positive => "positive",
            Role::Projection => "projection",
            Role::Unitary => "unitary",
        }
    }

    /// Checks the invariant the role promises.
    pub fn validate(&self, m: &ComplexMatrix) -> Result<()> {
        match self {
            Role::Density => DensityOperator::new(m.clone()).map(|_| ()),
            Role::Positive => PositiveOperator::new(m.clone()).map(|_| ()),
            Role::Projection => {
                let defect = projection_defect(m);
                if defect > TAU_PROJ {
                    Err(Error::NotProjection { defect })
                } else {
                    Ok(())
                }
            }
            Role::Unitary => {
                let defect = m.unitarity_defect();
                if defect > MAP_TOL {
                    Err(Error::NotUnitary { defect })
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    dim: usize,
    #[serde(default)]
    role: Option<Role>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct OperatorFile {
    pub role: Option<Role>,
    pub matrix: ComplexMatrix,
}

impl OperatorFile {
    pub fn new(matrix: ComplexMatrix, role: Option<Role>) -> Self {
        Self { role, matrix }
    }

    /// Parses and validates against the declared role.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawOperator =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = raw.dim;
        if n == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        for (name, rows) in [("re", &raw.re), ("im", &raw.im)] {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::Parse(format!("`{name}` is not a {n}x{n} array")));
            }
        }
        let data = raw
            .re
            .iter()
            .flatten()
            .zip(raw.im.iter().flatten())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let matrix = ComplexMatrix::from_row_major(n, data)?;
        if let Some(role) = raw.role {
            role.validate(&matrix)?;
        }
        Ok(Self {
            role: raw.role,
            matrix,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let n = self.matrix.dim();
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"dim\": {n},");
        if let Some(role) = self.role {
            let _ = writeln!(s, "  \"role\": \"{}\",", role.as_str());
        }
        let part = |s: &mut String, name: &str, f: fn(Complex64) -> f64, last: bool| {
            let _ = writeln!(s, "  \"{name}\": [");
            for i in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|j| format_float(f(self.matrix[(i, j)])))
                    .collect();
                let comma = if i + 1 < n { "," } else { "" };
                let _ = writeln!(s, "    [{}]{comma}", row.join(", "));
            }
            let _ = writeln!(s, "  ]{}", if last { "" } else { "," });
        };
        part(&mut s, "re", |z| z.re, false);
        part(&mut s, "im", |z| z.im, true);
        s.push_str("}\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

/// Decimal with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let m = ComplexMatrix::from_row_major(
            2,
            vec![
                Complex64::new(0.1, 0.0),
                Complex64::new(1.0 / 3.0, -2e-300),
                Complex64::new(1.0 / 3.0, 2e-300),
                Complex64::new(0.9, -0.0),
            ],
        )
        .unwrap();
        let text = OperatorFile::new(m.clone(), None).to_text();
        let back = OperatorFile::parse(&text).unwrap();
        assert_eq!(back.matrix, m);
    }

    #[test]
    fn role_is_enforced() {
        let m = ComplexMatrix::from_diag(&[0.5, 0.6]);
        let text = OperatorFile::new(m, Some(Role::Density)).to_text();
        assert!(matches!(
            OperatorFile::parse(&text),
            Err(Error::NotUnitTrace { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let bad = r#"{"dim": 2, "re": [[1, 0]], "im": [[0, 0], [0, 0]]}"#;
        assert!(matches!(OperatorFile::parse(bad), Err(Error::Parse(_))));
        let bad = r#"{"dim": 1, "re": [[1]], "im": [[0]], "extra": 1}"#;
        assert!(matches!(OperatorFile::parse(bad), Err(Error::Parse(_))));
    }
}
