//! Named scalar function families selectable from the command line.

use crate::error::{Error, Result};
use crate::function::ScalarFunctionSpec;

pub const FAMILIES: &str = "power:<p>, xlogx, linear:<c>, frac";

/// Parses `power:<p>`, `xlogx`, `linear:<c>` or `frac`.
pub fn lookup(spec: &str) -> Result<ScalarFunctionSpec> {
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p.trim())),
        None => (spec.trim(), None),
    };
    let number = |p: Option<&str>| -> Result<f64> {
        let p = p.ok_or_else(|| {
            Error::InvalidParameter(format!("`{name}` needs a parameter, as in {name}:<value>"))
        })?;
        p.parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("`{p}` is not a number")))
    };
    let no_param = |p: Option<&str>| -> Result<()> {
        match p {
            None => Ok(()),
            Some(_) => Err(Error::InvalidParameter(format!(
                "`{name}` takes no parameter"
            ))),
        }
    };
    match name {
        "power" => ScalarFunctionSpec::power(number(param)?),
        "linear" => ScalarFunctionSpec::linear(number(param)?),
        "xlogx" => {
            no_param(param)?;
            Ok(ScalarFunctionSpec::xlogx())
        }
        "frac" => {
            no_param(param)?;
            Ok(ScalarFunctionSpec::saturating())
        }
        _ => Err(Error::InvalidParameter(format!(
            "unknown function `{spec}`; known families: {FAMILIES}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        assert_eq!(lookup("power:2").unwrap().eval(3.0).unwrap(), 9.0);
        assert_eq!(lookup("linear:2").unwrap().eval(3.0).unwrap(), 4.0);
        assert!(lookup("xlogx").is_ok());
        assert!(lookup("frac").is_ok());
        assert!(lookup("power").is_err());
        assert!(lookup("power:x").is_err());
        assert!(lookup("xlogx:1").is_err());
        assert!(lookup("exp").is_err());
    }
}
