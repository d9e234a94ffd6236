use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{central_difference, characters, dirichlet_l, eta, eta_deriv, xi, zeta, zeta_deriv};
use super::{totient, EvalParams};
use crate::error::{Error, Result};

/// Which base function `f` is being evaluated or iterated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum FunctionId {
    Zeta,
    Eta,
    Xi,
    /// `L(s, χ)` for the `index`-th character (1-based, principal first)
    /// modulo `modulus`.
    DirichletL {
        modulus: u32,
        index: u32,
    },
    /// `f(z) = z e^{−z}`.
    Rosetta,
    /// `f(z) = z²`.
    Quadratic,
}

impl FunctionId {
    pub fn dirichlet(modulus: u32, index: u32) -> Result<Self> {
        let fid = FunctionId::DirichletL { modulus, index };
        fid.validate()?;
        Ok(fid)
    }

    pub fn validate(&self) -> Result<()> {
        if let FunctionId::DirichletL { modulus, index } = *self {
            if modulus == 0 {
                return Err(Error::InvalidFunction("modulus must be positive".into()));
            }
            let count = totient(modulus as u64);
            if index == 0 || index as u64 > count {
                return Err(Error::InvalidFunction(format!(
                    "character index {index} outside 1..={count} for modulus {modulus}"
                )));
            }
        }
        Ok(())
    }

    /// Prefix used when naming critical points of this function.
    pub fn label_prefix(&self) -> &'static str {
        match self {
            FunctionId::Zeta => "z",
            FunctionId::Eta => "e",
            FunctionId::Xi => "x",
            FunctionId::DirichletL { .. } => "l",
            FunctionId::Rosetta => "r",
            FunctionId::Quadratic => "q",
        }
    }
}

/// Functions that tend to `1` as `Re z → +∞` fast enough that they equal
/// `1` to double precision beyond a modest real part.
pub fn has_plateau(fid: FunctionId) -> bool {
    matches!(fid, FunctionId::Zeta | FunctionId::Eta | FunctionId::DirichletL { .. })
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionId::Zeta => f.write_str("zeta"),
            FunctionId::Eta => f.write_str("eta"),
            FunctionId::Xi => f.write_str("xi"),
            FunctionId::DirichletL { modulus, index } => write!(f, "L({modulus},{index})"),
            FunctionId::Rosetta => f.write_str("rosetta"),
            FunctionId::Quadratic => f.write_str("quadratic"),
        }
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    /// Accepts `zeta`, `eta`, `xi`, `rosetta`, `quadratic`, `L(q,k)` and
    /// `l:q:k`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let fid = match lower.as_str() {
            "zeta" => FunctionId::Zeta,
            "eta" => FunctionId::Eta,
            "xi" => FunctionId::Xi,
            "rosetta" => FunctionId::Rosetta,
            "quadratic" => FunctionId::Quadratic,
            other => {
                let inner = other
                    .strip_prefix("l(")
                    .and_then(|r| r.strip_suffix(')'))
                    .map(|r| r.split(',').collect::<Vec<_>>())
                    .or_else(|| other.strip_prefix("l:").map(|r| r.split(':').collect()))
                    .ok_or_else(|| Error::InvalidFunction(s.to_string()))?;
                if inner.len() != 2 {
                    return Err(Error::InvalidFunction(s.to_string()));
                }
                let parse = |t: &str| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidFunction(s.to_string()))
                };
                FunctionId::dirichlet(parse(inner[0])?, parse(inner[1])?)?
            }
        };
        Ok(fid)
    }
}

/// Evaluate the named base function.
pub fn eval_function(fid: FunctionId, z: Complex64, p: &EvalParams) -> Result<Complex64> {
    match fid {
        FunctionId::Zeta => zeta(z, p),
        FunctionId::Eta => eta(z, p),
        FunctionId::Xi => xi(z, p),
        FunctionId::DirichletL { modulus, index } => {
            fid.validate()?;
            let chars = characters(modulus)?;
            dirichlet_l(&chars[index as usize - 1], z, p)
        }
        FunctionId::Rosetta => Ok(z * (-z).exp()),
        FunctionId::Quadratic => Ok(z * z),
    }
}

/// Evaluate the derivative of the named base function.
pub fn eval_derivative(fid: FunctionId, z: Complex64, p: &EvalParams) -> Result<Complex64> {
    match fid {
        FunctionId::Zeta => zeta_deriv(z, p),
        FunctionId::Eta => eta_deriv(z, p),
        FunctionId::Rosetta => Ok((1.0 - z) * (-z).exp()),
        FunctionId::Quadratic => Ok(2.0 * z),
        FunctionId::Xi | FunctionId::DirichletL { .. } => {
            central_difference(|w| eval_function(fid, w, p), z, p.deriv_step)
        }
    }
}
