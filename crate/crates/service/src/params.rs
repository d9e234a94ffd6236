//! Query-string decoding with precise 400 messages.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;

use crate::ApiError;

/// The query of one request. Keys outside the handler's vocabulary are
/// rejected so that typos fail loudly instead of silently using defaults.
pub struct Params(pub BTreeMap<String, String>);

impl Params {
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ApiError> {
        match self.0.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(ApiError::bad(format!(
                "unknown parameter {k:?}; expected one of {}",
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    /// `endpoint?k=v&…` with keys sorted: identical requests share a key.
    pub fn cache_key(&self, endpoint: &str) -> String {
        let q: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{endpoint}?{}", q.join("&"))
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(|s| s.trim())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ApiError> {
        match self.str(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| ApiError::bad(format!("{key}: cannot parse {v:?}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, ApiError> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn finite(&self, key: &str, default: f64) -> Result<f64, ApiError> {
        let v: f64 = self.get_or(key, default)?;
        if !v.is_finite() {
            return Err(ApiError::bad(format!("{key} must be finite")));
        }
        Ok(v)
    }

    pub fn complex(&self, key: &str) -> Result<Option<Complex64>, ApiError> {
        self.str(key)
            .map(|v| parse_complex(v).map_err(|m| ApiError::bad(format!("{key}: {m}"))))
            .transpose()
    }

    pub fn require<T>(&self, key: &str, v: Option<T>) -> Result<T, ApiError> {
        v.ok_or_else(|| ApiError::bad(format!("missing parameter {key:?}")))
    }
}

/// `"re,im"`, or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("cannot parse {s:?} as re,im"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("cannot parse {s:?} as re,im")),
    };
    if !z.is_finite() {
        return Err(format!("{s:?} is not finite"));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("-15.5, 0").unwrap(), Complex64::new(-15.5, 0.0));
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("inf,0").is_err());
        assert!(parse_complex("a,b").is_err());
    }
}
