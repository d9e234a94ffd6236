use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole at {}{:+}i", .at.re, .at.im)]
    Pole { at: Complex64 },
    #[error("value not representable in double precision at {}{:+}i", .at.re, .at.im)]
    Overflow { at: Complex64 },
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Turn a non-finite result into an overflow error.
pub(crate) fn finite(value: Complex64, at: Complex64) -> Result<Complex64> {
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { at })
    }
}
