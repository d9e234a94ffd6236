//! Special functions on the whole complex plane.
//!
//! Everything here is a pure function of its arguments. The only shared
//! state is a pair of lazily filled caches (acceleration weights and
//! character tables) that are idempotent and internally synchronized.

mod dirichlet;
mod function;
mod gamma;
mod zeta;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use dirichlet::{characters, dirichlet_l, hurwitz_zeta, totient, CharacterTable};
pub use function::{eval_derivative, eval_function, has_plateau, FunctionId};
pub use gamma::{digamma, gamma, ln_gamma};
pub use zeta::{eta, eta_deriv, xi, zeta, zeta_deriv};

/// A point of the complex plane. The universal scalar of the crate.
pub type ComplexValue = Complex64;

/// How Dirichlet series are summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Alternating-series acceleration; the term count follows the height
    /// `|Im z|` so that the truncation error stays below `1e-17`.
    #[default]
    Accelerated,
    /// Plain `terms`-term partial sum of the alternating eta series.
    TruncatedEta,
}

/// Evaluation knobs shared by all series-based functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalParams {
    pub mode: EvalMode,
    /// Number of series terms in [`EvalMode::TruncatedEta`].
    pub terms: usize,
    /// Step of the central finite differences used off the series region.
    pub deriv_step: f64,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            mode: EvalMode::Accelerated,
            terms: 64,
            deriv_step: 1e-6,
        }
    }
}

/// Largest accepted term count for the truncated series.
pub const MAX_TERMS: usize = 1 << 16;

impl EvalParams {
    pub fn truncated(terms: usize) -> Self {
        EvalParams {
            mode: EvalMode::TruncatedEta,
            terms,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.terms == 0 || self.terms > MAX_TERMS {
            return Err(crate::Error::InvalidArgument(format!(
                "terms must be in 1..={MAX_TERMS}, got {}",
                self.terms
            )));
        }
        if !(self.deriv_step > 0.0 && self.deriv_step.is_finite()) {
            return Err(crate::Error::InvalidArgument("deriv_step must be positive".into()));
        }
        Ok(())
    }
}

const LN_TABLE_LEN: usize = 1 << 14;

/// `ln(n)` for `n >= 1`, tabulated for the common range.
pub(crate) fn ln_int(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| (0..LN_TABLE_LEN).map(|k| (k as f64).ln()).collect());
    if n < LN_TABLE_LEN {
        table[n]
    } else {
        (n as f64).ln()
    }
}

/// `n^{-s}` for a positive integer `n`.
#[inline]
pub(crate) fn int_pow_neg(n: usize, s: Complex64) -> Complex64 {
    let l = ln_int(n);
    let mag = (-s.re * l).exp();
    let (sin, cos) = (s.im * l).sin_cos();
    Complex64::new(mag * cos, -mag * sin)
}

/// `(sin(pi x), cos(pi x))` for real `x`, exact at integers and half-integers.
pub(crate) fn sincos_pi(x: f64) -> (f64, f64) {
    let r = x - 2.0 * (x / 2.0).round();
    if r == r.trunc() {
        // r in {-1, 0, 1}
        return (0.0, if r == 0.0 { 1.0 } else { -1.0 });
    }
    if (2.0 * r) == (2.0 * r).trunc() {
        return (if r > 0.0 { 1.0 } else { -1.0 }, 0.0);
    }
    (PI * r).sin_cos()
}

/// `sin(pi z)` with argument reduction on the real part.
pub(crate) fn sin_pi(z: Complex64) -> Complex64 {
    let (s, c) = sincos_pi(z.re);
    let b = PI * z.im;
    Complex64::new(s * b.cosh(), c * b.sinh())
}

/// `ln sin(pi z)`, stable for large `|Im z|` where `sin` itself overflows.
/// Any branch of the logarithm; callers exponentiate.
pub(crate) fn ln_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return sin_pi(z).ln();
    }
    if z.im < 0.0 {
        return ln_sin_pi(z.conj()).conj();
    }
    // sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) * (i / 2)
    let i = Complex64::i();
    let (s, c) = sincos_pi(2.0 * z.re);
    let small = Complex64::new(c, s) * (-2.0 * PI * z.im).exp();
    -i * PI * z + (Complex64::new(1.0, 0.0) - small).ln() + Complex64::new(0.0, 0.5).ln()
}

/// `2^{w}` for complex `w`.
#[inline]
pub(crate) fn pow2(w: Complex64) -> Complex64 {
    (w * std::f64::consts::LN_2).exp()
}

/// Central finite difference of a complex function along the real direction.
pub(crate) fn central_difference<F>(f: F, z: Complex64, h: f64) -> crate::Result<Complex64>
where
    F: Fn(Complex64) -> crate::Result<Complex64>,
{
    let hp = f(z + h)?;
    let hm = f(z - h)?;
    Ok((hp - hm) / (2.0 * h))
}
