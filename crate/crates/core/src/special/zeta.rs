//! Riemann zeta, Dirichlet eta and Riemann xi.
//!
//! Right of `Re z = 1/2` zeta is obtained from the alternating eta series
//! divided by `1 − 2^{1−z}`; left of it from the functional equation
//! `ζ(z) = 2^z π^{z−1} sin(πz/2) Γ(1−z) ζ(1−z)`. Far right (`Re z ≥ 16`)
//! the plain Dirichlet series converges faster than anything else.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use super::{central_difference, digamma, gamma, int_pow_neg, ln_gamma, ln_int, ln_sin_pi, pow2, sin_pi};
use super::{EvalMode, EvalParams};
use crate::error::{finite, Error, Result};

/// Continuation switch line.
const SWITCH_RE: f64 = 0.5;
/// Right of this the Dirichlet series is summed directly.
const DIRECT_RE: f64 = 16.0;
/// Above this height the functional-equation factor is built in log space.
const LOG_SCALE_HEIGHT: f64 = 200.0;
/// Radius inside which the removable points `1 + 2πik/ln 2` are bypassed.
const REMOVABLE_RADIUS: f64 = 1e-3;
/// Radius of the four-point circle used to bypass them.
const BYPASS_RADIUS: f64 = 2e-3;

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Term count that keeps the accelerated eta error below about `1e-17`
/// (the error decays like `(3+√8)^{-n}` and grows like `e^{π|t|/2}`).
fn accelerated_terms(t: f64) -> usize {
    let rate = (3.0 + 8f64.sqrt()).ln();
    let n = ((0.5 * PI * t.abs() + 40.0) / rate).ceil() as usize;
    n.max(24).div_ceil(8) * 8
}

/// Weights `e_k = 1 − d_k/d_n` of the Chebyshev-accelerated alternating
/// series, `k = 0..n`. Computed in log space so large `n` cannot overflow.
fn acceleration_weights(n: usize) -> Arc<[f64]> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<[f64]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(w) = cache.read().expect("weight cache poisoned").get(&n) {
        return Arc::clone(w);
    }
    let nf = n as f64;
    // t_i = n (n+i-1)! 4^i / ((n-i)! (2i)!), t_0 = 1
    let mut logs = Vec::with_capacity(n + 1);
    logs.push(0.0f64);
    for i in 1..=n {
        let fi = i as f64;
        let step = (4.0 * (nf + fi - 1.0) * (nf - fi + 1.0)).ln() - (2.0 * fi * (2.0 * fi - 1.0)).ln();
        logs.push(logs[i - 1] + step);
    }
    let max = logs.iter().cloned().fold(f64::MIN, f64::max);
    let terms: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = terms.iter().sum();
    let mut weights = vec![0.0; n];
    let mut tail = 0.0;
    for k in (0..n).rev() {
        tail += terms[k + 1];
        weights[k] = tail / total;
    }
    let weights: Arc<[f64]> = weights.into();
    cache
        .write()
        .expect("weight cache poisoned")
        .insert(n, Arc::clone(&weights));
    weights
}

/// Accelerated `η(s)` and optionally `η'(s)`, for `Re s ≥ 1/2`.
fn eta_accelerated(s: Complex64, with_deriv: bool) -> (Complex64, Complex64) {
    let n = accelerated_terms(s.im);
    let weights = acceleration_weights(n);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for (k, &w) in weights.iter().enumerate() {
        let term = int_pow_neg(k + 1, s) * w;
        let signed = if k % 2 == 0 { term } else { -term };
        sum += signed;
        if with_deriv {
            dsum -= signed * ln_int(k + 1);
        }
    }
    (sum, dsum)
}

/// Plain partial sum of the alternating series and its derivative.
fn eta_truncated(s: Complex64, terms: usize, with_deriv: bool) -> (Complex64, Complex64) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for n in 1..=terms {
        let term = int_pow_neg(n, s);
        let signed = if n % 2 == 1 { term } else { -term };
        sum += signed;
        if with_deriv {
            dsum -= signed * ln_int(n);
        }
    }
    (sum, dsum)
}

/// Direct Dirichlet sums for large real part: `(Σ n^{-s}, Σ ±n^{-s})` and
/// their derivatives, summed until the tail is below `1e-18`.
struct DirectSums {
    zeta: Complex64,
    eta: Complex64,
    dzeta: Complex64,
    deta: Complex64,
}

fn direct_sums(s: Complex64) -> DirectSums {
    let mut out = DirectSums {
        zeta: one(),
        eta: one(),
        dzeta: Complex64::new(0.0, 0.0),
        deta: Complex64::new(0.0, 0.0),
    };
    let sigma = s.re;
    let mut n = 2usize;
    loop {
        let l = ln_int(n);
        let tail = (-(sigma - 1.0) * l).exp() / (sigma - 1.0) * (1.0 + l);
        if tail < 1e-18 {
            break;
        }
        let term = int_pow_neg(n, s);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        out.zeta += term;
        out.eta += sign * term;
        out.dzeta -= term * l;
        out.deta -= sign * term * l;
        n += 1;
    }
    out
}

fn eta_series(s: Complex64, p: &EvalParams, with_deriv: bool) -> (Complex64, Complex64) {
    match p.mode {
        EvalMode::Accelerated => eta_accelerated(s, with_deriv),
        EvalMode::TruncatedEta => eta_truncated(s, p.terms.max(1), with_deriv),
    }
}

/// Nearest removable point `1 + 2πik/ln 2` (`k ≠ 0`) if `z` is inside the
/// bypass radius.
fn near_removable(z: Complex64) -> bool {
    let k = (z.im * LN_2 / (2.0 * PI)).round();
    if k == 0.0 {
        return false;
    }
    let centre = Complex64::new(1.0, 2.0 * PI * k / LN_2);
    (z - centre).norm() < REMOVABLE_RADIUS
}

fn circle_points(z: Complex64) -> [Complex64; 4] {
    let r = BYPASS_RADIUS;
    [
        z + Complex64::new(r, 0.0),
        z + Complex64::new(0.0, r),
        z - Complex64::new(r, 0.0),
        z - Complex64::new(0.0, r),
    ]
}

/// ζ on the series side of the switch line.
fn zeta_right(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if p.mode == EvalMode::Accelerated && z.re >= DIRECT_RE {
        return Ok(direct_sums(z).zeta);
    }
    if near_removable(z) {
        // mean value over a small circle; exact through cubic order
        let mut acc = Complex64::new(0.0, 0.0);
        for w in circle_points(z) {
            acc += zeta_right_plain(w, p);
        }
        return Ok(acc / 4.0);
    }
    Ok(zeta_right_plain(z, p))
}

fn zeta_right_plain(z: Complex64, p: &EvalParams) -> Complex64 {
    let (eta, _) = eta_series(z, p, false);
    eta / (1.0 - pow2(1.0 - z))
}

/// `2^z π^{z−1} sin(πz/2) Γ(1−z)`, the functional-equation factor.
fn reflection_factor(z: Complex64) -> Result<Complex64> {
    reflection_factor_shifted(z, 0.0)
}

/// `2^z π^{z−1} sin(π(z + shift)/2) Γ(1 − z)`; shift 1 turns the sine into
/// a cosine.
fn reflection_factor_shifted(z: Complex64, shift: f64) -> Result<Complex64> {
    let ln_pi = PI.ln();
    let trig = (z + shift) / 2.0;
    if z.im.abs() <= LOG_SCALE_HEIGHT && z.re > -140.0 {
        let head = (z * LN_2 + (z - 1.0) * ln_pi).exp();
        let value = head * sin_pi(trig) * gamma(1.0 - z)?;
        return finite(value, z);
    }
    let log = z * LN_2 + (z - 1.0) * ln_pi + ln_sin_pi(trig) + ln_gamma(1.0 - z)?;
    if log.re == f64::NEG_INFINITY {
        return Ok(Complex64::new(0.0, 0.0));
    }
    finite(log.exp(), z)
}

/// Derivative of the functional equation `ζ(z) = χ(z) ζ(1 − z)`:
/// `χ'(z) = χ(z)(ln 2π − ψ(1 − z)) + (π/2) 2^z π^{z−1} cos(πz/2) Γ(1 − z)`.
fn zeta_deriv_left(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    let chi = reflection_factor(z)?;
    let chi_cos = reflection_factor_shifted(z, 1.0)? * (PI / 2.0);
    let w = 1.0 - z;
    let dchi = chi * ((2.0 * PI).ln() - digamma(w)?) + chi_cos;
    let mut value = dchi * zeta_right(w, p)?;
    if chi != Complex64::new(0.0, 0.0) {
        value -= chi * zeta_deriv(w, p)?;
    }
    finite(value, z)
}

/// Riemann zeta function.
///
/// `Accelerated` is accurate to roughly `1e-14` relative in the critical
/// strip up to heights of a few thousand; `TruncatedEta` reproduces the
/// behaviour of a plain `p.terms`-term partial sum.
pub fn zeta(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if z == one() {
        return Err(Error::Pole { at: z });
    }
    if z.re >= SWITCH_RE {
        return finite(zeta_right(z, p)?, z);
    }
    if z.norm() < 0.1 {
        return zeta_near_origin(z, p);
    }
    let factor = reflection_factor(z)?;
    if factor == Complex64::new(0.0, 0.0) {
        return Ok(factor);
    }
    finite(factor * zeta_right(1.0 - z, p)?, z)
}

/// Functional equation near `z = 0`, where `sin(πz/2)` and the pole of
/// `ζ(1 − z)` cancel: `ζ(z) = 2^z π^{z−1} Γ(1−z) · sin(πz/2)/(−z) · (−z) ζ(1−z)`.
fn zeta_near_origin(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    let half = z * (PI / 2.0);
    let sinc = if z.norm() < 1e-2 {
        let h2 = half * half;
        (PI / 2.0) * (1.0 - h2 / 6.0 + h2 * h2 / 120.0)
    } else {
        sin_pi(z / 2.0) / z
    };
    let head = (z * LN_2 + (z - 1.0) * PI.ln()).exp() * gamma(1.0 - z)?;
    let regular = zeta_times_pole_factor(1.0 - z, p)?;
    finite(-(head * sinc * regular), z)
}

/// Derivative `ζ'(z)`.
///
/// Term-wise differentiation of the eta series right of the switch line,
/// central differences with step `p.deriv_step` left of it.
pub fn zeta_deriv(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if z == one() {
        return Err(Error::Pole { at: z });
    }
    if z.re < SWITCH_RE {
        if z.norm() < 0.1 {
            // ζ(1 − z) has its pole here; the difference quotient is benign
            return central_difference(|w| zeta(w, p), z, p.deriv_step);
        }
        return zeta_deriv_left(z, p);
    }
    if p.mode == EvalMode::Accelerated && z.re >= DIRECT_RE {
        return Ok(direct_sums(z).dzeta);
    }
    if near_removable(z) {
        // Cauchy formula on the four-point circle
        let r = BYPASS_RADIUS;
        let dirs = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ];
        let mut acc = Complex64::new(0.0, 0.0);
        for (w, d) in circle_points(z).into_iter().zip(dirs) {
            acc += zeta_right_plain(w, p) * d.conj();
        }
        return finite(acc / (4.0 * r), z);
    }
    let (eta, deta) = eta_series(z, p, true);
    let two_pow = pow2(1.0 - z);
    let denom = 1.0 - two_pow;
    let zeta = eta / denom;
    finite((deta - zeta * two_pow * LN_2) / denom, z)
}

/// Dirichlet eta function `η(z) = Σ (−1)^{n+1} n^{−z} = (1 − 2^{1−z}) ζ(z)`.
pub fn eta(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if z.re >= SWITCH_RE {
        if p.mode == EvalMode::Accelerated && z.re >= DIRECT_RE {
            return Ok(direct_sums(z).eta);
        }
        return finite(eta_series(z, p, false).0, z);
    }
    let factor = 1.0 - pow2(1.0 - z);
    finite(factor * zeta(z, p)?, z)
}

/// Derivative `η'(z)`.
pub fn eta_deriv(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if z.re >= SWITCH_RE {
        if p.mode == EvalMode::Accelerated && z.re >= DIRECT_RE {
            return Ok(direct_sums(z).deta);
        }
        return finite(eta_series(z, p, true).1, z);
    }
    let two_pow = pow2(1.0 - z);
    finite(two_pow * LN_2 * zeta(z, p)? + (1.0 - two_pow) * zeta_deriv(z, p)?, z)
}

/// `(z − 1) ζ(z)`, regular at `z = 1`.
fn zeta_times_pole_factor(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    let w = z - 1.0;
    if z.re >= SWITCH_RE && w.norm() < 0.1 {
        let x = w * LN_2;
        // x / (1 − e^{−x}) = 1 + x/2 + x²/12 − x⁴/720 + x⁶/30240 − …
        let ratio = if x.norm() < 1e-2 {
            let x2 = x * x;
            1.0 + x / 2.0 + x2 / 12.0 - x2 * x2 / 720.0 + x2 * x2 * x2 / 30240.0
        } else {
            x / (1.0 - (-x).exp())
        };
        let (eta, _) = eta_series(z, p, false);
        return Ok(ratio / LN_2 * eta);
    }
    Ok(w * zeta(z, p)?)
}

/// Riemann xi, `ξ(z) = Γ(z/2 + 1) (z − 1) π^{−z/2} ζ(z)`. Entire and
/// symmetric under `z ↦ 1 − z`; far left the symmetry is used directly.
pub fn xi(z: Complex64, p: &EvalParams) -> Result<Complex64> {
    if z.re < -1.0 {
        return xi(1.0 - z, p);
    }
    let head = (ln_gamma(z / 2.0 + 1.0)? - z / 2.0 * PI.ln()).exp();
    finite(head * zeta_times_pole_factor(z, p)?, z)
}
