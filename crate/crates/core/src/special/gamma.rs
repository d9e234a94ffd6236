//! Complex gamma function: Lanczos approximation (g = 7, nine coefficients)
//! with the reflection formula for the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ln_sin_pi, sin_pi};
use crate::error::{finite, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Above this height the reflected branch is assembled in log space.
const LOG_SCALE_HEIGHT: f64 = 200.0;

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.trunc()
}

/// Lanczos series and shifted argument for `Re z >= 0.5`.
fn lanczos_parts(z: Complex64) -> (Complex64, Complex64, Complex64) {
    let zm = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (zm + k as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    (zm, t, series)
}

fn ln_gamma_right(z: Complex64) -> Complex64 {
    let (zm, t, series) = lanczos_parts(z);
    LN_SQRT_2PI + (zm + 0.5) * t.ln() - t + series.ln()
}

/// Natural logarithm of `Γ(z)` on some branch, finite wherever `Γ` is
/// nonzero and finite. Use this instead of [`gamma`] far up the imaginary
/// axis, where `Γ` itself underflows (around `|Im z| ≈ 450` on the
/// critical line).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { at: z });
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    // Γ(z) = π / (sin(πz) Γ(1 − z))
    let value = PI.ln() - ln_sin_pi(z) - ln_gamma_right(1.0 - z);
    finite(value, z)
}

/// `Γ(z)` for every `z` off the non-positive integers.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { at: z });
    }
    if z.re >= 0.5 {
        let (zm, t, series) = lanczos_parts(z);
        let value = ((zm + 0.5) * t.ln() - t + LN_SQRT_2PI).exp() * series;
        return finite(value, z);
    }
    if z.im.abs() > LOG_SCALE_HEIGHT {
        return finite(ln_gamma(z)?.exp(), z);
    }
    let reflected = gamma(1.0 - z)?;
    finite(PI / (sin_pi(z) * reflected), z)
}

/// Digamma `ψ(z) = Γ'(z)/Γ(z)`: upward recurrence to `|z| ≥ 10`, then the
/// asymptotic series; reflection for `Re z < 0.5`.
pub fn digamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { at: z });
    }
    if z.re < 0.5 {
        // ψ(z) = ψ(1 − z) − π cot(πz)
        let (s, c) = ((PI * z).sin(), (PI * z).cos());
        let cot = if z.im.abs() > 20.0 {
            Complex64::new(0.0, -z.im.signum())
        } else {
            c / s
        };
        return finite(digamma(1.0 - z)? - PI * cot, z);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.norm() < 10.0 {
        acc -= 1.0 / w;
        w += 1.0;
    }
    const B2K_OVER_2K: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
    ];
    let inv2 = 1.0 / (w * w);
    let mut pw = inv2;
    let mut tail = Complex64::new(0.0, 0.0);
    for b in B2K_OVER_2K {
        tail += b * pw;
        pw *= inv2;
    }
    finite(acc + w.ln() - 0.5 / w - tail, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Stirling series with upward recurrence; independent of the Lanczos path.
    fn ln_gamma_stirling(z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        let mut w = z;
        while w.norm() < 40.0 {
            shift += w.ln();
            w += 1.0;
        }
        let bern = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
            1.0 / 156.0,
        ];
        let mut tail = Complex64::new(0.0, 0.0);
        let winv = 1.0 / w;
        let winv2 = winv * winv;
        let mut p = winv;
        for b in bern {
            tail += b * p;
            p *= winv2;
        }
        (w - 0.5) * w.ln() - w + LN_SQRT_2PI + tail - shift
    }

    #[test]
    fn integer_and_half_integer_values() {
        let g5 = gamma(c(5.0, 0.0)).unwrap();
        assert!((g5.re - 24.0).abs() < 1e-12 && g5.im.abs() < 1e-12);
        let gh = gamma(c(0.5, 0.0)).unwrap();
        assert!((gh.re - PI.sqrt()).abs() < 1e-13);
        let gm = gamma(c(-0.5, 0.0)).unwrap();
        assert!((gm.re + 2.0 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn poles_are_errors() {
        for k in 0..5 {
            assert!(matches!(gamma(c(-(k as f64), 0.0)), Err(Error::Pole { .. })));
        }
        assert!(gamma(c(-2.0, 1e-9)).is_ok());
    }

    #[test]
    fn high_on_the_critical_line_matches_stirling_oracle() {
        let z = c(0.5, 300.0);
        let direct = gamma(z).unwrap();
        let via_log = ln_gamma(z).unwrap().exp();
        let oracle = ln_gamma_stirling(z).exp();
        // compare by norms: complex division underflows at this magnitude
        assert!((direct - via_log).norm() / oracle.norm() < 1e-9);
        assert!((direct - oracle).norm() / oracle.norm() < 1e-9);
    }

    #[test]
    fn log_gamma_survives_where_gamma_underflows() {
        let z = c(0.5, 520.0);
        assert!(gamma(z).unwrap().norm() == 0.0 || gamma(z).unwrap().norm() < 1e-300);
        let lg = ln_gamma(z).unwrap();
        let oracle = ln_gamma_stirling(z);
        assert!((lg.re - oracle.re).abs() < 1e-9);
        let dphase = (lg.im - oracle.im) / (2.0 * PI);
        assert!((dphase - dphase.round()).abs() < 1e-9);
    }

    #[test]
    fn reflected_branch_agrees_with_oracle() {
        for &z in &[c(-3.3, 0.7), c(-0.2, 250.0), c(0.1, -260.0), c(-10.5, 4.0)] {
            let lg = ln_gamma(z).unwrap();
            let oracle = ln_gamma_stirling(z);
            assert!((lg.re - oracle.re).abs() < 1e-9, "{z}");
            let dphase = (lg.im - oracle.im) / (2.0 * PI);
            assert!((dphase - dphase.round()).abs() < 1e-9, "{z}");
        }
    }

    #[test]
    fn digamma_values() {
        // ψ(1) = −γ, ψ(1/2) = −γ − 2 ln 2
        let euler = 0.577_215_664_901_532_9;
        assert!((digamma(c(1.0, 0.0)).unwrap().re + euler).abs() < 1e-14);
        let half = digamma(c(0.5, 0.0)).unwrap().re;
        assert!((half + euler + 2.0 * std::f64::consts::LN_2).abs() < 1e-14);
        // oracle: central difference of ln Γ
        for &z in &[c(3.2, -1.5), c(0.7, 40.0), c(-2.3, 0.4), c(20.5, 300.0)] {
            let h = 1e-5;
            let fd = (ln_gamma(z + h).unwrap() - ln_gamma(z - h).unwrap()) / (2.0 * h);
            assert!((digamma(z).unwrap() - fd).norm() < 1e-8 * (1.0 + fd.norm()), "{z}");
        }
    }

    #[test]
    fn recurrence_holds() {
        for &z in &[c(0.3, 2.0), c(-1.7, -0.4), c(6.1, 11.0)] {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(((lhs - rhs) / lhs).norm() < 1e-12, "{z}");
        }
    }
}
