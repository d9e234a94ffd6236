//! Dirichlet characters and L-functions.
//!
//! `(Z/qZ)*` is split into cyclic factors, one per odd prime power and up
//! to two for the power of two (`−1` first, then `5`). Factors are ordered
//! by prime and each uses its smallest generator. Characters are listed
//! lexicographically by their exponent tuple, so index 1 (1-based) is
//! always the principal character.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{int_pow_neg, ln_gamma, EvalParams};
use crate::error::{finite, Error, Result};

/// One Dirichlet character, tabulated on `0..q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub modulus: u32,
    /// `χ(0) … χ(q−1)`.
    pub values: Vec<Complex64>,
    /// Multiplicative order of the character.
    pub order: u32,
    /// Exponent tuple against the cyclic generators.
    pub exponents: Vec<u32>,
}

impl CharacterTable {
    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn value(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus as u64) as usize]
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    factorize(n).into_iter().map(|(p, a)| (p - 1) * p.pow(a - 1)).product()
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut a = 0;
            while n.is_multiple_of(p) {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A cyclic factor of the unit group: discrete logs modulo `modulus`.
struct CyclicFactor {
    modulus: u64,
    order: u64,
    /// `dlog[r]` for units `r` mod `modulus`.
    dlog: Vec<u32>,
}

fn mult_order(g: u64, m: u64) -> u64 {
    let mut x = g % m;
    let mut k = 1;
    while x != 1 {
        x = x * g % m;
        k += 1;
    }
    k
}

fn cyclic_factors(q: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (p, a) in factorize(q) {
        let m = p.pow(a);
        if p == 2 {
            match a {
                1 => {}
                2 => {
                    let mut dlog = vec![0; m as usize];
                    dlog[3] = 1;
                    out.push(CyclicFactor {
                        modulus: m,
                        order: 2,
                        dlog,
                    });
                }
                _ => {
                    let half = m / 4;
                    let mut minus = vec![0; m as usize];
                    let mut five = vec![0; m as usize];
                    let mut pow5 = 1u64;
                    for e1 in 0..half {
                        for e0 in 0..2u32 {
                            let r = if e0 == 0 { pow5 } else { m - pow5 };
                            minus[r as usize] = e0;
                            five[r as usize] = e1 as u32;
                        }
                        pow5 = pow5 * 5 % m;
                    }
                    out.push(CyclicFactor {
                        modulus: m,
                        order: 2,
                        dlog: minus,
                    });
                    out.push(CyclicFactor {
                        modulus: m,
                        order: half,
                        dlog: five,
                    });
                }
            }
            continue;
        }
        let phi = (p - 1) * p.pow(a - 1);
        let g = (2..m)
            .find(|&g| gcd(g, m) == 1 && mult_order(g, m) == phi)
            .expect("odd prime powers have primitive roots");
        let mut dlog = vec![0; m as usize];
        let mut x = 1u64;
        for e in 0..phi {
            dlog[x as usize] = e as u32;
            x = x * g % m;
        }
        out.push(CyclicFactor {
            modulus: m,
            order: phi,
            dlog,
        });
    }
    out
}

/// `e^{2πi num/den}`, exact at multiples of a quarter turn.
fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if (4 * num).is_multiple_of(den) {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * num as f64 / den as f64;
    Complex64::new(theta.cos(), theta.sin())
}

fn build_characters(q: u64) -> Vec<CharacterTable> {
    let factors = cyclic_factors(q);
    let common = factors.iter().fold(1u64, |acc, f| lcm(acc, f.order));
    // residue → exponent vector (None for non-units)
    let logs: Vec<Option<Vec<u64>>> = (0..q)
        .map(|n| {
            if gcd(n, q) != 1 {
                return None;
            }
            Some(
                factors
                    .iter()
                    .map(|f| f.dlog[(n % f.modulus) as usize] as u64)
                    .collect(),
            )
        })
        .collect();
    let count: u64 = factors.iter().map(|f| f.order).product();
    let mut out = Vec::with_capacity(count as usize);
    let mut exps = vec![0u64; factors.len()];
    for _ in 0..count {
        let values = logs
            .iter()
            .map(|log| match log {
                None => Complex64::new(0.0, 0.0),
                Some(e) => {
                    let num: u64 = e
                        .iter()
                        .zip(&exps)
                        .zip(&factors)
                        .map(|((&ej, &kj), f)| kj * ej * (common / f.order))
                        .sum();
                    root_of_unity(num, common)
                }
            })
            .collect();
        let order = exps
            .iter()
            .zip(&factors)
            .fold(1u64, |acc, (&k, f)| lcm(acc, f.order / gcd(k, f.order)));
        out.push(CharacterTable {
            modulus: q as u32,
            values,
            order: order as u32,
            exponents: exps.iter().map(|&e| e as u32).collect(),
        });
        // lexicographic increment, last factor fastest
        for j in (0..exps.len()).rev() {
            exps[j] += 1;
            if exps[j] < factors[j].order {
                break;
            }
            exps[j] = 0;
        }
    }
    out
}

/// All Dirichlet characters modulo `q`, principal first. Memoized.
pub fn characters(q: u32) -> Result<Arc<Vec<CharacterTable>>> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<CharacterTable>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("character cache poisoned").get(&q) {
        return Ok(Arc::clone(hit));
    }
    let built = Arc::new(build_characters(q as u64));
    cache
        .lock()
        .expect("character cache poisoned")
        .entry(q)
        .or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// `expm1(w) / w` for complex `w`.
fn expm1_over(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0
    } else {
        (w.exp() - 1.0) / w
    }
}

/// Euler–Maclaurin pieces of `ζ_H(s, a)` without the pole term.
fn hurwitz_regular(s: Complex64, a: f64, shift: usize) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        sum += (-s * (k as f64 + a).ln()).exp();
    }
    let big = shift as f64 + a;
    let ln_big = big.ln();
    let head = (-s * ln_big).exp();
    sum += head / 2.0;
    // T_1 = s N^{-s-1} / 2!, T_{j+1} = T_j (s+2j-1)(s+2j) / ((2j+1)(2j+2) N²)
    let mut t = s * head / big / 2.0;
    for (j, &b) in BERNOULLI_EVEN.iter().enumerate() {
        sum += b * t;
        let jj = (j + 1) as f64;
        t = t * (s + 2.0 * jj - 1.0) * (s + 2.0 * jj) / ((2.0 * jj + 1.0) * (2.0 * jj + 2.0) * big * big);
    }
    sum
}

fn hurwitz_shift(s: Complex64) -> usize {
    20usize.max((1.2 * s.norm()).ceil() as usize)
}

/// Hurwitz zeta `ζ_H(s, a) = Σ_{k≥0} (k + a)^{−s}` for `0 < a ≤ 1`, by
/// Euler–Maclaurin summation with fifteen Bernoulli corrections.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: s });
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidArgument(format!("Hurwitz shift {a} not in (0, 1]")));
    }
    let shift = hurwitz_shift(s);
    let big = shift as f64 + a;
    let pole = (-(s - 1.0) * big.ln()).exp() / (s - 1.0);
    finite(hurwitz_regular(s, a, shift) + pole, s)
}

/// Left of this line each `ζ_H(s, a/q)` is reflected to `1 − s`; the direct
/// Euler–Maclaurin sums cancel catastrophically there.
const REFLECT_RE: f64 = -1.0;

/// Hurwitz's formula for rational shifts, with `w = 1 − s`:
/// `ζ_H(s, a/q) = 2Γ(w)(2πq)^{−w} Σ_r cos(πw/2 − 2πra/q) ζ_H(w, r/q)`.
/// Summed against `χ(a)` the cosines collapse onto the twisted sums
/// `G_r = Σ_a χ(a) e^{2πira/q}`.
fn dirichlet_l_reflected(chi: &CharacterTable, s: Complex64) -> Result<Complex64> {
    let q = chi.modulus as u64;
    let w = 1.0 - s;
    let roots: Vec<Complex64> = (0..q).map(|j| root_of_unity(j, q)).collect();
    let twisted = |r: u64| -> Complex64 { (1..=q).map(|a| chi.value(a) * roots[((r * a) % q) as usize]).sum() };
    let mut plus = Complex64::new(0.0, 0.0);
    let mut minus = Complex64::new(0.0, 0.0);
    for r in 1..=q {
        let h = hurwitz_zeta(w, r as f64 / q as f64)?;
        plus += h * twisted(q - r % q);
        minus += h * twisted(r % q);
    }
    let qf = q as f64;
    let ln_pref = -s * qf.ln() + ln_gamma(w)? - w * (2.0 * PI * qf).ln();
    let half_turn = Complex64::new(0.0, PI / 2.0) * w;
    let value = (ln_pref + half_turn).exp() * plus + (ln_pref - half_turn).exp() * minus;
    finite(value, s)
}

/// Dirichlet L-function `L(s, χ) = Σ χ(n) n^{−s}`, continued to the whole
/// plane through `q^{−s} Σ_{a=1}^{q} χ(a) ζ_H(s, a/q)`.
pub fn dirichlet_l(chi: &CharacterTable, s: Complex64, _p: &EvalParams) -> Result<Complex64> {
    let q = chi.modulus as usize;
    let principal = chi.is_principal();
    if principal && s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole { at: s });
    }
    if s.re >= 16.0 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut n = 1usize;
        loop {
            let l = (n as f64).ln();
            if n > 1 && (-(s.re - 1.0) * l).exp() / (s.re - 1.0) < 1e-18 {
                break;
            }
            let x = chi.values[n % q];
            if x != Complex64::new(0.0, 0.0) {
                sum += x * int_pow_neg(n, s);
            }
            n += 1;
        }
        return Ok(sum);
    }
    if s.re < REFLECT_RE {
        return dirichlet_l_reflected(chi, s);
    }
    let shift = hurwitz_shift(s);
    let mut regular = Complex64::new(0.0, 0.0);
    let mut pole = Complex64::new(0.0, 0.0);
    for (a, &x) in chi
        .values
        .iter()
        .enumerate()
        .skip(1)
        .chain(std::iter::once((q, &chi.values[0])))
    {
        if x == Complex64::new(0.0, 0.0) {
            continue;
        }
        let shift_a = a as f64 / q as f64;
        regular += x * hurwitz_regular(s, shift_a, shift);
        let ln_big = (shift as f64 + shift_a).ln();
        if principal {
            pole += x * (-(s - 1.0) * ln_big).exp() / (s - 1.0);
        } else {
            // Σ χ(a) = 0, so subtract 1 from each power to cancel the pole exactly
            let w = -(s - 1.0) * ln_big;
            pole += x * (-ln_big) * expm1_over(w);
        }
    }
    let scale = (-s * (q as f64).ln()).exp();
    finite(scale * (regular + pole), s)
}
