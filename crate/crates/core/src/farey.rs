//! Farey sequences and the two Farey-discrepancy statistics.
//!
//! With `F_n = {a_1 = 0/1 < a_2 < … < a_m = 1/1}` of length `m = m_n`,
//! the discrepancies are `d_k = a_k − k/m`. The Riemann hypothesis is
//! equivalent to `Σ|d_k| = O(n^r)` for every `r > 1/2`, and also to
//! `Σd_k² = O(n^r)` for every `r > −1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::totient;

/// A reduced fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    /// Reduced `num/den`; fails unless `den ≥ 1` and `num ≤ den`.
    pub fn new(num: u64, den: u64) -> Result<Fraction> {
        if den == 0 || num > den {
            return Err(Error::InvalidArgument(format!("{num}/{den} is not in [0, 1]")));
        }
        let g = gcd(num, den);
        Ok(Fraction {
            num: num / g,
            den: den / g,
        })
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `(a + c)/(b + d)`, reduced.
    pub fn mediant(&self, other: &Fraction) -> Fraction {
        Fraction::new(self.num + other.num, self.den + other.den).expect("mediant of fractions in [0, 1]")
    }

    pub fn is_reduced(&self) -> bool {
        gcd(self.num, self.den) == 1
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("Farey order must be at least 1".into()));
    }
    Ok(())
}

/// `m_n = 1 + Σ_{k≤n} φ(k)`.
pub fn farey_len(n: u64) -> Result<u64> {
    check_order(n)?;
    Ok(1 + (1..=n).map(totient).sum::<u64>())
}

/// `F_n` in increasing order, by the next-term recurrence
/// `c/d = (⌊(n + b)/d⌋·c − a) / (⌊(n + b)/d⌋·d − b)`.
pub fn farey(n: u64) -> Result<Vec<Fraction>> {
    let mut out = Vec::with_capacity(farey_len(n)? as usize);
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    out.push(Fraction { num: a, den: b });
    while c <= n {
        let k = (n + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
        out.push(Fraction { num: a, den: b });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FareyStats {
    pub n: u64,
    pub m_n: u64,
    pub sum_abs_d: f64,
    pub sum_sq_d: f64,
}

/// `Σ|d_k|` and `Σd_k²` over `F_n`, counting `0/1` as `a_1`.
pub fn rh_stats(n: u64) -> Result<FareyStats> {
    let seq = farey(n)?;
    let m = seq.len() as f64;
    let (mut sum_abs_d, mut sum_sq_d) = (0.0, 0.0);
    for (k, a) in seq.iter().enumerate() {
        let d = a.value() - (k + 1) as f64 / m;
        sum_abs_d += d.abs();
        sum_sq_d += d * d;
    }
    Ok(FareyStats {
        n,
        m_n: seq.len() as u64,
        sum_abs_d,
        sum_sq_d,
    })
}

/// Least-squares slopes of `ln Σ|d|` and `ln Σd²` against `ln n`.
pub fn fitted_exponents(stats: &[FareyStats]) -> Result<(f64, f64)> {
    if stats.len() < 2 {
        return Err(Error::InvalidArgument("a fit needs at least two orders".into()));
    }
    let slope = |ys: Vec<f64>| {
        let xs: Vec<f64> = stats.iter().map(|s| (s.n as f64).ln()).collect();
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    };
    Ok((
        slope(stats.iter().map(|s| s.sum_abs_d.ln()).collect()),
        slope(stats.iter().map(|s| s.sum_sq_d.ln()).collect()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(num: u64, den: u64) -> Fraction {
        Fraction::new(num, den).unwrap()
    }

    #[test]
    fn fifth_order() {
        let want = [
            (0, 1),
            (1, 5),
            (1, 4),
            (1, 3),
            (2, 5),
            (1, 2),
            (3, 5),
            (2, 3),
            (3, 4),
            (4, 5),
            (1, 1),
        ];
        let got = farey(5).unwrap();
        assert_eq!(got, want.map(|(a, b)| f(a, b)));
        assert_eq!(farey(1).unwrap(), vec![f(0, 1), f(1, 1)]);
        assert_eq!(farey(8).unwrap().len(), 23);
        assert!(farey(0).is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(f(2, 4), f(1, 2));
        assert!(Fraction::new(3, 2).is_err());
        assert!(Fraction::new(0, 0).is_err());
        assert_eq!(f(1, 3).mediant(&f(1, 2)), f(2, 5));
        assert!(f(1, 3) < f(2, 5));
        assert_eq!(f(3, 7).to_string(), "3/7");
    }

    #[test]
    fn smallest_statistics() {
        let s1 = rh_stats(1).unwrap();
        assert_eq!((s1.m_n, s1.sum_abs_d, s1.sum_sq_d), (2, 0.5, 0.25));
        // {0, 1/2, 1} against {1/3, 2/3, 1}
        let s2 = rh_stats(2).unwrap();
        assert_eq!(s2.m_n, 3);
        assert!((s2.sum_abs_d - 0.5).abs() < 1e-15);
        assert!((s2.sum_sq_d - (1.0 / 9.0 + 1.0 / 36.0)).abs() < 1e-15);
    }
}
