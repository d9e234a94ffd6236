use proptest::prelude::*;
use zeta_atlas::farey::*;

/// Brute force: every reduced a/b with b ≤ n, sorted by value.
fn oracle(n: u64) -> Vec<(u64, u64)> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut v: Vec<(u64, u64)> = (1..=n)
        .flat_map(|b| (0..=b).map(move |a| (a, b)))
        .filter(|&(a, b)| gcd(a, b) == 1)
        .collect();
    v.sort_by(|x, y| (x.0 * y.1).cmp(&(y.0 * x.1)));
    v
}

#[test]
fn matches_brute_force_and_mediants() {
    for n in 1..=50 {
        let seq = farey(n).unwrap();
        let pairs: Vec<(u64, u64)> = seq.iter().map(|f| (f.num, f.den)).collect();
        assert_eq!(pairs, oracle(n), "order {n}");
        assert_eq!(seq.len() as u64, farey_len(n).unwrap());
        assert!(seq.windows(2).all(|w| w[0] < w[1]));
        assert!(seq.iter().all(|f| f.is_reduced()));
        for w in seq.windows(3) {
            assert_eq!(w[0].mediant(&w[2]), w[1], "order {n}");
            // neighbours are unimodular
            assert_eq!(w[1].num * w[0].den, w[0].num * w[1].den + 1);
        }
    }
}

#[test]
fn statistics_against_direct_enumeration() {
    for n in 1..=30 {
        let seq = oracle(n);
        let m = seq.len() as f64;
        let d: Vec<f64> = seq
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| a as f64 / b as f64 - (k + 1) as f64 / m)
            .collect();
        let s = rh_stats(n).unwrap();
        assert_eq!(s.m_n, seq.len() as u64);
        assert!((s.sum_abs_d - d.iter().map(|x| x.abs()).sum::<f64>()).abs() < 1e-12);
        assert!((s.sum_sq_d - d.iter().map(|x| x * x).sum::<f64>()).abs() < 1e-12);
    }
}

#[test]
fn growth_exponents_over_ten_to_two_hundred() {
    let stats: Vec<FareyStats> = (10..=200).step_by(5).map(|n| rh_stats(n).unwrap()).collect();
    let (abs_slope, sq_slope) = fitted_exponents(&stats).unwrap();
    assert!(abs_slope < 1.0, "Σ|d| slope {abs_slope}");
    assert!(sq_slope < 0.0, "Σd² slope {sq_slope}");
    // Σ|d|/n trends downwards
    let first = stats[0].sum_abs_d / stats[0].n as f64;
    let last = stats.last().map(|s| s.sum_abs_d / s.n as f64).unwrap();
    assert!(last < first);
    assert!(fitted_exponents(&stats[..1]).is_err());
}

proptest! {
    #[test]
    fn length_is_one_plus_totient_sum(n in 1u64..400) {
        let seq = farey(n).unwrap();
        prop_assert_eq!(seq.len() as u64, farey_len(n).unwrap());
        prop_assert_eq!(seq[0].num, 0);
        prop_assert_eq!(seq.last().unwrap().num, 1);
        let s = rh_stats(n).unwrap();
        prop_assert!(s.sum_abs_d >= 0.0 && s.sum_sq_d >= 0.0);
        prop_assert!(s.sum_sq_d <= s.sum_abs_d);
    }
}
