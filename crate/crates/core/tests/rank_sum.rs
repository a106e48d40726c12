use netcap::stats::rank_sum_test;
use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided exact p-value by listing every way to pick `a.len()` of the pooled midranks.
fn enumerate_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let rank = |v: f64| {
        let below = pooled.iter().filter(|&&x| x < v).count() as f64;
        let equal = pooled.iter().filter(|&&x| x == v).count() as f64;
        below + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = pooled.iter().map(|&v| rank(v)).collect();
    let observed: f64 = ranks[..a.len()].iter().sum();
    let (mut low, mut high, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let s: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        total += 1;
        if s <= observed + 1e-9 {
            low += 1;
        }
        if s >= observed - 1e-9 {
            high += 1;
        }
    }
    (2.0 * low.min(high) as f64 / total as f64).min(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_p_matches_enumeration(
        a in prop::collection::vec(0u8..6, 5..=8),
        b in prop::collection::vec(0u8..6, 5..=8),
    ) {
        let a: Vec<f64> = a.into_iter().map(f64::from).collect();
        let b: Vec<f64> = b.into_iter().map(f64::from).collect();
        let r = rank_sum_test(&a, &b).unwrap();
        prop_assert!(r.exact);
        let expected = if a.iter().chain(&b).all(|&v| v == a[0]) { 1.0 } else { enumerate_p(&a, &b) };
        prop_assert!((r.p_value - expected).abs() < 1e-12, "{} vs {}", r.p_value, expected);
    }
}

#[test]
fn normal_approximation_without_ties() {
    let a: Vec<f64> = (1..=12).map(f64::from).collect();
    let b: Vec<f64> = (13..=24).map(f64::from).collect();
    let r = rank_sum_test(&a, &b).unwrap();
    assert!(!r.exact);
    let z = (78.0 - 150.0 + 0.5) / 300f64.sqrt();
    let expected = 2.0 * Normal::new(0.0, 1.0).unwrap().cdf(z);
    assert!((r.z - z).abs() < 1e-12);
    assert!((r.p_value - expected).abs() < 1e-10 * expected.max(1e-300) + 1e-15);
}

#[test]
fn tie_correction_shrinks_the_variance() {
    let a = [1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 4.0, 4.0, 5.0];
    let b = [3.0, 4.0, 4.0, 5.0, 5.0, 5.0, 6.0, 6.0, 6.0, 7.0, 7.0];
    let r = rank_sum_test(&a, &b).unwrap();
    let pooled: Vec<f64> = a.iter().chain(&b).copied().collect();
    let n = pooled.len() as f64;
    let mut tie_term = 0.0;
    for v in 1..=7 {
        let t = pooled.iter().filter(|&&x| x == v as f64).count() as f64;
        tie_term += t * t * t - t;
    }
    let var = 11.0 * 11.0 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let z = (r.statistic - 11.0 * (n + 1.0) / 2.0 + 0.5) / var.sqrt();
    assert!((r.z - z).abs() < 1e-12);
    assert!(r.p_value < 0.05);
}
