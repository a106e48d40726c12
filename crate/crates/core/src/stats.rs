//! Two-sided Wilcoxon rank-sum test.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Smallest sample size accepted by [`rank_sum_test`].
pub const MIN_SAMPLE: usize = 5;
/// Both samples at or below this size use the exact null distribution.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumResult {
    /// Sum of the (mid)ranks of the first sample.
    pub statistic: f64,
    /// Normal-approximation score (continuity corrected); 0 when the variance vanishes.
    pub z: f64,
    pub p_value: f64,
    pub exact: bool,
}

fn midranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Tests whether `a` and `b` come from the same distribution.
///
/// Ties get midranks. When both samples have at most [`EXACT_LIMIT`] values
/// the p-value comes from the exact permutation distribution of the rank
/// sum; otherwise from the normal approximation with tie correction.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.len() < MIN_SAMPLE || b.len() < MIN_SAMPLE {
        return Err(Error::InvalidParameter(format!(
            "rank-sum test needs at least {MIN_SAMPLE} values per sample, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("rank-sum samples must be finite".into()));
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let w: f64 = ranks[..a.len()].iter().sum();

    let mean = n1 * (n + 1.0) / 2.0;
    let mut tie_term = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    for group in sorted.chunk_by(|x, y| x == y) {
        let t = group.len() as f64;
        tie_term += t * t * t - t;
    }
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    let z = if var > 0.0 {
        let diff = w - mean;
        let corrected = diff.abs() - 0.5;
        corrected.max(0.0).copysign(diff) / var.sqrt()
    } else {
        0.0
    };

    let exact = a.len() <= EXACT_LIMIT && b.len() <= EXACT_LIMIT;
    let p_value = if var <= 0.0 {
        1.0
    } else if exact {
        exact_p(&ranks, a.len(), w)
    } else {
        erfc(z.abs() / std::f64::consts::SQRT_2).min(1.0)
    };
    Ok(RankSumResult { statistic: w, z, p_value, exact })
}

/// Two-sided exact p-value: counts subsets of size `k` of the doubled
/// midranks by their sum.
fn exact_p(ranks: &[f64], k: usize, w: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // counts[j][s]: subsets of size j with doubled-rank sum s.
    let mut counts = vec![vec![0.0f64; max_sum + 1]; k + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for j in (1..=k).rev() {
            for s in (r..=max_sum).rev() {
                let add = counts[j - 1][s - r];
                if add != 0.0 {
                    counts[j][s] += add;
                }
            }
        }
    }
    let total: f64 = counts[k].iter().sum();
    let target = (w * 2.0).round() as usize;
    let lower: f64 = counts[k][..=target].iter().sum();
    let upper: f64 = counts[k][target..].iter().sum();
    (2.0 * lower.min(upper) / total).min(1.0)
}
