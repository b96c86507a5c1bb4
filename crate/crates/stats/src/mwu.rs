//! Mann-Whitney U test.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Result, StatsError};
use crate::result::{Alternative, EffectSize, Method, TestResult};

/// Largest combined sample size for which the exact null distribution is
/// used (when there are no ties).
pub const EXACT_MAX_TOTAL: usize = 20;

/// Midranks of `values` (1-based), plus the tie group sizes.
fn midranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end share ranks start+1..=end
        let rank = (start + end + 1) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    (ranks, ties)
}

/// Number of arrangements of `n1` first-sample and `n2` second-sample
/// observations giving each U value, `0..=n1*n2`.
fn u_frequencies(n1: usize, n2: usize) -> Vec<f64> {
    // table[m][n][u] via the recurrence f(m,n,u) = f(m-1,n,u-n) + f(m,n-1,u);
    // rolled over m to keep memory at O(n2 * n1 * n2).
    let max_u = n1 * n2;
    let mut prev: Vec<Vec<f64>> = (0..=n2)
        .map(|_| {
            let mut v = vec![0.0; max_u + 1];
            v[0] = 1.0;
            v
        })
        .collect();
    for m in 1..=n1 {
        let mut cur: Vec<Vec<f64>> = vec![vec![0.0; max_u + 1]; n2 + 1];
        cur[0][0] = 1.0;
        for n in 1..=n2 {
            for u in 0..=m * n {
                let with_first_largest = if u >= n { prev[n][u - n] } else { 0.0 };
                cur[n][u] = with_first_largest + cur[n - 1][u];
            }
        }
        prev = cur;
    }
    prev.swap_remove(n2)
}

fn check(sample: &[f64], name: &'static str) -> Result<()> {
    if sample.is_empty() {
        return Err(StatsError::EmptySample(name));
    }
    if sample.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite(name));
    }
    Ok(())
}

/// Mann-Whitney U test of `a` against `b`.
///
/// The reported statistic is U for `a`: the number of pairs in which the `a`
/// value exceeds the `b` value, counting ties as one half. `Less` tests
/// whether `a` tends to be smaller than `b`.
///
/// The exact null distribution is used when the combined size is at most
/// [`EXACT_MAX_TOTAL`] and no value repeats; otherwise the normal
/// approximation with tie and continuity corrections. The effect size is the
/// rank-biserial correlation `1 - 2U/(n1 n2)`.
pub fn mann_whitney_u(a: &[f64], b: &[f64], alternative: Alternative) -> Result<TestResult> {
    check(a, "a")?;
    check(b, "b")?;
    let (n1, n2) = (a.len(), b.len());
    let combined: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = midranks(&combined);
    let rank_sum_a: f64 = ranks[..n1].iter().sum();
    let u = rank_sum_a - (n1 * (n1 + 1)) as f64 / 2.0;
    let pairs = (n1 * n2) as f64;
    let effect = 1.0 - 2.0 * u / pairs;

    let (method, p) = if n1 + n2 <= EXACT_MAX_TOTAL && ties.is_empty() {
        (Method::MannWhitneyExact, exact_p(u, n1, n2, alternative))
    } else {
        (Method::MannWhitneyNormal, normal_p(u, n1, n2, &ties, alternative))
    };

    Ok(TestResult {
        method,
        alternative,
        statistic: u,
        p_value: p.clamp(0.0, 1.0),
        effect_size: effect,
        effect_size_kind: EffectSize::RankBiserial,
        n1,
        n2,
        df: None,
    })
}

fn exact_p(u: f64, n1: usize, n2: usize, alternative: Alternative) -> f64 {
    let freq = u_frequencies(n1, n2);
    let total: f64 = freq.iter().sum();
    // Without ties U is an integer.
    let u = u.round() as usize;
    let lower = freq[..=u].iter().sum::<f64>() / total;
    let upper = freq[u..].iter().sum::<f64>() / total;
    match alternative {
        Alternative::Less => lower,
        Alternative::Greater => upper,
        Alternative::TwoSided => (2.0 * lower.min(upper)).min(1.0),
    }
}

fn normal_p(u: f64, n1: usize, n2: usize, ties: &[usize], alternative: Alternative) -> f64 {
    let (f1, f2) = (n1 as f64, n2 as f64);
    let n = f1 + f2;
    let mean = f1 * f2 / 2.0;
    let tie_term: f64 = ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum();
    let var = f1 * f2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        // every observation identical
        return 1.0;
    }
    let sd = var.sqrt();
    let z = Normal::standard();
    match alternative {
        Alternative::Less => z.cdf((u - mean + 0.5) / sd),
        Alternative::Greater => z.sf((u - mean - 0.5) / sd),
        Alternative::TwoSided => {
            let dev = ((u - mean).abs() - 0.5).max(0.0);
            (2.0 * z.sf(dev / sd)).min(1.0)
        }
    }
}
