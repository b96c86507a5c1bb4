//! Fisher's exact test on a 2x2 table.

use crate::bins::BinTable2x2;
use crate::result::{Alternative, EffectSize, Method, TestResult};

/// Relative slack when deciding which tables are "no more likely" than the
/// observed one, so rounding in the log-factorials cannot drop a tie.
const RELATIVE_TIE: f64 = 1e-7;

fn ln_factorials(n: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Exact test of independence between rows and columns.
///
/// The top-left count follows a hypergeometric distribution given the
/// margins. `Less` and `Greater` refer to that cell; the two-sided p-value
/// sums all tables no more probable than the observed one. The effect size
/// is the sample odds ratio `ad/bc`, infinite when only `bc` is zero and NaN
/// when both products are zero.
pub fn fisher_exact_2x2(table: &BinTable2x2, alternative: Alternative) -> TestResult {
    let [[a, b], [c, d]] = table.counts;
    let row1 = a + b;
    let row2 = c + d;
    let col1 = a + c;
    let n = row1 + row2;
    let lf = ln_factorials(n);
    let ln_choose = |n: u64, k: u64| lf[n as usize] - lf[k as usize] - lf[(n - k) as usize];
    let ln_total = ln_choose(n, col1);
    let prob = |x: u64| (ln_choose(row1, x) + ln_choose(row2, col1 - x) - ln_total).exp();

    let lo = col1.saturating_sub(row2);
    let hi = row1.min(col1);
    let observed = prob(a);
    let p = match alternative {
        Alternative::Less => (lo..=a).map(prob).sum(),
        Alternative::Greater => (a..=hi).map(prob).sum(),
        Alternative::TwoSided => (lo..=hi)
            .map(prob)
            .filter(|&q| q <= observed * (1.0 + RELATIVE_TIE))
            .sum::<f64>(),
    };

    let (ad, bc) = (a as f64 * d as f64, b as f64 * c as f64);
    let odds = if bc == 0.0 {
        if ad == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    } else {
        ad / bc
    };

    TestResult {
        method: Method::FisherExact,
        alternative,
        statistic: a as f64,
        p_value: p.clamp(0.0, 1.0),
        effect_size: odds,
        effect_size_kind: EffectSize::OddsRatio,
        n1: row1 as usize,
        n2: row2 as usize,
        df: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(a: u64, b: u64, c: u64, d: u64) -> BinTable2x2 {
        BinTable2x2 {
            counts: [[a, b], [c, d]],
        }
    }

    #[test]
    fn empty_column_gives_one() {
        let r = fisher_exact_2x2(&t(0, 7, 0, 4), Alternative::TwoSided);
        assert_eq!(r.p_value, 1.0);
        assert!(r.effect_size.is_nan());
    }

    #[test]
    fn classic_table() {
        // scipy.stats.fisher_exact([[1, 9], [11, 3]])
        let r = fisher_exact_2x2(&t(1, 9, 11, 3), Alternative::TwoSided);
        assert!((r.p_value - 0.0027594561852200836).abs() < 1e-12, "{}", r.p_value);
        assert!((r.effect_size - 1.0 / 33.0).abs() < 1e-15);
    }

    #[test]
    fn zero_cell_odds_ratio_is_infinite() {
        let r = fisher_exact_2x2(&t(5, 0, 2, 6), Alternative::Greater);
        assert!(r.effect_size.is_infinite());
        assert!(r.p_value > 0.0 && r.p_value < 1.0);
    }

    #[test]
    fn one_sided_tails_overlap_at_observed() {
        let table = t(3, 4, 5, 2);
        let less = fisher_exact_2x2(&table, Alternative::Less).p_value;
        let greater = fisher_exact_2x2(&table, Alternative::Greater).p_value;
        let two = fisher_exact_2x2(&table, Alternative::TwoSided).p_value;
        assert!(less + greater > 1.0);
        assert!(two >= less.min(greater));
    }

    #[test]
    fn empty_table() {
        let r = fisher_exact_2x2(&t(0, 0, 0, 0), Alternative::TwoSided);
        assert_eq!(r.p_value, 1.0);
    }
}
