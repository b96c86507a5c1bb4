//! Otsu's threshold, compared in exact integer arithmetic.
//!
//! For a threshold `t`, class 0 holds values `<= t` and class 1 values `> t`.
//! With counts `n0, n1` and value sums `s0, s1`, the between-class variance is
//! proportional to `(n1 s0 - n0 s1)^2 / (n0 n1)`, so candidates can be ranked
//! by cross-multiplication without rounding.

use std::cmp::Ordering;

use crate::map::SaliencyMap;

/// `a * b` as a 256-bit number `(high, low)`.
fn mul_wide(a: u128, b: u64) -> (u128, u128) {
    let b = u128::from(b);
    let lo = (a & u128::from(u64::MAX)) * b;
    let hi = (a >> 64) * b;
    let (low, carry) = lo.overflowing_add(hi << 64);
    ((hi >> 64) + u128::from(carry), low)
}

#[derive(Clone, Copy)]
struct Score {
    num: u128,
    den: u64,
}

impl Score {
    fn cmp(&self, other: &Score) -> Ordering {
        mul_wide(self.num, other.den).cmp(&mul_wide(other.num, self.den))
    }
}

/// Threshold maximizing between-class variance; the smallest such threshold
/// wins ties. A histogram with a single occupied bin yields 0.
///
/// # Panics
/// If the total count reaches 2^28, where the exact products stop fitting.
pub fn otsu_threshold_from_histogram(hist: &[u64; 256]) -> u8 {
    let total: u64 = hist.iter().sum();
    assert!(total < 1 << 28, "histogram too large for exact Otsu");
    let sum: u64 = hist.iter().enumerate().map(|(v, &c)| v as u64 * c).sum();
    let (mut n0, mut s0) = (0u64, 0u64);
    let mut best = (0u8, Score { num: 0, den: 1 });
    for t in 0..=255u8 {
        n0 += hist[t as usize];
        s0 += u64::from(t) * hist[t as usize];
        let (n1, s1) = (total - n0, sum - s0);
        if n0 == 0 || n1 == 0 {
            continue;
        }
        let diff = (i128::from(n1) * i128::from(s0) - i128::from(n0) * i128::from(s1)).unsigned_abs();
        let score = Score {
            num: diff * diff,
            den: n0 * n1,
        };
        if score.cmp(&best.1) == Ordering::Greater {
            best = (t, score);
        }
    }
    best.0
}

pub fn otsu_threshold(map: &SaliencyMap) -> u8 {
    otsu_threshold_from_histogram(&map.histogram())
}
