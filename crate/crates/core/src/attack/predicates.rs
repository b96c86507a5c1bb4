//! Click-order pattern predicates, written directly over the step deltas.
//!
//! [`Dictionary`](super::Dictionary) encodes the same patterns as a per-step
//! automaton; the two are kept independent so each can check the other.

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::point::{five_points, ClickPoint, PASSWORD_LEN};

use super::spec::{AttackFamily, AttackSpec, LodMetric};

type Seq = [ClickPoint; PASSWORD_LEN];

fn deltas(seq: &Seq, axis: fn(ClickPoint) -> u32) -> [i64; PASSWORD_LEN - 1] {
    std::array::from_fn(|i| i64::from(axis(seq[i + 1])) - i64::from(axis(seq[i])))
}

fn xs(p: ClickPoint) -> u32 {
    p.x
}

fn ys(p: ClickPoint) -> u32 {
    p.y
}

/// True if some direction exists that every step breaks by at most `tau`.
///
/// Steps of zero satisfy both directions, so constant sequences qualify.
pub fn tau_monotone(steps: &[i64], tau: u32) -> bool {
    let tau = i64::from(tau);
    steps.iter().all(|&d| d >= -tau) || steps.iter().all(|&d| d <= tau)
}

pub(crate) fn line_shape(seq: &Seq, tau: u32) -> bool {
    let (dx, dy) = (deltas(seq, xs), deltas(seq, ys));
    let tau = i64::from(tau);
    let along = |d: &[i64]| tau_monotone(d, 0);
    let across = |d: &[i64]| d.iter().all(|v| v.abs() <= tau);
    (along(&dx) && across(&dy)) || (along(&dy) && across(&dx))
}

pub(crate) fn diag_shape(seq: &Seq, tau: u32) -> bool {
    tau_monotone(&deltas(seq, xs), tau) && tau_monotone(&deltas(seq, ys), tau)
}

pub(crate) fn lod_shape(seq: &Seq, tau: u32, base: u32, metric: LodMetric) -> bool {
    let reach = u64::from(base) + u64::from(tau);
    seq.windows(2).all(|w| match metric {
        LodMetric::Chebyshev => u64::from(w[0].chebyshev(w[1])) <= reach,
        LodMetric::Euclidean => w[0].euclidean_sq(w[1]) <= reach * reach,
    })
}

impl AttackSpec {
    /// Applies this spec's pattern to five points without checking that they
    /// are alphabet centers.
    pub fn matches_shape(&self, seq: &Seq) -> bool {
        match self.family {
            AttackFamily::Line => line_shape(seq, self.tau),
            AttackFamily::Diag => diag_shape(seq, self.tau),
            AttackFamily::Lod => lod_shape(seq, self.tau, self.lod_base, self.lod_metric),
        }
    }

    /// Whether `seq`, five alphabet centers, is an entry of this dictionary.
    pub fn accepts(&self, alphabet: &Alphabet, seq: &[ClickPoint]) -> Result<bool> {
        self.validate()?;
        let seq = centers(alphabet, seq)?;
        Ok(self.matches_shape(&seq))
    }
}

fn centers(alphabet: &Alphabet, seq: &[ClickPoint]) -> Result<Seq> {
    let seq = five_points(seq)?;
    for &p in &seq {
        alphabet.index_of_center(p)?;
    }
    Ok(seq)
}

pub fn is_line(alphabet: &Alphabet, seq: &[ClickPoint], tau: u32) -> Result<bool> {
    AttackSpec::line(tau).accepts(alphabet, seq)
}

pub fn is_diag(alphabet: &Alphabet, seq: &[ClickPoint], tau: u32) -> Result<bool> {
    AttackSpec::diag(tau).accepts(alphabet, seq)
}

pub fn is_lod(alphabet: &Alphabet, seq: &[ClickPoint], tau: u32, lod_base: u32) -> Result<bool> {
    AttackSpec::lod(tau, lod_base).accepts(alphabet, seq)
}
