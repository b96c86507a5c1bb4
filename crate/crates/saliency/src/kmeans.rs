//! Lloyd's k-means with greedy k-means++ seeding.
//!
//! Iteration stops at an assignment fixpoint, when inertia improves by less
//! than [`REL_TOL`] relative to the previous iteration, or after
//! [`MAX_ITER`] assignment steps. A cluster that loses all members is
//! re-seeded at the point farthest from its current centroid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SaliencyError};

pub const MAX_ITER: usize = 300;
pub const REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansFit {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances from each point to its centroid.
    pub inertia: f64,
    /// Inertia after each assignment step.
    pub inertia_history: Vec<f64>,
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    centroids
        .iter()
        .enumerate()
        .map(|(j, c)| (j, dist2(point, c)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

fn validate(data: &[Vec<f64>], k: usize) -> Result<()> {
    if data.is_empty() {
        return Err(SaliencyError::InvalidInput("no points to cluster".into()));
    }
    if k == 0 || k > data.len() {
        return Err(SaliencyError::InvalidInput(format!(
            "k = {k} must be between 1 and the number of points ({})",
            data.len()
        )));
    }
    let dim = data[0].len();
    if data.iter().any(|r| r.len() != dim || r.iter().any(|v| !v.is_finite())) {
        return Err(SaliencyError::InvalidInput(
            "points must share one dimension and be finite".into(),
        ));
    }
    Ok(())
}

/// Index drawn with probability proportional to `weights` (all finite,
/// non-negative, positive total).
fn sample_weighted(weights: &[f64], total: f64, rng: &mut ChaCha8Rng) -> usize {
    let mut target = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 && target < w {
            return i;
        }
        target -= w;
    }
    // rounding ran past the end: take the last positive weight
    weights.iter().rposition(|&w| w > 0.0).unwrap_or(weights.len() - 1)
}

/// Greedy k-means++: each new center is the best of several D^2-weighted
/// candidates, judged by the potential it leaves behind.
fn seed_plus_plus(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.len();
    let trials = 2 + (k as f64).ln().floor() as usize;
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = data.iter().map(|p| dist2(p, &data[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        if total <= 0.0 {
            // every remaining point coincides with a chosen center
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            let next = free[rng.random_range(0..free.len())];
            chosen.push(next);
            continue;
        }
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for _ in 0..trials {
            let cand = sample_weighted(&d2, total, rng);
            let updated: Vec<f64> = data
                .iter()
                .zip(&d2)
                .map(|(p, &d)| d.min(dist2(p, &data[cand])))
                .collect();
            let potential: f64 = updated.iter().sum();
            if best.as_ref().is_none_or(|(b, _, _)| potential < *b) {
                best = Some((potential, cand, updated));
            }
        }
        let (_, next, updated) = best.expect("at least two trials");
        chosen.push(next);
        d2 = updated;
    }
    chosen.into_iter().map(|i| data[i].clone()).collect()
}

/// Clusters `data` into `k` groups. Deterministic for a given `seed`.
pub fn kmeans(data: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansFit> {
    validate(data, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_plus_plus(data, k, &mut rng);
    let dim = data[0].len();
    let mut assignments: Vec<usize> = Vec::new();
    let mut history: Vec<f64> = Vec::new();

    for _ in 0..MAX_ITER {
        let (next, dists): (Vec<usize>, Vec<f64>) =
            data.iter().map(|p| nearest(p, &centroids)).unzip();
        let inertia: f64 = dists.iter().sum();
        let fixpoint = next == assignments;
        let stalled = history
            .last()
            .is_some_and(|&prev| prev == 0.0 || (prev - inertia) / prev < REL_TOL);
        assignments = next;
        history.push(inertia);
        if fixpoint || stalled {
            break;
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &j) in data.iter().zip(&assignments) {
            counts[j] += 1;
            for (s, v) in sums[j].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut taken: Vec<usize> = Vec::new();
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = sums[j].iter().map(|s| s / counts[j] as f64).collect();
            }
        }
        for j in (0..k).filter(|&j| counts[j] == 0) {
            let far = (0..data.len())
                .filter(|i| !taken.contains(i))
                .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                .expect("k <= n leaves a point to re-seed from");
            taken.push(far);
            centroids[j] = data[far].clone();
        }
    }

    Ok(KMeansFit {
        k,
        inertia: *history.last().expect("at least one iteration"),
        inertia_history: history,
        assignments,
        centroids,
    })
}

/// Lowest inertia over `restarts` seeds for each `k`, forced non-increasing
/// in `k` (a larger `k` can always match a smaller one's partition).
pub fn inertia_curve(
    data: &[Vec<f64>],
    ks: std::ops::RangeInclusive<usize>,
    seed: u64,
    restarts: usize,
) -> Result<Vec<(usize, f64)>> {
    let mut out: Vec<(usize, f64)> = Vec::new();
    for k in ks {
        let mut best = f64::INFINITY;
        for r in 0..restarts.max(1) {
            best = best.min(kmeans(data, k, seed.wrapping_add(r as u64))?.inertia);
        }
        if let Some(&(_, prev)) = out.last() {
            best = best.min(prev);
        }
        out.push((k, best));
    }
    Ok(out)
}
