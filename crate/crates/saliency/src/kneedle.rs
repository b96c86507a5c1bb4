//! Kneedle knee detection for a decreasing, convex inertia curve.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SaliencyError};

/// Kneedle sensitivity parameter.
pub const SENSITIVITY: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KneeResult {
    pub k: usize,
    /// False when the difference curve never falls below the Kneedle
    /// threshold after its maximum (no pronounced knee).
    pub confident: bool,
    /// Normalized distance above the diagonal at each k.
    pub difference: Vec<f64>,
}

/// Picks the knee of `curve`, a list of `(k, inertia)` pairs with strictly
/// increasing `k` and non-increasing inertia.
///
/// Both axes are rescaled to `[0, 1]`, inertia is flipped so the curve
/// rises, and the knee is the maximum of its height above the diagonal
/// (earliest on ties).
pub fn kneedle_select_k(curve: &[(usize, f64)]) -> Result<KneeResult> {
    if curve.len() < 3 {
        return Err(SaliencyError::InvalidInput(format!(
            "Kneedle needs at least 3 points, got {}",
            curve.len()
        )));
    }
    if curve.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(SaliencyError::InvalidInput("k values must increase".into()));
    }
    if curve.windows(2).any(|w| w[1].1 > w[0].1) || curve.iter().any(|p| !p.1.is_finite()) {
        return Err(SaliencyError::InvalidInput(
            "inertia must be finite and non-increasing in k".into(),
        ));
    }
    let (k_min, k_max) = (curve[0].0 as f64, curve[curve.len() - 1].0 as f64);
    let (y_max, y_min) = (curve[0].1, curve[curve.len() - 1].1);
    let span = y_max - y_min;
    let difference: Vec<f64> = curve
        .iter()
        .map(|&(k, y)| {
            let x = (k as f64 - k_min) / (k_max - k_min);
            let rising = if span > 0.0 { 1.0 - (y - y_min) / span } else { x };
            rising - x
        })
        .collect();

    let (best, peak) = difference
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
    let mean_step = 1.0 / (curve.len() - 1) as f64;
    let threshold = peak - SENSITIVITY * mean_step;
    let confident = peak > 0.0 && difference[best + 1..].iter().any(|&d| d < threshold);

    Ok(KneeResult {
        k: curve[best].0,
        confident,
        difference,
    })
}
