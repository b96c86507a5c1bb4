use crate::error::{Result, StatsError};

/// Bonferroni adjustment for `m` tests: each p becomes `min(1, p * m)`.
pub fn bonferroni(p_values: &[f64], m: usize) -> Result<Vec<f64>> {
    if m < p_values.len() {
        return Err(StatsError::CorrectionTooSmall {
            m,
            len: p_values.len(),
        });
    }
    Ok(p_values.iter().map(|&p| (p * m as f64).min(1.0)).collect())
}
