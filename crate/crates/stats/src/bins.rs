use passpoints_core::ClickPoint;
use serde::{Deserialize, Serialize};

use crate::error::{Result, StatsError};

/// Two groups (rows) by two image halves (columns: left, right).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BinTable2x2 {
    pub counts: [[u64; 2]; 2],
}

impl BinTable2x2 {
    pub fn from_rows(first: [u64; 2], second: [u64; 2]) -> Self {
        Self {
            counts: [first, second],
        }
    }
}

/// Counts points in the left (`x < width/2`) and right (`x >= width/2`)
/// halves of the image. For odd widths the midline is `width / 2` rounded
/// down, so the middle column belongs to the right half.
pub fn bin_points(points: &[ClickPoint], width: u32) -> Result<[u64; 2]> {
    let mid = width / 2;
    let mut bins = [0u64; 2];
    for p in points {
        if p.x >= width {
            return Err(StatsError::PointOutside { x: p.x, width });
        }
        bins[usize::from(p.x >= mid)] += 1;
    }
    Ok(bins)
}
