use serde::{Deserialize, Serialize};

use crate::components::{connected_components, BinaryGrid};
use crate::map::SaliencyMap;
use crate::otsu::otsu_threshold;

pub const FEATURE_NAMES: [&str; 6] = [
    "salient_proportion",
    "all_pixel_variance",
    "salient_pixel_variance",
    "num_regions",
    "region_distance",
    "high_saliency_proportion",
];

/// Six-number summary of how saliency is spread over a map.
///
/// Variances are population variances of the 0..=255 values. Regions are
/// 8-connected groups of pixels strictly above the Otsu threshold;
/// `region_distance` is the mean Euclidean distance over all pairs of region
/// centroids (0 with fewer than two regions).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub salient_proportion: f64,
    pub all_pixel_variance: f64,
    pub salient_pixel_variance: f64,
    pub num_regions: f64,
    pub region_distance: f64,
    pub high_saliency_proportion: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.salient_proportion,
            self.all_pixel_variance,
            self.salient_pixel_variance,
            self.num_regions,
            self.region_distance,
            self.high_saliency_proportion,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self {
            salient_proportion: a[0],
            all_pixel_variance: a[1],
            salient_pixel_variance: a[2],
            num_regions: a[3],
            region_distance: a[4],
            high_saliency_proportion: a[5],
        }
    }
}

/// Population variance from a value histogram restricted to `range`.
fn histogram_variance(hist: &[u64; 256], range: std::ops::RangeInclusive<usize>) -> (u64, f64) {
    let (mut n, mut sum, mut sum_sq) = (0u64, 0u128, 0u128);
    for v in range {
        let c = hist[v];
        n += c;
        sum += (v as u128) * u128::from(c);
        sum_sq += (v as u128 * v as u128) * u128::from(c);
    }
    if n == 0 {
        return (0, 0.0);
    }
    // n * sum_sq - sum^2 is exact in integers.
    let spread = u128::from(n) * sum_sq - sum * sum;
    (n, spread as f64 / (n as f64 * n as f64))
}

pub fn extract_features(map: &SaliencyMap) -> FeatureVector {
    let hist = map.histogram();
    let total = map.values().len() as f64;
    let (_, all_var) = histogram_variance(&hist, 0..=255);
    let (nonzero, salient_var) = histogram_variance(&hist, 1..=255);

    let threshold = otsu_threshold(map);
    let grid = BinaryGrid::above(map, threshold);
    let high = grid.cells.iter().filter(|&&c| c).count() as f64;
    let regions = connected_components(&grid);

    let mut pair_sum = 0.0;
    let mut pairs = 0u64;
    for (i, a) in regions.iter().enumerate() {
        for b in &regions[i + 1..] {
            pair_sum += (a.centroid.0 - b.centroid.0).hypot(a.centroid.1 - b.centroid.1);
            pairs += 1;
        }
    }

    FeatureVector {
        salient_proportion: nonzero as f64 / total,
        all_pixel_variance: all_var,
        salient_pixel_variance: salient_var,
        num_regions: regions.len() as f64,
        region_distance: if pairs == 0 { 0.0 } else { pair_sum / pairs as f64 },
        high_saliency_proportion: high / total,
    }
}
