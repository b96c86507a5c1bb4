//! Click-point heat maps: a Gaussian bump per point, scaled so the hottest
//! pixel is 255.

use std::io::Write;

use passpoints_core::{ClickPoint, ImageSize};

use crate::error::{Result, StatsError};

/// Kernel support radius in standard deviations; the truncated tail holds
/// less than 0.04% of the mass.
const SUPPORT_SIGMAS: f64 = 4.0;

/// An 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[(y * self.width + x) as usize]
    }

    /// Binary PGM (P5).
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.pixels)
    }
}

/// Unnormalized Gaussian weight at squared distance `d2`.
fn weight(d2: f64, sigma: f64) -> f64 {
    (-d2 / (2.0 * sigma * sigma)).exp()
}

/// Renders `points` onto a `size` canvas. An empty point list yields an
/// all-zero image. Output does not depend on the order of `points`.
pub fn heatmap(points: &[ClickPoint], size: ImageSize, sigma: f64) -> Result<GrayImage> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(StatsError::Sigma(sigma));
    }
    for p in points {
        size.check(*p)?;
    }
    let (w, h) = (size.width as usize, size.height as usize);
    let mut density = vec![0.0f64; w * h];
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let radius = (SUPPORT_SIGMAS * sigma).ceil() as i64;
    for p in &sorted {
        let (px, py) = (i64::from(p.x), i64::from(p.y));
        for y in (py - radius).max(0)..=(py + radius).min(h as i64 - 1) {
            for x in (px - radius).max(0)..=(px + radius).min(w as i64 - 1) {
                let d2 = ((x - px).pow(2) + (y - py).pow(2)) as f64;
                density[y as usize * w + x as usize] += weight(d2, sigma);
            }
        }
    }
    let peak = density.iter().copied().fold(0.0, f64::max);
    let pixels = if peak > 0.0 {
        density
            .iter()
            .map(|d| (255.0 * d / peak).round() as u8)
            .collect()
    } else {
        vec![0; w * h]
    };
    Ok(GrayImage {
        width: size.width,
        height: size.height,
        pixels,
    })
}
