//! Tiling of an image into tolerance-sized squares.
//!
//! Each square of side `2T+1` contributes its center to the alphabet. Squares
//! on the right and bottom edges may overhang the image, so their centers can
//! lie outside it. Because the spacing equals the tolerance-region side, every
//! in-bounds pixel is within tolerance of exactly one center.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{ClickPoint, ImageSize, ToleranceConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    size: ImageSize,
    tolerance: u32,
    cols: u32,
    rows: u32,
    centers: Vec<ClickPoint>,
}

impl Alphabet {
    /// Tiles a `width x height` image. Centers are listed row-major from the
    /// top-left tile.
    pub fn build(width: u32, height: u32, cfg: ToleranceConfig) -> Result<Self> {
        let size = ImageSize::new(width, height)?;
        let t = cfg.tolerance;
        let side = cfg.region_side();
        let cols = width.div_ceil(side);
        let rows = height.div_ceil(side);
        let centers = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| ClickPoint::new(t + side * j, t + side * i)))
            .collect();
        Ok(Self {
            size,
            tolerance: t,
            cols,
            rows,
            centers,
        })
    }

    pub fn size(&self) -> ImageSize {
        self.size
    }

    pub fn tolerance(&self) -> u32 {
        self.tolerance
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn centers(&self) -> &[ClickPoint] {
        &self.centers
    }

    pub fn center(&self, index: usize) -> ClickPoint {
        self.centers[index]
    }

    fn side(&self) -> u32 {
        2 * self.tolerance + 1
    }

    /// Row-major index of the tile containing the in-bounds pixel `p`.
    pub fn tile_index(&self, p: ClickPoint) -> Result<usize> {
        self.size.check(p)?;
        let side = self.side();
        Ok(((p.y / side) * self.cols + p.x / side) as usize)
    }

    /// The unique center whose tolerance region contains `p`.
    pub fn snap(&self, p: ClickPoint) -> Result<ClickPoint> {
        Ok(self.centers[self.tile_index(p)?])
    }

    /// Index of `c` if it is one of the alphabet centers.
    pub fn index_of_center(&self, c: ClickPoint) -> Result<usize> {
        let side = self.side();
        let not_center = || Error::NotAlphabetCenter { x: c.x, y: c.y };
        if c.x < self.tolerance || c.y < self.tolerance {
            return Err(not_center());
        }
        let (dx, dy) = (c.x - self.tolerance, c.y - self.tolerance);
        if dx % side != 0 || dy % side != 0 {
            return Err(not_center());
        }
        let (j, i) = (dx / side, dy / side);
        if j >= self.cols || i >= self.rows {
            return Err(not_center());
        }
        Ok((i * self.cols + j) as usize)
    }

    /// Writes `index,x,y` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,x,y")?;
        for (i, c) in self.centers.iter().enumerate() {
            writeln!(out, "{i},{},{}", c.x, c.y)?;
        }
        Ok(())
    }
}
