//! 8-connected component labeling (two-pass, union-find).

use serde::{Deserialize, Serialize};

use crate::map::SaliencyMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryGrid {
    pub width: u32,
    pub height: u32,
    pub cells: Vec<bool>,
}

impl BinaryGrid {
    /// Pixels strictly above `threshold` are set.
    pub fn above(map: &SaliencyMap, threshold: u8) -> Self {
        Self {
            width: map.width(),
            height: map.height(),
            cells: map.values().iter().map(|&v| v > threshold).collect(),
        }
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.cells[(y * self.width + x) as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub pixel_count: u64,
    /// Mean column and mean row of the member pixels.
    pub centroid: (f64, f64),
}

fn find(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let up = parent[parent[i as usize] as usize];
        parent[i as usize] = up;
        i = up;
    }
    i
}

fn union(parent: &mut [u32], a: u32, b: u32) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        parent[hi as usize] = lo;
    }
}

/// Maximal 8-connected regions of set cells, ordered by their first pixel in
/// raster order.
pub fn connected_components(grid: &BinaryGrid) -> Vec<Region> {
    let (w, h) = (grid.width as usize, grid.height as usize);
    const NONE: u32 = u32::MAX;
    let mut labels = vec![NONE; w * h];
    let mut parent: Vec<u32> = Vec::new();

    for y in 0..h {
        for x in 0..w {
            if !grid.cells[y * w + x] {
                continue;
            }
            // Already-visited neighbours: W, NW, N, NE.
            let mut neighbours = [NONE; 4];
            if x > 0 {
                neighbours[0] = labels[y * w + x - 1];
            }
            if y > 0 {
                let up = (y - 1) * w;
                if x > 0 {
                    neighbours[1] = labels[up + x - 1];
                }
                neighbours[2] = labels[up + x];
                if x + 1 < w {
                    neighbours[3] = labels[up + x + 1];
                }
            }
            let mut label = NONE;
            for &n in neighbours.iter().filter(|&&n| n != NONE) {
                if label == NONE {
                    label = n;
                } else {
                    union(&mut parent, label, n);
                }
            }
            if label == NONE {
                label = parent.len() as u32;
                parent.push(label);
            }
            labels[y * w + x] = label;
        }
    }

    // Output slots are handed out on first encounter in raster order.
    let mut slot = vec![NONE; parent.len()];
    let mut sums: Vec<(u64, u64, u64)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let l = labels[y * w + x];
            if l == NONE {
                continue;
            }
            let root = find(&mut parent, l) as usize;
            if slot[root] == NONE {
                slot[root] = sums.len() as u32;
                sums.push((0, 0, 0));
            }
            let s = &mut sums[slot[root] as usize];
            s.0 += 1;
            s.1 += x as u64;
            s.2 += y as u64;
        }
    }
    sums.into_iter()
        .map(|(n, sx, sy)| Region {
            pixel_count: n,
            centroid: (sx as f64 / n as f64, sy as f64 / n as f64),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(rows: &[&str]) -> BinaryGrid {
        BinaryGrid {
            width: rows[0].len() as u32,
            height: rows.len() as u32,
            cells: rows.iter().flat_map(|r| r.chars().map(|c| c == '#')).collect(),
        }
    }

    #[test]
    fn filled_square() {
        let r = connected_components(&grid(&["....", ".##.", ".##.", "...."]));
        assert_eq!(r, vec![Region { pixel_count: 4, centroid: (1.5, 1.5) }]);
    }

    #[test]
    fn diagonal_touch_is_connected() {
        assert_eq!(connected_components(&grid(&["#.", ".#"])).len(), 1);
        assert_eq!(connected_components(&grid(&[".#", "#."])).len(), 1);
    }

    #[test]
    fn u_shape_merges() {
        let r = connected_components(&grid(&["#.#", "#.#", "###"]));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].pixel_count, 7);
    }

    #[test]
    fn separate_regions_in_raster_order() {
        let r = connected_components(&grid(&["..#", "...", "#.."]));
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].centroid, (2.0, 0.0));
        assert_eq!(r[1].centroid, (0.0, 2.0));
    }

    #[test]
    fn empty_grid() {
        assert!(connected_components(&grid(&["...", "..."])).is_empty());
    }
}
