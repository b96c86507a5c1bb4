//! Counting and enumerating attack dictionaries without materializing them.
//!
//! Each family is a small set of hypotheses (a line direction, a pair of
//! coordinate directions, or a single step bound). A sequence belongs to the
//! dictionary if at least one hypothesis holds on every step. For every
//! ordered pair of alphabet centers we precompute the bitmask of hypotheses
//! the step between them keeps alive; counting is then a dynamic program over
//! (position, last center, alive mask) and enumeration is a depth-first walk
//! that prunes as soon as the mask empties.

use crate::alphabet::Alphabet;
use crate::error::Result;
use crate::point::{ClickPoint, PASSWORD_LEN};

use super::spec::{AttackFamily, AttackSpec, LodMetric};

const MASKS: usize = 16;

fn full_mask(family: AttackFamily) -> u8 {
    match family {
        AttackFamily::Line | AttackFamily::Diag => 0b1111,
        AttackFamily::Lod => 0b1,
    }
}

/// Hypotheses kept alive by the single step `from -> to`.
fn step_mask(spec: &AttackSpec, from: ClickPoint, to: ClickPoint) -> u8 {
    let dx = i64::from(to.x) - i64::from(from.x);
    let dy = i64::from(to.y) - i64::from(from.y);
    let tau = i64::from(spec.tau);
    let bit = |cond: bool, b: u8| if cond { 1u8 << b } else { 0 };
    match spec.family {
        // bits: horizontal rising x, horizontal falling x,
        //       vertical rising y, vertical falling y
        AttackFamily::Line => {
            bit(dx >= 0 && dy.abs() <= tau, 0)
                | bit(dx <= 0 && dy.abs() <= tau, 1)
                | bit(dy >= 0 && dx.abs() <= tau, 2)
                | bit(dy <= 0 && dx.abs() <= tau, 3)
        }
        // bits: (x up, y up), (x up, y down), (x down, y up), (x down, y down)
        AttackFamily::Diag => {
            let (xu, xd) = (dx >= -tau, dx <= tau);
            let (yu, yd) = (dy >= -tau, dy <= tau);
            bit(xu && yu, 0) | bit(xu && yd, 1) | bit(xd && yu, 2) | bit(xd && yd, 3)
        }
        AttackFamily::Lod => {
            let reach = u64::from(spec.lod_base) + u64::from(spec.tau);
            let ok = match spec.lod_metric {
                LodMetric::Chebyshev => u64::from(from.chebyshev(to)) <= reach,
                LodMetric::Euclidean => from.euclidean_sq(to) <= reach * reach,
            };
            bit(ok, 0)
        }
    }
}

/// One attack dictionary over a fixed alphabet.
///
/// Construction costs `O(n^2)` time and bytes for an `n`-center alphabet
/// (about 0.5 MB for the 713-center study alphabet).
#[derive(Debug, Clone)]
pub struct Dictionary {
    spec: AttackSpec,
    centers: Vec<ClickPoint>,
    full: u8,
    transitions: Vec<u8>,
}

impl Dictionary {
    pub fn new(spec: AttackSpec, alphabet: &Alphabet) -> Result<Self> {
        spec.validate()?;
        let centers = alphabet.centers().to_vec();
        let transitions = centers
            .iter()
            .flat_map(|&from| centers.iter().map(move |&to| step_mask(&spec, from, to)))
            .collect();
        Ok(Self {
            spec,
            full: full_mask(spec.family),
            centers,
            transitions,
        })
    }

    pub fn spec(&self) -> &AttackSpec {
        &self.spec
    }

    pub fn alphabet_len(&self) -> usize {
        self.centers.len()
    }

    #[inline]
    fn step(&self, from: usize, to: usize) -> u8 {
        self.transitions[from * self.centers.len() + to]
    }

    /// Exact number of entries.
    pub fn count(&self) -> u128 {
        let n = self.centers.len();
        let mut ways = vec![0u128; n * MASKS];
        for last in 0..n {
            ways[last * MASKS + self.full as usize] = 1;
        }
        for _ in 1..PASSWORD_LEN {
            let mut next = vec![0u128; n * MASKS];
            for from in 0..n {
                let row = &ways[from * MASKS..(from + 1) * MASKS];
                if row.iter().all(|&w| w == 0) {
                    continue;
                }
                let step_row = &self.transitions[from * n..(from + 1) * n];
                for (to, &allowed) in step_row.iter().enumerate() {
                    if allowed == 0 {
                        continue;
                    }
                    for (mask, &w) in row.iter().enumerate() {
                        let alive = mask as u8 & allowed;
                        if w != 0 && alive != 0 {
                            next[to * MASKS + alive as usize] += w;
                        }
                    }
                }
            }
            ways = next;
        }
        ways.iter().sum()
    }

    /// Membership test for a sequence of alphabet indices.
    pub fn contains_indices(&self, seq: &[usize; PASSWORD_LEN]) -> bool {
        seq.windows(2)
            .try_fold(self.full, |mask, w| {
                let alive = mask & self.step(w[0], w[1]);
                (alive != 0).then_some(alive)
            })
            .is_some()
    }

    /// Entries as alphabet-index sequences, in lexicographic order.
    pub fn iter_indices(&self) -> DictionaryIter<'_> {
        DictionaryIter {
            dict: self,
            indices: [0; PASSWORD_LEN],
            masks: [0; PASSWORD_LEN],
            depth: 0,
            candidate: 0,
            done: self.centers.is_empty(),
        }
    }

    /// Entries as center sequences, in the same order as [`Self::iter_indices`].
    pub fn iter(&self) -> impl Iterator<Item = [ClickPoint; PASSWORD_LEN]> + '_ {
        self.iter_indices()
            .map(|idx| idx.map(|i| self.centers[i]))
    }
}

/// Depth-first enumeration with the same pruning as [`Dictionary::count`].
pub struct DictionaryIter<'a> {
    dict: &'a Dictionary,
    indices: [usize; PASSWORD_LEN],
    /// `masks[d]` is the alive mask after placing `indices[..=d]`.
    masks: [u8; PASSWORD_LEN],
    depth: usize,
    candidate: usize,
    done: bool,
}

impl Iterator for DictionaryIter<'_> {
    type Item = [usize; PASSWORD_LEN];

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.dict.centers.len();
        while !self.done {
            if self.candidate >= n {
                if self.depth == 0 {
                    self.done = true;
                    break;
                }
                self.depth -= 1;
                self.candidate = self.indices[self.depth] + 1;
                continue;
            }
            let c = self.candidate;
            let d = self.depth;
            let alive = if d == 0 {
                self.dict.full
            } else {
                self.masks[d - 1] & self.dict.step(self.indices[d - 1], c)
            };
            if alive == 0 {
                self.candidate += 1;
                continue;
            }
            self.indices[d] = c;
            self.masks[d] = alive;
            if d == PASSWORD_LEN - 1 {
                self.candidate = c + 1;
                return Some(self.indices);
            }
            self.depth = d + 1;
            self.candidate = 0;
        }
        None
    }
}
