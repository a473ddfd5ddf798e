//! Truncated simplicial sets.
//!
//! A [`SimplicialSet`] stores, for every level `k <= D`, its cells in
//! lexicographic order of their payloads together with face tables
//! `d_0..d_k` and (below the top level) degeneracy tables `s_0..s_k`.
//! Payloads are the canonical encodings of cells: a monotone vertex tuple for
//! a complex, the concatenation of component payloads for products, and the
//! lexicographically smallest member payload for a quotient class.

pub mod base;
pub mod map;
pub mod ops;
pub mod union_find;

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

pub use base::from_ordered_complex;
pub use map::SSetMap;
pub use ops::{collapse, power, quotient, sub_object};

/// Default enumeration cap, overridable through `FINSUB_CELL_CAP`.
pub const DEFAULT_CELL_CAP: u64 = 12_000_000;

pub fn cell_cap() -> u64 {
    std::env::var("FINSUB_CELL_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CELL_CAP)
}

pub(crate) fn check_cap(estimated: u128, cap: u64) -> Result<()> {
    if estimated > cap as u128 {
        Err(Error::CellCap { estimated, cap })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Level {
    pub width: usize,
    pub payload: Vec<u32>,
    pub faces: Vec<u32>,
    pub degeneracies: Vec<u32>,
    pub degenerate: Vec<bool>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.degenerate.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    name: String,
    levels: Vec<Level>,
    dimension_bound: Option<usize>,
}

impl SimplicialSet {
    /// Assembles a simplicial set from levels whose payloads and tables are
    /// filled in; the degeneracy flags are derived from the tables.
    pub(crate) fn from_levels(name: String, mut levels: Vec<Level>) -> Self {
        for k in 0..levels.len() {
            let n = levels[k].payload.len() / levels[k].width.max(1);
            levels[k].degenerate = vec![false; n];
        }
        for k in 0..levels.len().saturating_sub(1) {
            let (lo, hi) = levels.split_at_mut(k + 1);
            for &c in &lo[k].degeneracies {
                hi[0].degenerate[c as usize] = true;
            }
        }
        SimplicialSet {
            name,
            levels,
            dimension_bound: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    /// The top level `D`.
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn len(&self, level: usize) -> usize {
        self.levels[level].len()
    }

    pub fn total_cells(&self) -> usize {
        self.levels.iter().map(Level::len).sum()
    }

    pub fn payload_width(&self, level: usize) -> usize {
        self.levels[level].width
    }

    pub fn payload(&self, level: usize, cell: usize) -> &[u32] {
        let l = &self.levels[level];
        &l.payload[cell * l.width..(cell + 1) * l.width]
    }

    /// `d_i` of a cell at `level >= 1`.
    #[inline]
    pub fn face(&self, level: usize, cell: usize, i: usize) -> usize {
        self.levels[level].faces[cell * (level + 1) + i] as usize
    }

    /// `s_j` of a cell at `level < D`.
    #[inline]
    pub fn degeneracy(&self, level: usize, cell: usize, j: usize) -> usize {
        self.levels[level].degeneracies[cell * (level + 1) + j] as usize
    }

    #[inline]
    pub fn is_degenerate(&self, level: usize, cell: usize) -> bool {
        self.levels[level].degenerate[cell]
    }

    pub fn nondegenerate(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        self.levels[level]
            .degenerate
            .iter()
            .enumerate()
            .filter(|(_, d)| !**d)
            .map(|(i, _)| i)
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.levels
            .iter()
            .map(|l| l.degenerate.iter().filter(|d| !**d).count())
            .collect()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.levels.iter().map(Level::len).collect()
    }

    /// Euler characteristic of the nondegenerate cells through the truncation.
    pub fn euler_characteristic(&self) -> i64 {
        self.nondegenerate_counts()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Index of the cell with the given payload.
    pub fn find(&self, level: usize, payload: &[u32]) -> Option<usize> {
        let l = &self.levels[level];
        if payload.len() != l.width {
            return None;
        }
        let n = l.len();
        let pos = partition_point_flat(&l.payload, l.width, n, payload);
        (pos < n && self.payload(level, pos) == payload).then_some(pos)
    }

    /// Checks every simplicial identity whose terms lie within the truncation.
    pub fn check_identities(&self) -> Result<()> {
        let top = self.truncation();
        (0..=top).into_par_iter().try_for_each(|k| {
            for c in 0..self.len(k) {
                let fail = |identity: String| Error::Identity {
                    level: k,
                    cell: c,
                    identity,
                };
                if k >= 2 {
                    for j in 1..=k {
                        for i in 0..j {
                            let lhs = self.face(k - 1, self.face(k, c, j), i);
                            let rhs = self.face(k - 1, self.face(k, c, i), j - 1);
                            if lhs != rhs {
                                return Err(fail(format!("d{i} d{j} = d{} d{i}", j - 1)));
                            }
                        }
                    }
                }
                if k < top {
                    for j in 0..=k {
                        let s = self.degeneracy(k, c, j);
                        for i in 0..=k + 1 {
                            let lhs = self.face(k + 1, s, i);
                            let ok = if i == j || i == j + 1 {
                                lhs == c
                            } else if i < j {
                                lhs == self.degeneracy(k - 1, self.face(k, c, i), j - 1)
                            } else {
                                lhs == self.degeneracy(k - 1, self.face(k, c, i - 1), j)
                            };
                            if !ok {
                                return Err(fail(format!("d{i} s{j}")));
                            }
                        }
                        if k + 1 < top {
                            for i in 0..=j {
                                let lhs = self.degeneracy(k + 1, s, i);
                                let rhs = self.degeneracy(k + 1, self.degeneracy(k, c, i), j + 1);
                                if lhs != rhs {
                                    return Err(fail(format!("s{i} s{j} = s{} s{i}", j + 1)));
                                }
                            }
                        }
                    }
                }
            }
            Ok(())
        })
    }

    /// Fails if a nondegenerate cell lives above `bound`.
    pub fn check_dimension_bound(&self, bound: usize) -> Result<()> {
        for (level, &count) in self.nondegenerate_counts().iter().enumerate() {
            if level > bound && count > 0 {
                return Err(Error::DimensionBound {
                    level,
                    bound,
                    count,
                });
            }
        }
        Ok(())
    }

    /// Records that no nondegenerate cell lives above `bound`, in any level
    /// (not only those enumerated). Checked against the enumerated levels.
    pub fn set_dimension_bound(&mut self, bound: usize) -> Result<()> {
        self.check_dimension_bound(bound)?;
        self.dimension_bound = Some(bound);
        Ok(())
    }

    pub fn dimension_bound(&self) -> Option<usize> {
        self.dimension_bound
    }

    /// Human-readable dump: one line per cell with payload, degeneracy flag
    /// and face indices.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} (truncation {})", self.name, self.truncation());
        for k in 0..=self.truncation() {
            let _ = writeln!(s, "level {k}: {} cells", self.len(k));
            for c in 0..self.len(k) {
                let faces: Vec<usize> = if k == 0 {
                    vec![]
                } else {
                    (0..=k).map(|i| self.face(k, c, i)).collect()
                };
                let _ = writeln!(
                    s,
                    "  {c} {:?}{} faces {:?}",
                    self.payload(k, c),
                    if self.is_degenerate(k, c) { " deg" } else { "" },
                    faces
                );
            }
        }
        s
    }
}

/// First index in a sorted flat array of `n` records of `width` whose record
/// is not less than `key`.
pub(crate) fn partition_point_flat(flat: &[u32], width: usize, n: usize, key: &[u32]) -> usize {
    let (mut lo, mut hi) = (0, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if &flat[mid * width..(mid + 1) * width] < key {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Builds a simplicial set whose cells are identified by sorted flat keys.
///
/// `keys[k]` holds the level-`k` keys (sorted, `key_width(k)` words each);
/// `face`/`degen` write the key of `d_i`/`s_j` of a key into the buffer, and
/// `payload` writes the payload of a key. Key order must agree with payload
/// order.
pub(crate) struct KeyedLevels<'a> {
    pub name: String,
    pub keys: Vec<(usize, Vec<u32>)>,
    pub face: &'a (dyn Fn(usize, &[u32], usize, &mut Vec<u32>) + Sync),
    pub degen: &'a (dyn Fn(usize, &[u32], usize, &mut Vec<u32>) + Sync),
    pub payload: &'a (dyn Fn(usize, &[u32], &mut Vec<u32>) + Sync),
}

impl KeyedLevels<'_> {
    pub fn assemble(self) -> SimplicialSet {
        let top = self.keys.len() - 1;
        let lookup = |level: usize, key: &[u32]| -> u32 {
            let (w, flat) = &self.keys[level];
            let n = flat.len() / (*w).max(1);
            let pos = partition_point_flat(flat, *w, n, key);
            debug_assert!(pos < n && &flat[pos * w..(pos + 1) * w] == key, "missing key {key:?}");
            pos as u32
        };
        let levels: Vec<Level> = (0..=top)
            .into_par_iter()
            .map(|k| {
                let (w, flat) = &self.keys[k];
                let n = flat.len() / (*w).max(1);
                let mut payload = Vec::new();
                let mut buf = Vec::new();
                let mut width = 0;
                for c in 0..n {
                    buf.clear();
                    (self.payload)(k, &flat[c * w..(c + 1) * w], &mut buf);
                    width = buf.len();
                    payload.extend_from_slice(&buf);
                }
                let faces: Vec<u32> = if k == 0 {
                    Vec::new()
                } else {
                    (0..n)
                        .into_par_iter()
                        .flat_map_iter(|c| {
                            let key = &flat[c * w..(c + 1) * w];
                            let mut buf = Vec::new();
                            (0..=k)
                                .map(|i| {
                                    buf.clear();
                                    (self.face)(k, key, i, &mut buf);
                                    lookup(k - 1, &buf)
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect()
                };
                let degeneracies: Vec<u32> = if k == top {
                    Vec::new()
                } else {
                    (0..n)
                        .into_par_iter()
                        .flat_map_iter(|c| {
                            let key = &flat[c * w..(c + 1) * w];
                            let mut buf = Vec::new();
                            (0..=k)
                                .map(|j| {
                                    buf.clear();
                                    (self.degen)(k, key, j, &mut buf);
                                    lookup(k + 1, &buf)
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect()
                };
                if n == 0 {
                    width = 0;
                }
                Level {
                    width,
                    payload,
                    faces,
                    degeneracies,
                    degenerate: Vec::new(),
                }
            })
            .collect();
        SimplicialSet::from_levels(self.name, levels)
    }
}
