use std::sync::Arc;

use rayon::prelude::*;

use super::SimplicialSet;
use crate::error::{Error, Result};

/// A simplicial map, stored as a cell assignment per level.
///
/// Defined on levels `0..=min(D_source, D_target)`; construction checks that
/// it commutes with every face and degeneracy operator there.
#[derive(Clone, Debug)]
pub struct SSetMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    levels: Vec<Vec<u32>>,
}

impl SSetMap {
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        levels: Vec<Vec<u32>>,
    ) -> Result<Self> {
        let top = source.truncation().min(target.truncation());
        if levels.len() != top + 1 {
            return Err(Error::LevelMismatch(format!(
                "map has {} levels, expected {}",
                levels.len(),
                top + 1
            )));
        }
        for (k, l) in levels.iter().enumerate() {
            if l.len() != source.len(k) {
                return Err(Error::LevelMismatch(format!("level {k} has wrong length")));
            }
            if l.iter().any(|&c| c as usize >= target.len(k)) {
                return Err(Error::LevelMismatch(format!("level {k} points outside target")));
            }
        }
        let map = SSetMap {
            source,
            target,
            levels,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn from_fn(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        f: impl Fn(usize, usize) -> usize + Sync,
    ) -> Result<Self> {
        let top = source.truncation().min(target.truncation());
        let levels = (0..=top)
            .map(|k| {
                (0..source.len(k))
                    .into_par_iter()
                    .map(|c| f(k, c) as u32)
                    .collect()
            })
            .collect();
        Self::new(source, target, levels)
    }

    pub fn identity(s: Arc<SimplicialSet>) -> Self {
        let levels = (0..=s.truncation())
            .map(|k| (0..s.len(k) as u32).collect())
            .collect();
        SSetMap {
            source: s.clone(),
            target: s,
            levels,
        }
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn top_level(&self) -> usize {
        self.levels.len() - 1
    }

    #[inline]
    pub fn apply(&self, level: usize, cell: usize) -> usize {
        self.levels[level][cell] as usize
    }

    pub fn level(&self, level: usize) -> &[u32] {
        &self.levels[level]
    }

    fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        let top = self.top_level();
        (0..=top).into_par_iter().try_for_each(|k| {
            for c in 0..s.len(k) {
                let fc = self.apply(k, c);
                if k > 0 {
                    for i in 0..=k {
                        if self.apply(k - 1, s.face(k, c, i)) != t.face(k, fc, i) {
                            return Err(Error::NotSimplicial {
                                level: k,
                                cell: c,
                                operator: format!("d{i}"),
                            });
                        }
                    }
                }
                if k < top {
                    for j in 0..=k {
                        if self.apply(k + 1, s.degeneracy(k, c, j)) != t.degeneracy(k, fc, j) {
                            return Err(Error::NotSimplicial {
                                level: k,
                                cell: c,
                                operator: format!("s{j}"),
                            });
                        }
                    }
                }
            }
            Ok(())
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SSetMap) -> Result<SSetMap> {
        if !Arc::ptr_eq(&self.target, &next.source) && *self.target != *next.source {
            return Err(Error::LevelMismatch(
                "target of the first map is not the source of the second".into(),
            ));
        }
        let top = self.top_level().min(next.top_level());
        let levels = (0..=top)
            .map(|k| {
                self.levels[k]
                    .iter()
                    .map(|&c| next.levels[k][c as usize])
                    .collect()
            })
            .collect();
        SSetMap::new(self.source.clone(), next.target.clone(), levels)
    }

    /// True if both maps agree cellwise on their common levels.
    pub fn agrees_with(&self, other: &SSetMap) -> bool {
        let top = self.top_level().min(other.top_level());
        (0..=top).all(|k| self.levels[k] == other.levels[k])
    }
}
