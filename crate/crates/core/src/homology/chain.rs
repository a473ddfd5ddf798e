//! Chain complexes and normalized chains of simplicial sets.

use rayon::prelude::*;

use super::int::Int;
use super::matrix::SparseIntMatrix;
use crate::error::{Error, Result};
use crate::sset::{SSetMap, SimplicialSet};

/// A bounded chain complex of finitely generated free abelian groups.
///
/// `boundary(k)` is the matrix of `∂_k : C_k → C_{k-1}` (rows index degree
/// `k-1`); `boundary(0)` is the zero map to the empty group. Homology is
/// exact in degrees `<= exact_through`; above that, the complex is a
/// truncation and `H_k` is only an upper bound.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseIntMatrix>,
    exact_through: usize,
}

impl ChainComplex {
    /// Builds a complex from its boundary matrices, checking shapes and
    /// `∂∂ = 0`.
    pub fn new(boundaries: Vec<SparseIntMatrix>, exact_through: usize) -> Result<Self> {
        if boundaries.is_empty() {
            return Err(Error::InvalidParameter("chain complex without degrees".into()));
        }
        let ranks: Vec<usize> = boundaries.iter().map(SparseIntMatrix::cols).collect();
        if boundaries[0].rows() != 0 {
            return Err(Error::InvalidParameter("boundary(0) must map to zero".into()));
        }
        for k in 1..boundaries.len() {
            if boundaries[k].rows() != ranks[k - 1] {
                return Err(Error::InvalidParameter(format!(
                    "boundary({k}) has {} rows, expected {}",
                    boundaries[k].rows(),
                    ranks[k - 1]
                )));
            }
        }
        let top = ranks.len() - 1;
        let c = ChainComplex {
            ranks,
            boundaries,
            exact_through: exact_through.min(top),
        };
        c.check_boundary_squared()?;
        Ok(c)
    }

    pub fn top_degree(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, k: usize) -> &SparseIntMatrix {
        &self.boundaries[k]
    }

    pub fn exact_through(&self) -> usize {
        self.exact_through
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    pub fn check_boundary_squared(&self) -> Result<()> {
        (2..self.boundaries.len()).into_par_iter().try_for_each(|k| {
            if self.boundaries[k - 1].mul(&self.boundaries[k]).is_zero() {
                Ok(())
            } else {
                Err(Error::BoundarySquare(k))
            }
        })
    }

    /// The complex restricted to degrees `0..=top`.
    pub fn truncate(&self, top: usize) -> ChainComplex {
        let top = top.min(self.top_degree());
        ChainComplex {
            ranks: self.ranks[..=top].to_vec(),
            boundaries: self.boundaries[..=top].to_vec(),
            exact_through: self.exact_through.min(top.saturating_sub(1)),
        }
    }
}

/// Normalized chains of a simplicial set: one generator per nondegenerate
/// cell, `∂ = Σ (-1)^i d_i` with degenerate faces dropped.
#[derive(Clone, Debug)]
pub struct NormalizedChains {
    pub complex: ChainComplex,
    /// `generator[k][cell]`: generator index of a level-`k` cell, or
    /// `u32::MAX` if degenerate.
    generator: Vec<Vec<u32>>,
    /// `cell[k][g]`: the cell behind generator `g`.
    cell: Vec<Vec<u32>>,
}

pub const DEGENERATE: u32 = u32::MAX;

impl NormalizedChains {
    pub fn generator(&self, level: usize, cell: usize) -> Option<usize> {
        let g = self.generator[level][cell];
        (g != DEGENERATE).then_some(g as usize)
    }

    pub fn cell(&self, level: usize, generator: usize) -> usize {
        self.cell[level][generator] as usize
    }
}

/// Normalized chain complex of `s` through its truncation.
///
/// With truncation `D`, homology is exact through `D - 1`, or through `D`
/// when `s` carries a dimension bound `<= D`.
pub fn normalized_chains(s: &SimplicialSet) -> Result<NormalizedChains> {
    normalized_chains_upto(s, s.truncation())
}

/// Normalized chains in degrees `0..=top` only.
pub fn normalized_chains_upto(s: &SimplicialSet, top: usize) -> Result<NormalizedChains> {
    let top = top.min(s.truncation());
    let mut generator = Vec::with_capacity(top + 1);
    let mut cell = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let mut g = vec![DEGENERATE; s.len(k)];
        let mut c = Vec::new();
        for (i, x) in s.nondegenerate(k).enumerate() {
            g[x] = i as u32;
            c.push(x as u32);
        }
        generator.push(g);
        cell.push(c);
    }
    let boundaries: Vec<SparseIntMatrix> = (0..=top)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return SparseIntMatrix::zero(0, cell[0].len());
            }
            let columns = cell[k]
                .iter()
                .map(|&x| {
                    let mut faces: Vec<(u32, i64)> = (0..=k)
                        .map(|i| (generator[k - 1][s.face(k, x as usize, i)], 1 - 2 * (i as i64 % 2)))
                        .filter(|&(f, _)| f != DEGENERATE)
                        .collect();
                    faces.sort_unstable_by_key(|e| e.0);
                    let mut col: Vec<(u32, Int)> = Vec::with_capacity(faces.len());
                    for (f, sign) in faces {
                        match col.last_mut() {
                            Some((g, v)) if *g == f => *v = &*v + &Int::from(sign),
                            _ => col.push((f, Int::from(sign))),
                        }
                    }
                    col.retain(|(_, v)| !v.is_zero());
                    col
                })
                .collect();
            SparseIntMatrix::from_columns(cell[k - 1].len(), columns)
        })
        .collect();
    let exact = if s.dimension_bound().is_some_and(|b| b <= top) {
        top
    } else {
        top.saturating_sub(1)
    };
    Ok(NormalizedChains {
        complex: ChainComplex::new(boundaries, exact)?,
        generator,
        cell,
    })
}

/// Matrix of the chain map induced by `f` in degree `k`
/// (rows: target generators, columns: source generators).
pub fn chain_map(
    f: &SSetMap,
    source: &NormalizedChains,
    target: &NormalizedChains,
    k: usize,
) -> SparseIntMatrix {
    let rows = target.complex.rank(k);
    let columns = (0..source.complex.rank(k))
        .map(|g| {
            let image = f.apply(k, source.cell(k, g));
            match target.generator(k, image) {
                Some(t) => vec![(t as u32, Int::ONE)],
                None => vec![],
            }
        })
        .collect();
    SparseIntMatrix::from_columns(rows, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{circle, sphere};
    use crate::sset::from_ordered_complex;

    #[test]
    fn boundary_squares_to_zero_and_counts() {
        let s = from_ordered_complex(&sphere(2).unwrap(), 4).unwrap();
        let n = normalized_chains(&s).unwrap();
        assert_eq!(n.complex.ranks(), &[4, 6, 4, 0, 0]);
        assert_eq!(n.complex.euler_characteristic(), 2);
        assert_eq!(n.complex.exact_through(), 4);
    }

    #[test]
    fn rejects_bad_shapes() {
        let b0 = SparseIntMatrix::zero(0, 2);
        let b1 = SparseIntMatrix::zero(3, 1);
        assert!(ChainComplex::new(vec![b0, b1], 1).is_err());
    }

    #[test]
    fn detects_nonzero_square() {
        let b0 = SparseIntMatrix::zero(0, 1);
        let b1 = SparseIntMatrix::from_triplets(1, 1, [(0, 0, Int::ONE)]);
        let b2 = SparseIntMatrix::from_triplets(1, 1, [(0, 0, Int::ONE)]);
        assert!(matches!(
            ChainComplex::new(vec![b0, b1, b2], 2),
            Err(Error::BoundarySquare(2))
        ));
    }

    #[test]
    fn identity_chain_map() {
        let s = std::sync::Arc::new(from_ordered_complex(&circle(4).unwrap(), 2).unwrap());
        let n = normalized_chains(&s).unwrap();
        let id = SSetMap::identity(s.clone());
        let m = chain_map(&id, &n, &n, 1);
        assert_eq!(m.nnz(), 4);
        assert!(m.entries().all(|(i, j, v)| i == j && *v == Int::ONE));
    }
}
