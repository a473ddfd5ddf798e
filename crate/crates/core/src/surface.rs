//! A small cellular model for `SP^n` of a two-complex with one 2-cell.
//!
//! For `X = (r circles) ∪ D`, the cells of the model are the products
//! `e_S * D^k` with `S ⊆ {1..r}` and `|S| + k <= n`, of degree `|S| + 2k`.
//! The boundary is the derivation with `∂e_i = 0` and
//! `∂D^k = ∂D * D^{k-1}`, where `∂D` is the abelianized attaching word.
//! Signs follow the Koszul rule with the `e_i` odd and `D` even, and
//! `e_i * e_i = 0`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::chain::ChainComplex;
use crate::homology::ring::Coefficients;
use crate::homology::{homology, HomologyGroup, Int, SparseIntMatrix};

/// `r` circles with one disk attached along `word` (letters `±1..=±r`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    pub r: usize,
    #[serde(alias = "attaching_word")]
    pub word: Vec<i32>,
}

impl SurfacePresentation {
    pub fn new(r: usize, word: Vec<i32>) -> Result<Self> {
        let p = SurfacePresentation { r, word };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for &l in &self.word {
            if l == 0 || l.unsigned_abs() as usize > self.r {
                return Err(Error::InvalidParameter(format!(
                    "letter {l} outside 1..={}",
                    self.r
                )));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SurfacePresentation =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn sphere() -> Self {
        SurfacePresentation { r: 0, word: vec![] }
    }

    pub fn torus() -> Self {
        Self::orientable(1)
    }

    pub fn rp2() -> Self {
        SurfacePresentation { r: 1, word: vec![1, 1] }
    }

    /// Genus `g` orientable surface, `[a_1, b_1] ⋯ [a_g, b_g]`.
    pub fn orientable(g: usize) -> Self {
        let mut word = Vec::with_capacity(4 * g);
        for i in 0..g as i32 {
            let (a, b) = (2 * i + 1, 2 * i + 2);
            word.extend([a, b, -a, -b]);
        }
        SurfacePresentation { r: 2 * g, word }
    }

    /// Connected sum of `k` projective planes, `a_1^2 ⋯ a_k^2`.
    pub fn nonorientable(k: usize) -> Self {
        let word = (1..=k as i32).flat_map(|a| [a, a]).collect();
        SurfacePresentation { r: k, word }
    }

    /// Coefficients of `∂D` on `e_1..e_r`.
    pub fn disk_boundary(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.r];
        for &l in &self.word {
            c[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        c
    }

    /// `∂D = 0` over the integers.
    pub fn is_orientable(&self) -> bool {
        self.disk_boundary().iter().all(|&c| c == 0)
    }
}

/// `e_{circles} * D^disk`, circles strictly increasing and 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialCell {
    pub circles: Vec<usize>,
    pub disk: usize,
}

impl MonomialCell {
    pub fn degree(&self) -> usize {
        self.circles.len() + 2 * self.disk
    }
}

fn subsets(r: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(r: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            rec(r, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Cells of the model for `SP^n`, grouped by degree (`0..=2n`).
pub fn monomial_cells(pres: &SurfacePresentation, n: usize) -> Vec<Vec<MonomialCell>> {
    let mut by_degree = vec![Vec::new(); 2 * n + 1];
    for size in 0..=pres.r.min(n) {
        for s in subsets(pres.r, size) {
            for disk in 0..=n - size {
                let cell = MonomialCell {
                    circles: s.clone(),
                    disk,
                };
                by_degree[cell.degree()].push(cell);
            }
        }
    }
    for cells in by_degree.iter_mut() {
        cells.sort();
    }
    by_degree
}

/// Boundary of a cell as a list of `(cell, coefficient)`.
fn boundary(cell: &MonomialCell, disk_boundary: &[i64]) -> Vec<(MonomialCell, i64)> {
    if cell.disk == 0 {
        return Vec::new();
    }
    let outer = if cell.circles.len() % 2 == 0 { 1 } else { -1 };
    disk_boundary
        .iter()
        .enumerate()
        .filter(|(i, &c)| c != 0 && !cell.circles.contains(i))
        .map(|(i, &c)| {
            // move e_i from the right end into sorted position
            let after = cell.circles.iter().filter(|&&j| j > i).count();
            let sign = if after % 2 == 0 { 1 } else { -1 };
            let mut circles = cell.circles.clone();
            let pos = circles.partition_point(|&j| j < i);
            circles.insert(pos, i);
            (
                MonomialCell {
                    circles,
                    disk: cell.disk - 1,
                },
                outer * sign * c,
            )
        })
        .collect()
}

/// Cellular chain complex of the model for `SP^n X`.
pub fn sp_chain_complex(pres: &SurfacePresentation, n: usize) -> Result<ChainComplex> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    pres.validate()?;
    let cells = monomial_cells(pres, n);
    let index: Vec<HashMap<&MonomialCell, usize>> = cells
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let db = pres.disk_boundary();
    let boundaries = (0..cells.len())
        .map(|k| {
            if k == 0 {
                return SparseIntMatrix::zero(0, cells[0].len());
            }
            let columns = cells[k]
                .iter()
                .map(|cell| {
                    let mut col: Vec<(u32, Int)> = boundary(cell, &db)
                        .into_iter()
                        .map(|(f, v)| (index[k - 1][&f] as u32, Int::from(v)))
                        .filter(|(_, v)| !v.is_zero())
                        .collect();
                    col.sort_by_key(|e| e.0);
                    col
                })
                .collect();
            SparseIntMatrix::from_columns(cells[k - 1].len(), columns)
        })
        .collect();
    ChainComplex::new(boundaries, 2 * n)
}

/// Homology of the model in the two top degrees `2n` and `2n - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopHomologyReport {
    pub n: usize,
    pub orientable: bool,
    pub top_integral: HomologyGroup,
    pub top_mod2: HomologyGroup,
    pub below_integral: HomologyGroup,
    pub below_mod2: HomologyGroup,
}

pub fn top_homology_report(pres: &SurfacePresentation, n: usize) -> Result<TopHomologyReport> {
    let c = sp_chain_complex(pres, n)?;
    let z = homology(&c, Coefficients::Integers)?;
    let f = homology(&c, Coefficients::Mod(2))?;
    Ok(TopHomologyReport {
        n,
        orientable: pres.is_orientable(),
        top_integral: z[2 * n].clone(),
        top_mod2: f[2 * n].clone(),
        below_integral: z[2 * n - 1].clone(),
        below_mod2: f[2 * n - 1].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::groups;

    fn h(p: &SurfacePresentation, n: usize, c: Coefficients) -> Vec<HomologyGroup> {
        homology(&sp_chain_complex(p, n).unwrap(), c).unwrap()
    }

    #[test]
    fn sphere_gives_projective_space() {
        let g = h(&SurfacePresentation::sphere(), 3, Coefficients::Integers);
        let z: &[u64] = &[];
        assert_eq!(g, groups(&[(1, z), (0, z), (1, z), (0, z), (1, z), (0, z), (1, z)]));
    }

    #[test]
    fn torus_square() {
        let g = h(&SurfacePresentation::torus(), 2, Coefficients::Integers);
        let betti: Vec<usize> = g.iter().map(|x| x.betti).collect();
        assert_eq!(betti, vec![1, 2, 2, 2, 1]);
        assert!(g.iter().all(|x| x.torsion.is_empty()));
    }

    #[test]
    fn projective_plane_square() {
        let g = h(&SurfacePresentation::rp2(), 2, Coefficients::Integers);
        assert_eq!(g, groups(&[(1, &[]), (0, &[2]), (0, &[]), (0, &[2]), (0, &[])]));
        let f = h(&SurfacePresentation::rp2(), 2, Coefficients::Mod(2));
        assert_eq!(f[4].betti, 1);
    }

    #[test]
    fn generator_count_matches_enumeration() {
        for r in 0..5usize {
            for n in 1..5usize {
                let p = SurfacePresentation { r, word: vec![] };
                let total: usize = monomial_cells(&p, n).iter().map(Vec::len).sum();
                // brute force over all subsets as bitmasks
                let mut brute = 0;
                for mask in 0u32..(1 << r) {
                    let l = mask.count_ones() as usize;
                    if l <= n {
                        brute += n - l + 1;
                    }
                }
                assert_eq!(total, brute, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn rejects_bad_letters() {
        assert!(SurfacePresentation::new(1, vec![2]).is_err());
        assert!(SurfacePresentation::new(1, vec![0]).is_err());
        assert!(SurfacePresentation::from_json(r#"{"r":2,"word":[1,2,-1,-2]}"#).is_ok());
        assert!(SurfacePresentation::from_json(r#"{"r":2,"attaching_word":[1,2]}"#).is_ok());
    }

    #[test]
    fn genus_two_top_report() {
        let rep = top_homology_report(&SurfacePresentation::orientable(2), 2).unwrap();
        assert!(rep.orientable);
        assert_eq!(rep.top_integral, HomologyGroup::free(4, 1));
        assert_eq!(rep.below_mod2, HomologyGroup::free(3, 4));
        let rep = top_homology_report(&SurfacePresentation::nonorientable(3), 3).unwrap();
        assert!(!rep.orientable);
        assert!(rep.top_integral.is_zero());
        assert_eq!(rep.top_mod2, HomologyGroup::free(6, 1));
    }
}
