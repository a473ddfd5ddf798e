//! Chain-level elimination of unit pairs.
//!
//! A cell `b` of degree `k` whose boundary has a unit coefficient `λ` on a
//! cell `a` of degree `k-1` can be cancelled against `a`: every other cell
//! `c` with `a` in its boundary gets `∂c ← ∂c - ⟨∂c,a⟩λ⁻¹∂b`, and row `b`
//! is dropped from `∂_{k+1}`. The result is chain homotopy equivalent to the
//! input. Pairs are chosen in increasing Markowitz cost
//! `(|cofaces(a)| - 1)·(|∂b| - 1)`, which favours fill-in-free collapses.
//!
//! With logging enabled, each elimination records what the projection and
//! lift between the original and reduced complexes need.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::chain::ChainComplex;
use super::ring::Ring;

pub(crate) type SparseVec<E> = Vec<(u32, E)>;

/// One cancelled pair: `a` in degree `lower`, `b` in degree `lower + 1`.
#[derive(Clone, Debug)]
pub(crate) struct Step<E> {
    pub lower: usize,
    pub a: u32,
    pub b: u32,
    /// `λ⁻¹` for `λ = ⟨∂b, a⟩`.
    pub inv: E,
    /// `∂b` at the time of elimination, including the `a` entry.
    pub col: SparseVec<E>,
    /// `(c, ⟨∂c, a⟩)` for the other cells `c` having `a` in their boundary.
    pub row: SparseVec<E>,
}

pub(crate) struct Reducer<R: Ring> {
    ring: R,
    /// `bd[k][c]`: boundary of the degree-`k` cell `c`, sorted.
    bd: Vec<Vec<SparseVec<R::Elem>>>,
    /// `cobd[k][x]`: degree-`k+1` cells having `x` in their boundary, sorted.
    cobd: Vec<Vec<Vec<u32>>>,
    alive: Vec<Vec<bool>>,
    /// Degrees `lo..=hi` take part; cells of degree `lo` have no boundary.
    lo: usize,
    hi: usize,
    log: Option<Vec<Step<R::Elem>>>,
}

impl<R: Ring> Reducer<R> {
    pub fn new(ring: R, complex: &ChainComplex, lo: usize, hi: usize, logging: bool) -> Self {
        let top = complex.top_degree();
        let hi = hi.min(top);
        let mut bd: Vec<Vec<SparseVec<R::Elem>>> = Vec::with_capacity(top + 1);
        let mut cobd: Vec<Vec<Vec<u32>>> = Vec::with_capacity(top + 1);
        let mut alive = Vec::with_capacity(top + 1);
        for k in 0..=top {
            let n = if k >= lo && k <= hi { complex.rank(k) } else { 0 };
            alive.push(vec![true; n]);
            cobd.push(vec![Vec::new(); n]);
            if k > lo && k <= hi {
                let m = complex.boundary(k);
                bd.push(
                    (0..n)
                        .map(|j| {
                            m.column(j)
                                .map(|(i, v)| (i as u32, ring.from_int(v)))
                                .filter(|(_, v)| !ring.is_zero(v))
                                .collect()
                        })
                        .collect(),
                );
            } else {
                bd.push(vec![Vec::new(); n]);
            }
        }
        for k in lo + 1..=hi {
            for (c, col) in bd[k].iter().enumerate() {
                for &(x, _) in col {
                    cobd[k - 1][x as usize].push(c as u32);
                }
            }
        }
        Reducer {
            ring,
            bd,
            cobd,
            alive,
            lo,
            hi,
            log: logging.then(Vec::new),
        }
    }

    /// Cheapest unit pivot in the boundary of `b` (degree `k`).
    fn best_pivot(&self, k: usize, b: usize) -> Option<(u64, u32)> {
        let col = &self.bd[k][b];
        let width = (col.len() as u64).saturating_sub(1);
        col.iter()
            .filter(|(_, v)| self.ring.unit_inverse(v).is_some())
            .map(|&(a, _)| {
                let cost = (self.cobd[k - 1][a as usize].len() as u64).saturating_sub(1) * width;
                (cost, a)
            })
            .min()
    }

    /// Cancels unit pairs until none is left.
    pub fn run(&mut self) {
        let mut heap = BinaryHeap::new();
        for k in self.lo + 1..=self.hi {
            for b in 0..self.bd[k].len() {
                if let Some((cost, _)) = self.best_pivot(k, b) {
                    heap.push(Reverse((cost, k, b as u32)));
                }
            }
        }
        while let Some(Reverse((cost, k, b))) = heap.pop() {
            let b = b as usize;
            if !self.alive[k][b] {
                continue;
            }
            let Some((best, a)) = self.best_pivot(k, b) else {
                continue;
            };
            if best > cost {
                heap.push(Reverse((best, k, b as u32)));
                continue;
            }
            for c in self.eliminate(k, a as usize, b) {
                if let Some((cost, _)) = self.best_pivot(k, c as usize) {
                    heap.push(Reverse((cost, k, c)));
                }
            }
        }
    }

    /// Cancels `a` (degree `k-1`) against `b` (degree `k`); returns the cells
    /// whose boundaries changed.
    fn eliminate(&mut self, k: usize, a: usize, b: usize) -> Vec<u32> {
        let ring = self.ring.clone();
        let col = std::mem::take(&mut self.bd[k][b]);
        let lambda = &col[col.binary_search_by_key(&(a as u32), |e| e.0).unwrap()].1;
        let inv = ring.unit_inverse(lambda).expect("pivot must be a unit");
        let rows: Vec<u32> = self.cobd[k - 1][a]
            .iter()
            .copied()
            .filter(|&c| c as usize != b)
            .collect();
        let row: SparseVec<R::Elem> = rows
            .iter()
            .map(|&c| {
                let bc = &self.bd[k][c as usize];
                let i = bc.binary_search_by_key(&(a as u32), |e| e.0).unwrap();
                (c, bc[i].1.clone())
            })
            .collect();

        for (c, mu) in &row {
            let factor = ring.neg(&ring.mul(mu, &inv));
            let old = std::mem::take(&mut self.bd[k][*c as usize]);
            let mut new = Vec::with_capacity(old.len() + col.len());
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < col.len() {
                let take_old = j == col.len() || (i < old.len() && old[i].0 < col[j].0);
                let take_col = i == old.len() || (j < col.len() && col[j].0 < old[i].0);
                if take_old {
                    new.push(old[i].clone());
                    i += 1;
                } else if take_col {
                    let x = col[j].0;
                    new.push((x, ring.mul(&factor, &col[j].1)));
                    insert_sorted(&mut self.cobd[k - 1][x as usize], *c);
                    j += 1;
                } else {
                    let x = old[i].0;
                    let v = ring.add(&old[i].1, &ring.mul(&factor, &col[j].1));
                    if ring.is_zero(&v) {
                        remove_sorted(&mut self.cobd[k - 1][x as usize], *c);
                    } else {
                        new.push((x, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            self.bd[k][*c as usize] = new;
        }

        for &(x, _) in &col {
            remove_sorted(&mut self.cobd[k - 1][x as usize], b as u32);
        }
        debug_assert!(self.cobd[k - 1][a].is_empty());
        for d in std::mem::take(&mut self.cobd[k][b]) {
            let bd = &mut self.bd[k + 1][d as usize];
            let i = bd.binary_search_by_key(&(b as u32), |e| e.0).unwrap();
            bd.remove(i);
        }
        if k - 1 > self.lo {
            for (y, _) in std::mem::take(&mut self.bd[k - 1][a]) {
                remove_sorted(&mut self.cobd[k - 2][y as usize], a as u32);
            }
        }
        self.alive[k][b] = false;
        self.alive[k - 1][a] = false;
        if let Some(log) = &mut self.log {
            log.push(Step {
                lower: k - 1,
                a: a as u32,
                b: b as u32,
                inv,
                col,
                row,
            });
        } else {
            drop(col);
        }
        rows
    }

    /// Surviving cells of degree `k`, in increasing order.
    pub fn alive(&self, k: usize) -> Vec<u32> {
        self.alive
            .get(k)
            .map(|a| {
                a.iter()
                    .enumerate()
                    .filter(|(_, &x)| x)
                    .map(|(i, _)| i as u32)
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Boundary of a surviving degree-`k` cell, in original indices.
    pub fn boundary_of(&self, k: usize, c: u32) -> &SparseVec<R::Elem> {
        &self.bd[k][c as usize]
    }

    pub fn into_log(self) -> Vec<Step<R::Elem>> {
        self.log.unwrap_or_default()
    }
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(i) = v.binary_search(&x) {
        v.insert(i, x);
    }
}

fn remove_sorted(v: &mut Vec<u32>, x: u32) {
    if let Ok(i) = v.binary_search(&x) {
        v.remove(i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::chain::normalized_chains;
    use crate::homology::ring::{Integers, PrimeField};
    use crate::space::{rp2, sphere, torus};
    use crate::sset::from_ordered_complex;

    fn survivors(spec: crate::space::OrderedComplexSpec, d: usize) -> Vec<usize> {
        let s = from_ordered_complex(&spec, d).unwrap();
        let c = normalized_chains(&s).unwrap().complex;
        let mut r = Reducer::new(Integers, &c, 0, d, false);
        r.run();
        (0..=d).map(|k| r.alive(k).len()).collect()
    }

    #[test]
    fn sphere_reduces_to_two_cells() {
        assert_eq!(survivors(sphere(2).unwrap(), 3), vec![1, 0, 1, 0]);
    }

    #[test]
    fn torus_reduces_to_minimal() {
        assert_eq!(survivors(torus(), 3), vec![1, 2, 1, 0]);
    }

    #[test]
    fn rp2_keeps_a_non_unit() {
        let s = from_ordered_complex(&rp2(), 3).unwrap();
        let c = normalized_chains(&s).unwrap().complex;
        let mut r = Reducer::new(Integers, &c, 0, 3, false);
        r.run();
        assert_eq!(r.alive(1).len(), 1);
        assert_eq!(r.alive(2).len(), 1);
        let b = r.alive(2)[0];
        let e = r.boundary_of(2, b);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].1.to_i64().map(i64::abs), Some(2));

        let mut f = Reducer::new(PrimeField::new(2).unwrap(), &c, 0, 3, false);
        f.run();
        assert_eq!((0..=2).map(|k| f.alive(k).len()).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert!(f.boundary_of(2, f.alive(2)[0]).is_empty());
    }
}
