//! Explicit homology bases and induced maps.
//!
//! For a degree `k`, the window `C_{k+1} → C_k → C_{k-1}` is first reduced
//! by unit cancellations (keeping a log), then the small leftover is put in
//! Smith form twice: `∂'_k = U_1⁻¹ D_1 V_1⁻¹` splits off the cycles
//! `Z = V_1[:, r..]`, and the boundaries expressed in cycle coordinates,
//! `B = V_1⁻¹[r.., :] ∂'_{k+1}`, are diagonalized as `U_2 B Q = D_2`.
//! Rows of `U_2` give homology coordinates; columns of `U_2⁻¹` give
//! representative cycles.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::chain::{chain_map, normalized_chains_upto, ChainComplex};
use super::int::Int;
use super::matrix::{smith_dense, DenseMatrix, SparseIntMatrix};
use super::reduce::{Reducer, Step};
use super::ring::Integers;
use super::{big_mod, reduced_boundary, HomologyGroup};
use crate::error::{Error, Result};
use crate::sset::SSetMap;

/// A chain in original generator indices.
pub type Chain = Vec<(usize, BigInt)>;

pub struct HomologyBasis {
    degree: usize,
    group: HomologyGroup,
    rank: usize,
    boundary: SparseIntMatrix,
    steps: Vec<Step<Int>>,
    alive: Vec<u32>,
    /// Full `V_1⁻¹`; its first `boundary_rank` rows vanish on projected cycles.
    v_inv: DenseMatrix,
    boundary_rank: usize,
    u2: DenseMatrix,
    /// Rows of `U_2` that are homology coordinates, free ones first.
    coordinate_rows: Vec<usize>,
    orders: Vec<Option<BigInt>>,
    generators: Vec<Chain>,
}

impl HomologyBasis {
    pub fn new(complex: &ChainComplex, k: usize) -> Result<Self> {
        if k > complex.exact_through() {
            return Err(Error::DegreeOutOfRange {
                degree: k,
                top: complex.exact_through(),
            });
        }
        let mut red = Reducer::new(Integers, complex, k.saturating_sub(1), k + 1, true);
        red.run();
        let dk = if k == 0 {
            DenseMatrix::zeros(0, red.alive(0).len())
        } else {
            reduced_boundary(&red, k, false)
        };
        let dk1 = if k < complex.top_degree() {
            reduced_boundary(&red, k + 1, true)
        } else {
            DenseMatrix::zeros(red.alive(k).len(), 0)
        };
        let alive = red.alive(k);
        let steps = red.into_log();

        let s1 = smith_dense(&dk, true);
        let t1 = s1.transforms.as_ref().expect("transforms requested");
        let r = s1.rank;
        let z_basis = t1.v.cols_from(r);
        let b = t1.v_inv.rows_from(r).mul(&dk1);
        let s2 = smith_dense(&b, true);
        let t2 = s2.transforms.expect("transforms requested");
        let z = b.rows();
        let diag = |i: usize| -> BigInt {
            s2.diagonal.get(i).cloned().unwrap_or_else(BigInt::zero)
        };
        let mut coordinate_rows: Vec<usize> = (0..z).filter(|&i| diag(i).is_zero()).collect();
        coordinate_rows.extend((0..z).filter(|&i| diag(i) > BigInt::one()));
        let orders: Vec<Option<BigInt>> = coordinate_rows
            .iter()
            .map(|&i| {
                let d = diag(i);
                (!d.is_zero()).then_some(d)
            })
            .collect();
        let torsion: Vec<u64> = orders
            .iter()
            .flatten()
            .map(|d| d.to_u64().expect("torsion coefficient fits in u64"))
            .collect();
        let betti = orders.iter().filter(|o| o.is_none()).count();

        let mut basis = HomologyBasis {
            degree: k,
            group: HomologyGroup::new(k, betti, &torsion),
            rank: complex.rank(k),
            boundary: complex.boundary(k).clone(),
            steps,
            alive,
            v_inv: t1.v_inv.clone(),
            boundary_rank: r,
            u2: t2.u,
            coordinate_rows,
            orders,
            generators: Vec::new(),
        };
        basis.generators = basis
            .coordinate_rows
            .iter()
            .map(|&i| {
                let reduced = z_basis.mul_vec(&t2.u_inv.column(i));
                basis.lift(&reduced)
            })
            .collect();
        Ok(basis)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &HomologyGroup {
        &self.group
    }

    /// Representative cycles, free generators first, then torsion
    /// generators in the order of `group().torsion`.
    pub fn generators(&self) -> &[Chain] {
        &self.generators
    }

    /// `None` for free generators, `Some(t)` for a generator of order `t`.
    pub fn orders(&self) -> &[Option<BigInt>] {
        &self.orders
    }

    /// Coordinates of the class of a cycle; torsion coordinates are reduced
    /// into `0..t`. Errors if the chain is not a cycle.
    pub fn coordinates(&self, cycle: &[(usize, BigInt)]) -> Result<Vec<BigInt>> {
        if !apply_sparse(&self.boundary, cycle).is_empty() {
            return Err(Error::InvalidParameter(format!(
                "chain is not a cycle in degree {}",
                self.degree
            )));
        }
        let c = self.v_inv.mul_vec(&self.project(cycle));
        debug_assert!(c[..self.boundary_rank].iter().all(Zero::is_zero));
        let h = self.u2.mul_vec(&c[self.boundary_rank..]);
        Ok(self
            .coordinate_rows
            .iter()
            .zip(&self.orders)
            .map(|(&i, o)| match o {
                None => h[i].clone(),
                Some(t) => big_mod(&h[i], t),
            })
            .collect())
    }

    /// Original chain to coordinates on the surviving cells.
    fn project(&self, chain: &[(usize, BigInt)]) -> Vec<BigInt> {
        let k = self.degree;
        let mut y = vec![BigInt::zero(); self.rank];
        for (i, v) in chain {
            y[*i] += v;
        }
        for st in &self.steps {
            if st.lower == k {
                let a = st.a as usize;
                if !y[a].is_zero() {
                    let coef = &y[a] * st.inv.to_big();
                    for (x, v) in &st.col {
                        y[*x as usize] -= &coef * v.to_big();
                    }
                }
            } else if st.lower + 1 == k {
                y[st.b as usize] = BigInt::zero();
            }
        }
        self.alive.iter().map(|&c| y[c as usize].clone()).collect()
    }

    /// Coordinates on the surviving cells to an original chain.
    fn lift(&self, reduced: &[BigInt]) -> Chain {
        let k = self.degree;
        let mut y = vec![BigInt::zero(); self.rank];
        for (p, &c) in self.alive.iter().enumerate() {
            y[c as usize] = reduced[p].clone();
        }
        for st in self.steps.iter().rev() {
            if st.lower + 1 == k {
                let mut coef = BigInt::zero();
                for (c, mu) in &st.row {
                    let v = &y[*c as usize];
                    if !v.is_zero() {
                        coef += v * mu.to_big();
                    }
                }
                y[st.b as usize] = -coef * st.inv.to_big();
            }
        }
        y.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }
}

/// Matrix of a map on homology in the bases of [`HomologyBasis`]
/// (rows: target generators, columns: source generators). Entries in
/// torsion rows are reduced modulo the generator order.
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub degree: usize,
    pub source: HomologyGroup,
    pub target: HomologyGroup,
    pub matrix: Vec<Vec<BigInt>>,
}

impl InducedMap {
    /// True if the image of every generator is zero.
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    /// Image of the `j`-th source generator.
    pub fn image_of(&self, j: usize) -> Vec<BigInt> {
        self.matrix.iter().map(|row| row[j].clone()).collect()
    }

    /// For free groups of equal rank: true iff the matrix is invertible
    /// over the integers.
    pub fn is_isomorphism(&self) -> bool {
        if !self.source.same_group(&self.target) {
            return false;
        }
        let n = self.matrix.len();
        if n == 0 {
            return true;
        }
        let s = smith_dense(&DenseMatrix::from_rows(&self.matrix), false);
        s.rank == n && s.diagonal.iter().all(|d| d.is_one())
    }

    pub fn to_json(&self) -> Value {
        let entry = |v: &BigInt| match v.to_i64() {
            Some(x) => json!(x),
            None => json!(v.to_string()),
        };
        json!({
            "degree": self.degree,
            "source": self.source,
            "target": self.target,
            "matrix": self.matrix.iter().map(|r| r.iter().map(entry).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// `self ∘ first` computed from the matrices, with torsion rows reduced.
    pub fn compose_after(&self, first: &InducedMap, target_orders: &[Option<BigInt>]) -> Vec<Vec<BigInt>> {
        let rows = self.matrix.len();
        let cols = first.matrix.first().map_or(0, Vec::len);
        (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| {
                        let mut s = BigInt::zero();
                        for (l, row) in first.matrix.iter().enumerate() {
                            s += &self.matrix[i][l] * &row[j];
                        }
                        match &target_orders[i] {
                            Some(t) => big_mod(&s, t),
                            None => s,
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// The map on `H_k` induced by a chain map given in degree `k`.
pub fn induced_chain_map(
    source: &ChainComplex,
    target: &ChainComplex,
    map: &SparseIntMatrix,
    k: usize,
) -> Result<InducedMap> {
    let sb = HomologyBasis::new(source, k)?;
    let tb = HomologyBasis::new(target, k)?;
    induced_between(&sb, &tb, map)
}

pub(crate) fn induced_between(
    sb: &HomologyBasis,
    tb: &HomologyBasis,
    map: &SparseIntMatrix,
) -> Result<InducedMap> {
    let columns: Vec<Vec<BigInt>> = sb
        .generators()
        .iter()
        .map(|g| tb.coordinates(&apply_sparse(map, g)))
        .collect::<Result<_>>()?;
    let rows = tb.generators().len();
    let matrix = (0..rows)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    Ok(InducedMap {
        degree: sb.degree(),
        source: sb.group().clone(),
        target: tb.group().clone(),
        matrix,
    })
}

pub(crate) fn apply_sparse(map: &SparseIntMatrix, chain: &[(usize, BigInt)]) -> Chain {
    let mut out = std::collections::BTreeMap::<usize, BigInt>::new();
    for (j, v) in chain {
        for (i, m) in map.column(*j) {
            *out.entry(i).or_insert_with(BigInt::zero) += v * m.to_big();
        }
    }
    out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// The map on `H_k` induced by a simplicial map.
pub fn induced_map(f: &SSetMap, k: usize) -> Result<InducedMap> {
    let (sb, tb, m) = induced_parts(f, k)?;
    induced_between(&sb, &tb, &m)
}

/// Bases of source and target in degree `k` plus the chain map there.
pub fn induced_parts(
    f: &SSetMap,
    k: usize,
) -> Result<(HomologyBasis, HomologyBasis, SparseIntMatrix)> {
    if k > f.top_level() {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            top: f.top_level().saturating_sub(1),
        });
    }
    let (src, tgt) = rayon::join(
        || normalized_chains_upto(f.source(), k + 1),
        || normalized_chains_upto(f.target(), k + 1),
    );
    let (src, tgt) = (src?, tgt?);
    let m = chain_map(f, &src, &tgt, k);
    let (sb, tb) = rayon::join(
        || HomologyBasis::new(&src.complex, k),
        || HomologyBasis::new(&tgt.complex, k),
    );
    Ok((sb?, tb?, m))
}

/// Absolute value of the single entry of a `1×1` induced map.
pub fn scalar(m: &InducedMap) -> Option<BigInt> {
    (m.matrix.len() == 1 && m.matrix[0].len() == 1).then(|| m.matrix[0][0].abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::chain::normalized_chains;
    use crate::space::{circle, rp2, torus};
    use crate::sset::{from_ordered_complex, SimplicialSet};
    use std::sync::Arc;

    fn complex(s: &SimplicialSet) -> ChainComplex {
        normalized_chains(s).unwrap().complex
    }

    #[test]
    fn torus_generators_are_cycles() {
        let s = from_ordered_complex(&torus(), 3).unwrap();
        let c = complex(&s);
        for k in 0..=2 {
            let b = HomologyBasis::new(&c, k).unwrap();
            for (i, g) in b.generators().iter().enumerate() {
                if k > 0 {
                    let image = apply_sparse(c.boundary(k), g);
                    assert!(image.is_empty(), "generator {i} in degree {k} is not a cycle");
                }
                let coords = b.coordinates(g).unwrap();
                for (j, x) in coords.iter().enumerate() {
                    assert_eq!(*x, BigInt::from((i == j) as i32));
                }
            }
        }
        assert_eq!(HomologyBasis::new(&c, 1).unwrap().group(), &HomologyGroup::free(1, 2));
    }

    #[test]
    fn torsion_generator_and_boundaries() {
        let s = from_ordered_complex(&rp2(), 3).unwrap();
        let c = complex(&s);
        let b = HomologyBasis::new(&c, 1).unwrap();
        assert_eq!(b.group(), &HomologyGroup::new(1, 0, &[2]));
        let g = &b.generators()[0];
        let doubled: Chain = g.iter().map(|(i, v)| (*i, v * 2)).collect();
        assert_eq!(b.coordinates(&doubled).unwrap(), vec![BigInt::zero()]);
        // a boundary has coordinate zero
        let bd = apply_sparse(c.boundary(2), &[(0, BigInt::one())]);
        assert_eq!(b.coordinates(&bd).unwrap(), vec![BigInt::zero()]);
    }

    #[test]
    fn non_cycle_rejected() {
        let s = from_ordered_complex(&circle(3).unwrap(), 2).unwrap();
        let b = HomologyBasis::new(&complex(&s), 1).unwrap();
        assert!(b.coordinates(&[(0, BigInt::one())]).is_err());
    }

    #[test]
    fn identity_induces_identity() {
        let s = Arc::new(from_ordered_complex(&torus(), 3).unwrap());
        let id = SSetMap::identity(s);
        let m = induced_map(&id, 1).unwrap();
        assert!(m.is_isomorphism());
        assert_eq!(m.matrix, vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]]);
    }

    #[test]
    fn degree_checked() {
        let s = from_ordered_complex(&torus(), 3).unwrap();
        let c = normalized_chains_upto(&s, 1).unwrap().complex;
        assert!(HomologyBasis::new(&c, 0).is_ok());
        assert!(matches!(HomologyBasis::new(&c, 1), Err(Error::DegreeOutOfRange { .. })));
    }
}
