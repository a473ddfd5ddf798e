//! Edge-path presentations of the fundamental group and bounded Tietze
//! simplification.

use std::collections::VecDeque;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::matrix::{smith_dense, DenseMatrix};
use super::HomologyGroup;
use crate::error::{Error, Result};
use crate::sset::SimplicialSet;

/// Generators are `1..=generators`; a letter `g` or `-g` stands for the
/// generator or its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
}

impl GroupPresentation {
    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            if r.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > self.generators) {
                return Err(Error::InvalidParameter(format!("relator {r:?} out of range")));
            }
        }
        Ok(())
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    /// Abelianization as a group `Z^b ⊕ ⊕ Z/t`, computed exactly.
    pub fn abelianization(&self) -> HomologyGroup {
        let n = self.generators;
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut v = vec![0i64; n];
                for &l in r {
                    v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
                }
                v
            })
            .collect();
        if n == 0 {
            return HomologyGroup::free(1, 0);
        }
        let m = if rows.is_empty() {
            DenseMatrix::zeros(0, n)
        } else {
            DenseMatrix::from_rows(&rows)
        };
        let s = smith_dense(&m, false);
        let torsion: Vec<u64> = s
            .invariant_factors()
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("torsion fits in u64"))
            .collect();
        HomologyGroup::new(1, n - s.rank, &torsion)
    }
}

/// Presentation of `π_1` of a connected simplicial set (truncation `>= 2`),
/// based at vertex 0: one generator per nondegenerate edge outside a
/// spanning tree, one relator `d_2σ · d_0σ · (d_1σ)⁻¹` per nondegenerate
/// 2-cell.
pub fn fundamental_presentation(s: &SimplicialSet) -> Result<GroupPresentation> {
    if s.truncation() < 2 {
        return Err(Error::InvalidParameter(
            "fundamental group needs truncation at least 2".into(),
        ));
    }
    let nv = s.len(0);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for e in s.nondegenerate(1) {
        let (from, to) = (s.face(1, e, 1), s.face(1, e, 0));
        if from != to {
            adj[from].push((to, e));
            adj[to].push((from, e));
        }
    }
    let mut seen = vec![false; nv];
    let mut tree = vec![false; s.len(1)];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    if seen.iter().any(|x| !x) {
        return Err(Error::Disconnected(s.name().to_string()));
    }
    let mut generator = vec![0i32; s.len(1)];
    let mut count = 0;
    for e in s.nondegenerate(1) {
        if !tree[e] {
            count += 1;
            generator[e] = count;
        }
    }
    let relators = s
        .nondegenerate(2)
        .map(|t| {
            let mut w = Vec::new();
            for (i, sign) in [(2, 1), (0, 1), (1, -1)] {
                let g = generator[s.face(2, t, i)];
                if g != 0 {
                    w.push(sign * g);
                }
            }
            w
        })
        .filter(|w| !w.is_empty())
        .collect();
    Ok(GroupPresentation {
        generators: count as usize,
        relators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pi1Status {
    /// Simplified to the empty presentation.
    Trivial,
    /// The abelianization is nontrivial, so the group is.
    Nontrivial,
    /// Budget exhausted without a decision.
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct TietzeBudget {
    pub max_rounds: usize,
    pub max_total_length: usize,
}

impl Default for TietzeBudget {
    fn default() -> Self {
        TietzeBudget {
            max_rounds: 100_000,
            max_total_length: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: GroupPresentation,
    pub status: Pi1Status,
}

fn free_reduce(w: &mut Vec<i32>) {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w.iter() {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    let (mut a, mut b) = (0, out.len());
    while b > a + 1 && out[a] == -out[b - 1] {
        a += 1;
        b -= 1;
    }
    *w = out[a..b].to_vec();
}

fn inverse(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

/// Repeatedly eliminates a generator occurring exactly once in some relator,
/// shortest relators first. Stops when no such generator remains or the
/// budget runs out.
pub fn tietze_simplify(p: &GroupPresentation, budget: TietzeBudget) -> Simplified {
    let mut gens: Vec<i32> = (1..=p.generators as i32).collect();
    let mut rels: Vec<Vec<i32>> = p.relators.clone();
    let mut rounds = 0;
    loop {
        for r in rels.iter_mut() {
            free_reduce(r);
        }
        rels.retain(|r| !r.is_empty());
        rels.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        rels.dedup();
        if gens.is_empty() {
            break;
        }
        if rounds >= budget.max_rounds
            || rels.iter().map(Vec::len).sum::<usize>() > budget.max_total_length
        {
            break;
        }
        rounds += 1;
        let found = rels.iter().enumerate().find_map(|(ri, r)| {
            r.iter().enumerate().find_map(|(pos, &l)| {
                let g = l.abs();
                (r.iter().filter(|x| x.abs() == g).count() == 1).then_some((ri, pos, g))
            })
        });
        let Some((ri, pos, g)) = found else { break };
        let r = rels.swap_remove(ri);
        // r rotated to start at the letter: g^e · w = 1, so g = (w)^{-1} for
        // e = 1 and g = w for e = -1.
        let e = r[pos].signum();
        let w: Vec<i32> = r[pos + 1..].iter().chain(&r[..pos]).copied().collect();
        let value = if e == 1 { inverse(&w) } else { w };
        let value_inv = inverse(&value);
        for rel in rels.iter_mut() {
            if rel.iter().any(|x| x.abs() == g) {
                let mut out = Vec::with_capacity(rel.len());
                for &x in rel.iter() {
                    if x == g {
                        out.extend_from_slice(&value);
                    } else if x == -g {
                        out.extend_from_slice(&value_inv);
                    } else {
                        out.push(x);
                    }
                }
                *rel = out;
            }
        }
        gens.retain(|&x| x != g);
    }
    // renumber surviving generators 1..
    let rename = |l: i32| -> i32 {
        let i = gens.iter().position(|&x| x == l.abs()).unwrap() as i32 + 1;
        i * l.signum()
    };
    let presentation = GroupPresentation {
        generators: gens.len(),
        relators: rels
            .iter()
            .map(|r| r.iter().map(|&l| rename(l)).collect())
            .collect(),
    };
    let status = if presentation.generators == 0 {
        Pi1Status::Trivial
    } else if !presentation.abelianization().is_zero() {
        Pi1Status::Nontrivial
    } else {
        Pi1Status::Inconclusive
    };
    Simplified {
        presentation,
        status,
    }
}

/// Abelianized rank check: the relator exponent matrix has full rank.
pub fn is_perfect(p: &GroupPresentation) -> bool {
    p.abelianization().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{sset_homology, Coefficients};
    use crate::space::{circle, rp2, sphere, torus};
    use crate::sset::from_ordered_complex;

    fn pi1(spec: crate::space::OrderedComplexSpec) -> (GroupPresentation, Simplified) {
        let s = from_ordered_complex(&spec, 2).unwrap();
        let p = fundamental_presentation(&s).unwrap();
        let simp = tietze_simplify(&p, TietzeBudget::default());
        (p, simp)
    }

    #[test]
    fn circle_is_free_on_one() {
        let (_, s) = pi1(circle(5).unwrap());
        assert_eq!(s.presentation, GroupPresentation { generators: 1, relators: vec![] });
        assert_eq!(s.status, Pi1Status::Nontrivial);
    }

    #[test]
    fn sphere_trivializes() {
        let (_, s) = pi1(sphere(2).unwrap());
        assert_eq!(s.status, Pi1Status::Trivial);
    }

    #[test]
    fn abelianization_matches_h1() {
        for spec in [torus(), rp2(), circle(4).unwrap()] {
            let s = from_ordered_complex(&spec, 3).unwrap();
            let p = fundamental_presentation(&s).unwrap();
            let h = sset_homology(&s, Coefficients::Integers).unwrap();
            assert_eq!(p.abelianization(), h[1], "{}", spec.name);
        }
    }

    #[test]
    fn rp2_simplifies_to_one_relator() {
        let (_, s) = pi1(rp2());
        assert_eq!(s.presentation.generators, 1);
        assert_eq!(s.presentation.relators.len(), 1);
        assert_eq!(s.presentation.relators[0].len(), 2);
    }

    #[test]
    fn free_reduction() {
        let mut w = vec![1, 2, -2, 3, -1];
        free_reduce(&mut w);
        assert_eq!(w, vec![3]);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        // perfect, but every generator occurs several times in each relator
        let p = GroupPresentation {
            generators: 2,
            relators: vec![vec![1, 2, -1, -2, -2], vec![2, 1, -2, -1, -1]],
        };
        let s = tietze_simplify(&p, TietzeBudget::default());
        assert_eq!(s.status, Pi1Status::Inconclusive);
    }
}
