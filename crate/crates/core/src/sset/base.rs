//! The simplicial set generated by an ordered simplicial complex.
//!
//! Level-`k` cells are the monotone vertex tuples `v_0 <= ... <= v_k` whose
//! distinct entries span a simplex; `d_i` deletes entry `i`, `s_j` repeats
//! entry `j`.

use std::collections::HashSet;

use super::{check_cap, KeyedLevels, SimplicialSet};
use crate::error::Result;
use crate::space::OrderedComplexSpec;

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Enumerates monotone tuples of length `len` in lexicographic order.
fn monotone_tuples(simplices: &HashSet<Vec<u32>>, vertices: u32, len: usize) -> Vec<u32> {
    fn rec(
        simplices: &HashSet<Vec<u32>>,
        vertices: u32,
        len: usize,
        tuple: &mut Vec<u32>,
        distinct: &mut Vec<u32>,
        out: &mut Vec<u32>,
    ) {
        if tuple.len() == len {
            out.extend_from_slice(tuple);
            return;
        }
        let start = tuple.last().copied().unwrap_or(0);
        for v in start..vertices {
            let fresh = distinct.last() != Some(&v);
            if fresh {
                distinct.push(v);
                if !simplices.contains(distinct.as_slice()) {
                    distinct.pop();
                    continue;
                }
            }
            tuple.push(v);
            rec(simplices, vertices, len, tuple, distinct, out);
            tuple.pop();
            if fresh {
                distinct.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(simplices, vertices, len, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Simplicial set of `spec` truncated at level `truncation`.
pub fn from_ordered_complex(spec: &OrderedComplexSpec, truncation: usize) -> Result<SimplicialSet> {
    from_ordered_complex_capped(spec, truncation, super::cell_cap())
}

pub(crate) fn from_ordered_complex_capped(
    spec: &OrderedComplexSpec,
    truncation: usize,
    cap: u64,
) -> Result<SimplicialSet> {
    spec.validate()?;
    let simplices: HashSet<Vec<u32>> = spec.all_simplices().into_iter().collect();
    let estimate: u128 = (0..=truncation as u64)
        .map(|k| {
            simplices
                .iter()
                .map(|s| binomial(k, s.len() as u64 - 1))
                .sum::<u128>()
        })
        .sum();
    check_cap(estimate, cap)?;

    let keys: Vec<(usize, Vec<u32>)> = (0..=truncation)
        .map(|k| (k + 1, monotone_tuples(&simplices, spec.vertex_count, k + 1)))
        .collect();
    let face = |_k: usize, key: &[u32], i: usize, out: &mut Vec<u32>| {
        out.extend(key.iter().enumerate().filter(|&(p, _)| p != i).map(|(_, &v)| v));
    };
    let degen = |_k: usize, key: &[u32], j: usize, out: &mut Vec<u32>| {
        out.extend_from_slice(&key[..=j]);
        out.extend_from_slice(&key[j..]);
    };
    let payload = |_k: usize, key: &[u32], out: &mut Vec<u32>| out.extend_from_slice(key);
    let mut s = KeyedLevels {
        name: spec.name.clone(),
        keys,
        face: &face,
        degen: &degen,
        payload: &payload,
    }
    .assemble();
    s.dimension_bound = Some(spec.dimension());
    Ok(s)
}

/// Index of the level-`k` cell `(v, v, ..., v)`.
pub fn vertex_tower(s: &SimplicialSet, vertex: u32, level: usize) -> Option<usize> {
    let mut c = s.find(0, &[vertex])?;
    for k in 0..level {
        c = s.degeneracy(k, c, 0);
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{circle, sphere, torus};

    /// Brute force: all (k+1)-tuples over the vertices, kept if monotone and
    /// spanning a simplex.
    fn brute_force_count(spec: &OrderedComplexSpec, k: usize) -> usize {
        let simplices = spec.all_simplices();
        let n = spec.vertex_count as usize;
        let total = n.pow(k as u32 + 1);
        (0..total)
            .filter(|&code| {
                let mut t = Vec::new();
                let mut c = code;
                for _ in 0..=k {
                    t.push((c % n) as u32);
                    c /= n;
                }
                t.reverse();
                if t.windows(2).any(|w| w[0] > w[1]) {
                    return false;
                }
                let mut d = t.clone();
                d.dedup();
                simplices.contains(&d)
            })
            .count()
    }

    #[test]
    fn circle_counts() {
        let c = circle(3).unwrap();
        let s = from_ordered_complex(&c, 2).unwrap();
        assert_eq!(s.nondegenerate_counts(), vec![3, 3, 0]);
        assert_eq!(s.len(2), 9);
        assert_eq!(brute_force_count(&c, 2), 9);
        s.check_identities().unwrap();
    }

    #[test]
    fn sphere_counts() {
        let s = from_ordered_complex(&sphere(2).unwrap(), 3).unwrap();
        assert_eq!(s.nondegenerate_counts(), vec![4, 6, 4, 0]);
        s.check_identities().unwrap();
    }

    #[test]
    fn counts_match_enumeration_oracle() {
        let t = torus();
        let s = from_ordered_complex(&t, 3).unwrap();
        for k in 0..=3 {
            assert_eq!(s.len(k), brute_force_count(&t, k), "level {k}");
        }
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn degenerate_iff_repeat() {
        let s = from_ordered_complex(&sphere(2).unwrap(), 4).unwrap();
        for k in 0..=4 {
            for c in 0..s.len(k) {
                let p = s.payload(k, c);
                assert_eq!(s.is_degenerate(k, c), p.windows(2).any(|w| w[0] == w[1]));
            }
        }
        let t = vertex_tower(&s, 2, 3).unwrap();
        assert_eq!(s.payload(3, t), &[2, 2, 2, 2]);
    }

    #[test]
    fn respects_cap() {
        let err = from_ordered_complex_capped(&torus(), 6, 100).unwrap_err();
        assert!(matches!(err, crate::error::Error::CellCap { .. }));
    }
}
