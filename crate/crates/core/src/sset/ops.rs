//! Products, quotients, subobjects and collapses of simplicial sets.

use std::collections::VecDeque;
use std::sync::Arc;

use super::union_find::UnionFind;
use super::{check_cap, KeyedLevels, Level, SSetMap, SimplicialSet};
use crate::error::{Error, Result};

/// Levelwise `n`-fold product with its `n` projections.
pub fn power(s: &Arc<SimplicialSet>, n: usize) -> Result<(Arc<SimplicialSet>, Vec<SSetMap>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("power needs n >= 1".into()));
    }
    let top = s.truncation();
    let estimate: u128 = (0..=top)
        .map(|k| (s.len(k) as u128).saturating_pow(n as u32))
        .fold(0u128, |a, b| a.saturating_add(b));
    check_cap(estimate, super::cell_cap())?;

    let keys: Vec<(usize, Vec<u32>)> = (0..=top)
        .map(|k| {
            let m = s.len(k) as u32;
            let total = (m as usize).pow(n as u32);
            let mut flat = Vec::with_capacity(total * n);
            let mut t = vec![0u32; n];
            for _ in 0..total {
                flat.extend_from_slice(&t);
                for p in (0..n).rev() {
                    t[p] += 1;
                    if t[p] < m {
                        break;
                    }
                    t[p] = 0;
                }
            }
            (n, flat)
        })
        .collect();
    let face = |k: usize, key: &[u32], i: usize, out: &mut Vec<u32>| {
        out.extend(key.iter().map(|&c| s.face(k, c as usize, i) as u32));
    };
    let degen = |k: usize, key: &[u32], j: usize, out: &mut Vec<u32>| {
        out.extend(key.iter().map(|&c| s.degeneracy(k, c as usize, j) as u32));
    };
    let payload = |k: usize, key: &[u32], out: &mut Vec<u32>| {
        for &c in key {
            out.extend_from_slice(s.payload(k, c as usize));
        }
    };
    let mut prod = KeyedLevels {
        name: format!("{}^{}", s.name(), n),
        keys,
        face: &face,
        degen: &degen,
        payload: &payload,
    }
    .assemble();
    prod.dimension_bound = s.dimension_bound.map(|b| b * n);
    let prod = Arc::new(prod);
    let projections = (0..n)
        .map(|p| {
            SSetMap::from_fn(prod.clone(), s.clone(), |k, c| {
                // tuples are enumerated in mixed radix, most significant first
                let m = s.len(k);
                (c / m.pow((n - 1 - p) as u32)) % m
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((prod, projections))
}

/// Quotient by the smallest simplicial equivalence relation containing
/// `pairs` (given as `(level, a, b)`), with its projection.
pub fn quotient(
    s: &Arc<SimplicialSet>,
    pairs: &[(usize, usize, usize)],
) -> Result<(Arc<SimplicialSet>, SSetMap)> {
    let top = s.truncation();
    let mut uf: Vec<UnionFind> = (0..=top).map(|k| UnionFind::new(s.len(k))).collect();
    let mut queue: VecDeque<(usize, usize, usize)> = pairs.iter().copied().collect();
    while let Some((k, a, b)) = queue.pop_front() {
        if k > top || a >= s.len(k) || b >= s.len(k) {
            return Err(Error::InvalidParameter(format!("pair ({k}, {a}, {b}) out of range")));
        }
        if !uf[k].union(a, b) {
            continue;
        }
        if k > 0 {
            for i in 0..=k {
                queue.push_back((k - 1, s.face(k, a, i), s.face(k, b, i)));
            }
        }
        if k < top {
            for j in 0..=k {
                queue.push_back((k + 1, s.degeneracy(k, a, j), s.degeneracy(k, b, j)));
            }
        }
    }

    // classes are numbered in order of their smallest member, which is also
    // their lexicographically smallest payload
    let class_of: Vec<Vec<u32>> = uf
        .iter_mut()
        .map(|u| {
            let mut next = 0u32;
            let mut id_of_root = vec![u32::MAX; u.len()];
            (0..u.len())
                .map(|c| {
                    let r = u.find(c);
                    if r == c {
                        id_of_root[c] = next;
                        next += 1;
                    }
                    id_of_root[r]
                })
                .collect()
        })
        .collect();
    let mut levels = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let width = s.payload_width(k);
        let reps: Vec<usize> = {
            let mut seen = vec![false; s.len(k)];
            let mut reps = Vec::new();
            for c in 0..s.len(k) {
                let id = class_of[k][c] as usize;
                if !seen[id] {
                    seen[id] = true;
                    reps.push(c);
                }
            }
            reps
        };
        let mut payload = Vec::with_capacity(reps.len() * width);
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for &r in &reps {
            payload.extend_from_slice(s.payload(k, r));
            if k > 0 {
                faces.extend((0..=k).map(|i| class_of[k - 1][s.face(k, r, i)]));
            }
            if k < top {
                degeneracies.extend((0..=k).map(|j| class_of[k + 1][s.degeneracy(k, r, j)]));
            }
        }
        levels.push(Level {
            width,
            payload,
            faces,
            degeneracies,
            degenerate: Vec::new(),
        });
    }
    let mut q = SimplicialSet::from_levels(format!("{}/~", s.name()), levels);
    q.dimension_bound = s.dimension_bound;
    let q = Arc::new(q);
    let proj = SSetMap::new(s.clone(), q.clone(), class_of)?;
    Ok((q, proj))
}

/// The subobject of cells selected by `keep(level, cell)`, with its inclusion.
/// Fails if the selection is not closed under faces and degeneracies.
pub fn sub_object(
    s: &Arc<SimplicialSet>,
    keep: impl Fn(usize, usize) -> bool,
) -> Result<(Arc<SimplicialSet>, SSetMap)> {
    let top = s.truncation();
    let selected: Vec<Vec<bool>> = (0..=top)
        .map(|k| (0..s.len(k)).map(|c| keep(k, c)).collect())
        .collect();
    for k in 0..=top {
        for c in (0..s.len(k)).filter(|&c| selected[k][c]) {
            let fail = |reason: String| Error::NotClosed {
                level: k,
                payload: s.payload(k, c).to_vec(),
                reason,
            };
            if k > 0 {
                if let Some(i) = (0..=k).find(|&i| !selected[k - 1][s.face(k, c, i)]) {
                    return Err(fail(format!("but its face d{i} is not selected")));
                }
            }
            if k < top {
                if let Some(j) = (0..=k).find(|&j| !selected[k + 1][s.degeneracy(k, c, j)]) {
                    return Err(fail(format!("but its degeneracy s{j} is not selected")));
                }
            }
        }
    }
    let new_index: Vec<Vec<u32>> = selected
        .iter()
        .map(|sel| {
            let mut next = 0;
            sel.iter()
                .map(|&b| {
                    if b {
                        next += 1;
                        next - 1
                    } else {
                        u32::MAX
                    }
                })
                .collect()
        })
        .collect();
    let mut levels = Vec::with_capacity(top + 1);
    let mut inclusion = Vec::with_capacity(top + 1);
    for k in 0..=top {
        let cells: Vec<usize> = (0..s.len(k)).filter(|&c| selected[k][c]).collect();
        let mut payload = Vec::new();
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        for &c in &cells {
            payload.extend_from_slice(s.payload(k, c));
            if k > 0 {
                faces.extend((0..=k).map(|i| new_index[k - 1][s.face(k, c, i)]));
            }
            if k < top {
                degeneracies.extend((0..=k).map(|j| new_index[k + 1][s.degeneracy(k, c, j)]));
            }
        }
        levels.push(Level {
            width: s.payload_width(k),
            payload,
            faces,
            degeneracies,
            degenerate: Vec::new(),
        });
        inclusion.push(cells.iter().map(|&c| c as u32).collect());
    }
    let mut sub = SimplicialSet::from_levels(format!("sub({})", s.name()), levels);
    sub.dimension_bound = s.dimension_bound;
    let sub = Arc::new(sub);
    let incl = SSetMap::new(sub.clone(), s.clone(), inclusion)?;
    Ok((sub, incl))
}

/// Collapses the image of `inclusion` (a subobject of `s`) to a point.
pub fn collapse(
    s: &Arc<SimplicialSet>,
    inclusion: &SSetMap,
) -> Result<(Arc<SimplicialSet>, SSetMap)> {
    if !Arc::ptr_eq(inclusion.target(), s) && **inclusion.target() != **s {
        return Err(Error::LevelMismatch("subobject does not include into the space".into()));
    }
    let sub = inclusion.source();
    if sub.len(0) == 0 {
        return Err(Error::EmptySubobject);
    }
    if sub.truncation() < s.truncation() {
        return Err(Error::LevelMismatch("subobject truncated below the space".into()));
    }
    let mut pairs = Vec::new();
    for k in 0..=s.truncation() {
        let cells = inclusion.level(k);
        if let Some((&first, rest)) = cells.split_first() {
            pairs.extend(rest.iter().map(|&c| (k, first as usize, c as usize)));
        }
    }
    let (q, proj) = quotient(s, &pairs)?;
    let mut q = Arc::try_unwrap(q).unwrap_or_else(|a| (*a).clone());
    q.set_name(format!("{}/{}", s.name(), sub.name()));
    let q = Arc::new(q);
    let levels = (0..=s.truncation()).map(|k| proj.level(k).to_vec()).collect();
    let proj = SSetMap::new(s.clone(), q.clone(), levels)?;
    Ok((q, proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{circle, interval, sphere};
    use crate::sset::from_ordered_complex;

    fn base(spec: crate::space::OrderedComplexSpec, d: usize) -> Arc<SimplicialSet> {
        Arc::new(from_ordered_complex(&spec, d).unwrap())
    }

    #[test]
    fn square_of_circle() {
        let c = base(circle(3).unwrap(), 2);
        let (p, proj) = power(&c, 2).unwrap();
        assert_eq!(p.nondegenerate_counts(), vec![9, 27, 18]);
        assert_eq!(p.euler_characteristic(), 0);
        p.check_identities().unwrap();
        assert_eq!(proj.len(), 2);
        // product cell is degenerate iff some s_j splits every coordinate
        for k in 0..=2 {
            for cell in 0..p.len(k) {
                let pl = p.payload(k, cell);
                let (a, b) = pl.split_at(k + 1);
                let split = (0..k).any(|j| a[j] == a[j + 1] && b[j] == b[j + 1]);
                assert_eq!(p.is_degenerate(k, cell), split);
            }
        }
    }

    #[test]
    fn first_power_is_identity() {
        let s = base(sphere(2).unwrap(), 3);
        let (p, proj) = power(&s, 1).unwrap();
        assert_eq!(p.cell_counts(), s.cell_counts());
        for k in 0..=3 {
            for c in 0..s.len(k) {
                assert_eq!(p.payload(k, c), s.payload(k, c));
                assert_eq!(proj[0].apply(k, c), c);
            }
        }
    }

    #[test]
    fn empty_quotient_is_unchanged() {
        let s = base(interval(), 3);
        let (q, proj) = quotient(&s, &[]).unwrap();
        assert_eq!(*q, SimplicialSet { name: q.name().to_string(), ..(*s).clone() });
        assert!(proj.agrees_with(&SSetMap::identity(s.clone())));
    }

    #[test]
    fn identifying_vertices_of_triangle() {
        let s = base(circle(3).unwrap(), 2);
        let (q, _) = quotient(&s, &[(0, 0, 1), (0, 1, 2)]).unwrap();
        q.check_identities().unwrap();
        assert_eq!(q.nondegenerate_counts(), vec![1, 3, 0]);
        assert_eq!(q.euler_characteristic(), -2);
    }

    #[test]
    fn quotient_is_closed_under_faces() {
        let s = base(sphere(2).unwrap(), 3);
        // glue two edges [0,1] ~ [2,3]
        let a = s.find(1, &[0, 1]).unwrap();
        let b = s.find(1, &[2, 3]).unwrap();
        let (q, proj) = quotient(&s, &[(1, a, b)]).unwrap();
        q.check_identities().unwrap();
        for k in 1..=3 {
            for x in 0..s.len(k) {
                for y in 0..s.len(k) {
                    if proj.apply(k, x) == proj.apply(k, y) {
                        for i in 0..=k {
                            assert_eq!(
                                proj.apply(k - 1, s.face(k, x, i)),
                                proj.apply(k - 1, s.face(k, y, i))
                            );
                        }
                    }
                }
            }
        }
        // vertices 0~2 and 1~3
        assert_eq!(q.len(0), 2);
    }

    #[test]
    fn sub_object_requires_closure() {
        let s = base(circle(3).unwrap(), 2);
        let e = s.find(1, &[0, 1]).unwrap();
        let err = sub_object(&s, |k, c| k == 1 && c == e).unwrap_err();
        assert!(matches!(err, Error::NotClosed { level: 1, .. }));

        // the edge [0,1] with its faces and degeneracies
        let (sub, incl) = sub_object(&s, |k, c| s.payload(k, c).iter().all(|&v| v <= 1)).unwrap();
        assert_eq!(sub.nondegenerate_counts(), vec![2, 1, 0]);
        assert_eq!(incl.target().len(0), 3);
    }

    #[test]
    fn collapse_everything_is_a_point() {
        let s = base(sphere(2).unwrap(), 3);
        let (_, incl) = sub_object(&s, |_, _| true).unwrap();
        let (q, _) = collapse(&s, &incl).unwrap();
        assert_eq!(q.cell_counts(), vec![1, 1, 1, 1]);
        assert_eq!(q.nondegenerate_counts(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn collapse_rejects_empty() {
        let s = base(circle(3).unwrap(), 2);
        let (_, incl) = sub_object(&s, |_, _| false).unwrap();
        assert!(matches!(collapse(&s, &incl), Err(Error::EmptySubobject)));
    }
}
