//! Symmetric products, finite subset spaces and the spaces derived from them.
//!
//! `SP^n X` is built levelwise as multisets of `n` cells of `X`, and
//! `Sub_n X` as nonempty sets of at most `n` cells. Both agree cell for cell
//! with the quotients of `X^n` by the corresponding relations: a class is
//! represented by its lexicographically least tuple, which for a multiset is
//! the sorted tuple and for a set `{a < b < ...}` is `(a, ..., a, b, ...)`
//! with `a` repeated to fill `n` slots.
//!
//! Map names used in [`ConstructionResult::maps`]:
//! `q` (`X^n → SP^n`), `pi` (`SP^n → Sub_n`), `j` (singletons `X → Sub_n`),
//! `j_n` (`x ↦ x x_0^{n-1}`, `X → SP^n`), `diag` (`x ↦ x^n`, `X → SP^n`),
//! `j_x0` (`x ↦ {x, x_0}`), `incl_sub` (`Sub_{n-1} → Sub_n`),
//! `incl_fat` (fat diagonal `→ SP^n`), `alpha` (`SP^2 → Sub_3(X, x_0)`),
//! `proj` (a space onto its reduced quotient).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homology::basis::{induced_between, HomologyBasis, InducedMap};
use crate::homology::chain::{chain_map, normalized_chains, normalized_chains_upto, ChainComplex};
use crate::homology::{AbelianQuotient, HomologyGroup, Int, SparseIntMatrix};
use crate::space::OrderedComplexSpec;
use crate::sset::base::{binomial, from_ordered_complex_capped, vertex_tower};
use crate::sset::{cell_cap, check_cap, collapse, power, quotient, sub_object, KeyedLevels};
use crate::sset::{SSetMap, SimplicialSet};

pub const MAP_NAMES: &[&str] = &[
    "q", "pi", "j", "j_n", "diag", "j_x0", "incl_sub", "incl_fat", "alpha", "proj",
];

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Top simplicial level; defaults to `n·dim X + 1`.
    pub truncation: Option<usize>,
    /// Enumeration cap; defaults to [`cell_cap`].
    pub cell_cap: Option<u64>,
    /// Also build the maps that need an auxiliary space (`q`, `pi`,
    /// `incl_sub`).
    pub auxiliary: bool,
}

impl Options {
    pub fn truncation(d: usize) -> Self {
        Options {
            truncation: Some(d),
            ..Options::default()
        }
    }

    fn cap(&self) -> u64 {
        self.cell_cap.unwrap_or_else(cell_cap)
    }

    fn level(&self, n: usize, spec: &OrderedComplexSpec) -> usize {
        self.truncation.unwrap_or(n * spec.dimension() + 1)
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub space: Arc<SimplicialSet>,
    pub maps: BTreeMap<String, SSetMap>,
    /// Level above which the space has no nondegenerate cells.
    pub dimension_bound: Option<usize>,
}

impl ConstructionResult {
    pub fn map(&self, name: &str) -> Result<&SSetMap> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::UnknownMap(name.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Multiset,
    Set,
}

/// `SP^n` or `Sub_n` of a simplicial set, keyed by sorted cell tuples of `x`.
struct Symmetric {
    x: Arc<SimplicialSet>,
    n: usize,
    kind: Kind,
    space: Arc<SimplicialSet>,
}

fn canonical(kind: Kind, n: usize, elems: &mut Vec<u32>) {
    elems.sort_unstable();
    if kind == Kind::Set {
        elems.dedup();
        let pad = n - elems.len();
        let first = elems[0];
        elems.splice(0..0, std::iter::repeat(first).take(pad));
    }
}

fn estimate(kind: Kind, n: usize, x: &SimplicialSet) -> u128 {
    (0..=x.truncation())
        .map(|k| {
            let m = x.len(k) as u64;
            match kind {
                Kind::Multiset => binomial(m + n as u64 - 1, n as u64),
                Kind::Set => (1..=n as u64).map(|s| binomial(m, s)).sum(),
            }
        })
        .sum()
}

/// Sorted keys of one level.
fn level_keys(kind: Kind, n: usize, m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut t = Vec::with_capacity(n);
    match kind {
        Kind::Multiset => {
            fn rec(n: usize, m: u32, t: &mut Vec<u32>, out: &mut Vec<u32>) {
                if t.len() == n {
                    out.extend_from_slice(t);
                    return;
                }
                for v in t.last().copied().unwrap_or(0)..m {
                    t.push(v);
                    rec(n, m, t, out);
                    t.pop();
                }
            }
            rec(n, m, &mut t, &mut out);
        }
        Kind::Set => {
            // sets {a < b < ...} of size s, padded in front with a
            fn rec(size: usize, m: u32, t: &mut Vec<u32>, sets: &mut Vec<Vec<u32>>) {
                if t.len() == size {
                    sets.push(t.clone());
                    return;
                }
                let start = t.last().map_or(0, |v| v + 1);
                for v in start..m {
                    t.push(v);
                    rec(size, m, t, sets);
                    t.pop();
                }
            }
            let mut sets = Vec::new();
            for size in 1..=n {
                rec(size, m, &mut t, &mut sets);
            }
            let mut keys: Vec<Vec<u32>> = sets
                .into_iter()
                .map(|mut s| {
                    canonical(Kind::Set, n, &mut s);
                    s
                })
                .collect();
            keys.par_sort_unstable();
            for k in keys {
                out.extend_from_slice(&k);
            }
        }
    }
    out
}

impl Symmetric {
    fn build(x: &Arc<SimplicialSet>, n: usize, kind: Kind, name: String, cap: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        check_cap(estimate(kind, n, x), cap)?;
        let keys: Vec<(usize, Vec<u32>)> = (0..=x.truncation())
            .into_par_iter()
            .map(|k| (n, level_keys(kind, n, x.len(k) as u32)))
            .collect();
        let face = |k: usize, key: &[u32], i: usize, out: &mut Vec<u32>| {
            out.extend(key.iter().map(|&e| x.face(k, e as usize, i) as u32));
            canonical(kind, n, out);
        };
        let degen = |k: usize, key: &[u32], j: usize, out: &mut Vec<u32>| {
            out.extend(key.iter().map(|&e| x.degeneracy(k, e as usize, j) as u32));
            canonical(kind, n, out);
        };
        let payload = |k: usize, key: &[u32], out: &mut Vec<u32>| {
            for &e in key {
                out.extend_from_slice(x.payload(k, e as usize));
            }
        };
        let mut space = KeyedLevels {
            name,
            keys,
            face: &face,
            degen: &degen,
            payload: &payload,
        }
        .assemble();
        if let Some(b) = x.dimension_bound() {
            space.set_dimension_bound(n * b)?;
        }
        Ok(Symmetric {
            x: x.clone(),
            n,
            kind,
            space: Arc::new(space),
        })
    }

    /// Index of the cell with the given coordinates (in any order).
    fn index(&self, k: usize, elems: &[u32]) -> usize {
        let mut e = elems.to_vec();
        canonical(self.kind, self.n, &mut e);
        let mut payload = Vec::new();
        for &c in &e {
            payload.extend_from_slice(self.x.payload(k, c as usize));
        }
        self.space.find(k, &payload).expect("canonical key present")
    }

    /// Coordinates of a cell, as cells of `x`.
    fn elements(&self, k: usize, cell: usize) -> Vec<u32> {
        elements_of(&self.x, &self.space, k, cell)
    }

    /// Map `X → self` sending a cell `σ` to the class of `f(σ)`.
    fn map_from_x(&self, f: impl Fn(usize, u32) -> Vec<u32> + Sync) -> Result<SSetMap> {
        SSetMap::from_fn(self.x.clone(), self.space.clone(), |k, c| {
            self.index(k, &f(k, c as u32))
        })
    }
}

fn elements_of(x: &SimplicialSet, s: &SimplicialSet, k: usize, cell: usize) -> Vec<u32> {
    let w = x.payload_width(k);
    s.payload(k, cell)
        .chunks(w)
        .map(|chunk| x.find(k, chunk).expect("coordinate is a cell of the base") as u32)
        .collect()
}

fn levels_of(f: &SSetMap) -> Vec<Vec<u32>> {
    (0..=f.top_level()).map(|k| f.level(k).to_vec()).collect()
}

fn renamed_source(
    s: Arc<SimplicialSet>,
    f: SSetMap,
    name: String,
) -> Result<(Arc<SimplicialSet>, SSetMap)> {
    let (levels, target) = (levels_of(&f), f.target().clone());
    drop(f);
    let mut t = Arc::unwrap_or_clone(s);
    t.set_name(name);
    let t = Arc::new(t);
    let f = SSetMap::new(t.clone(), target, levels)?;
    Ok((t, f))
}

fn renamed_target(
    s: Arc<SimplicialSet>,
    f: SSetMap,
    name: String,
) -> Result<(Arc<SimplicialSet>, SSetMap)> {
    let levels = levels_of(&f);
    let source = f.source().clone();
    drop(f);
    let mut t = Arc::unwrap_or_clone(s);
    t.set_name(name);
    let t = Arc::new(t);
    let f = SSetMap::new(source, t.clone(), levels)?;
    Ok((t, f))
}

fn base(spec: &OrderedComplexSpec, truncation: usize, cap: u64) -> Result<Arc<SimplicialSet>> {
    Ok(Arc::new(from_ordered_complex_capped(spec, truncation, cap)?))
}

fn towers(x: &SimplicialSet, basepoint: u32) -> Vec<u32> {
    (0..=x.truncation())
        .map(|k| vertex_tower(x, basepoint, k).expect("basepoint is a vertex") as u32)
        .collect()
}

fn symmetric(
    spec: &OrderedComplexSpec,
    n: usize,
    kind: Kind,
    opts: &Options,
) -> Result<(Symmetric, Vec<u32>)> {
    let d = opts.level(n, spec);
    let x = base(spec, d, opts.cap())?;
    let label = match kind {
        Kind::Multiset => format!("SP{n}({})", spec.name),
        Kind::Set => format!("Sub{n}({})", spec.name),
    };
    let sym = Symmetric::build(&x, n, kind, label, opts.cap())?;
    let tower = towers(&x, spec.basepoint);
    Ok((sym, tower))
}

/// `SP^n X` with `j_n`, `diag` and, with `auxiliary`, `q`.
pub fn symmetric_product(
    spec: &OrderedComplexSpec,
    n: usize,
    opts: &Options,
) -> Result<ConstructionResult> {
    let (sp, tower) = symmetric(spec, n, Kind::Multiset, opts)?;
    let mut maps = BTreeMap::new();
    maps.insert(
        "j_n".to_string(),
        sp.map_from_x(|k, c| {
            let mut v = vec![tower[k]; n];
            v[0] = c;
            v
        })?,
    );
    maps.insert("diag".to_string(), sp.map_from_x(|_, c| vec![c; n])?);
    if opts.auxiliary {
        check_cap(
            (0..=sp.x.truncation())
                .map(|k| (sp.x.len(k) as u128).pow(n as u32))
                .sum(),
            opts.cap(),
        )?;
        let (xn, proj) = power(&sp.x, n)?;
        let q = SSetMap::from_fn(xn, sp.space.clone(), |k, c| {
            let coords: Vec<u32> = proj.iter().map(|p| p.apply(k, c) as u32).collect();
            sp.index(k, &coords)
        })?;
        maps.insert("q".to_string(), q);
    }
    Ok(ConstructionResult {
        dimension_bound: sp.space.dimension_bound(),
        space: sp.space,
        maps,
    })
}

/// `Sub_n X` with `j`, `j_x0` (for `n >= 2`) and, with `auxiliary`, `pi`
/// and `incl_sub`.
pub fn finite_subset_space(
    spec: &OrderedComplexSpec,
    n: usize,
    opts: &Options,
) -> Result<ConstructionResult> {
    let (sub, tower) = symmetric(spec, n, Kind::Set, opts)?;
    let mut maps = BTreeMap::new();
    maps.insert("j".to_string(), sub.map_from_x(|_, c| vec![c])?);
    if n >= 2 {
        maps.insert("j_x0".to_string(), sub.map_from_x(|k, c| vec![c, tower[k]])?);
    }
    if opts.auxiliary {
        let sp = Symmetric::build(
            &sub.x,
            n,
            Kind::Multiset,
            format!("SP{n}({})", spec.name),
            opts.cap(),
        )?;
        let pi = SSetMap::from_fn(sp.space.clone(), sub.space.clone(), |k, c| {
            sub.index(k, &sp.elements(k, c))
        })?;
        maps.insert("pi".to_string(), pi);
        if n >= 2 {
            let lower = Symmetric::build(
                &sub.x,
                n - 1,
                Kind::Set,
                format!("Sub{}({})", n - 1, spec.name),
                opts.cap(),
            )?;
            let incl = SSetMap::from_fn(lower.space.clone(), sub.space.clone(), |k, c| {
                sub.index(k, &lower.elements(k, c))
            })?;
            maps.insert("incl_sub".to_string(), incl);
        }
    }
    Ok(ConstructionResult {
        dimension_bound: sub.space.dimension_bound(),
        space: sub.space,
        maps,
    })
}

fn distinct(v: &[u32]) -> usize {
    let mut d = v.len();
    for w in v.windows(2) {
        if w[0] == w[1] {
            d -= 1;
        }
    }
    d
}

/// The fat diagonal of `SP^n X` (classes with a repeated coordinate) with
/// its inclusion `incl_fat`.
pub fn fat_diagonal(
    spec: &OrderedComplexSpec,
    n: usize,
    opts: &Options,
) -> Result<ConstructionResult> {
    if n < 2 {
        return Err(Error::InvalidParameter("fat diagonal needs n >= 2".into()));
    }
    let (sp, _) = symmetric(spec, n, Kind::Multiset, opts)?;
    let (fat, incl) = sub_object(&sp.space, |k, c| distinct(&sp.elements(k, c)) < n)?;
    let (fat, incl) = renamed_source(fat, incl, format!("FatDiag{n}({})", spec.name))?;
    Ok(ConstructionResult {
        dimension_bound: fat.dimension_bound(),
        space: fat,
        maps: BTreeMap::from([("incl_fat".to_string(), incl)]),
    })
}

/// `Sub_3(X, x_0)` as `SP^2 X` with `[σ,σ] ~ [σ, x_0]` at every level,
/// with the quotient map `alpha` and `j_x0 = alpha ∘ j_2`.
pub fn based_subset3(spec: &OrderedComplexSpec, opts: &Options) -> Result<ConstructionResult> {
    let sp = symmetric_product(spec, 2, opts)?;
    let (diag, j2) = (sp.map("diag")?, sp.map("j_n")?);
    let x = diag.source().clone();
    let pairs: Vec<(usize, usize, usize)> = (0..=x.truncation())
        .flat_map(|k| (0..x.len(k)).map(move |c| (k, c)))
        .map(|(k, c)| (k, diag.apply(k, c), j2.apply(k, c)))
        .filter(|(_, a, b)| a != b)
        .collect();
    let (q, alpha) = quotient(&sp.space, &pairs)?;
    let (q, alpha) = renamed_target(q, alpha, format!("Sub3({},x0)", spec.name))?;
    let j_x0 = j2.then(&alpha)?;
    Ok(ConstructionResult {
        dimension_bound: q.dimension_bound(),
        space: q,
        maps: BTreeMap::from([("alpha".to_string(), alpha), ("j_x0".to_string(), j_x0)]),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedKind {
    Sp,
    Sub,
}

/// `SP^n X / SP^{n-1} X` (the latter through the basepoint) or
/// `Sub_n X / Sub_{n-1} X`, with the collapse map `proj`.
pub fn reduced(
    spec: &OrderedComplexSpec,
    n: usize,
    kind: ReducedKind,
    opts: &Options,
) -> Result<ConstructionResult> {
    if n < 2 {
        return Err(Error::InvalidParameter("reduced constructions need n >= 2".into()));
    }
    let (sym, tower, label) = match kind {
        ReducedKind::Sp => {
            let (s, t) = symmetric(spec, n, Kind::Multiset, opts)?;
            (s, t, format!("barSP{n}({})", spec.name))
        }
        ReducedKind::Sub => {
            let (s, t) = symmetric(spec, n, Kind::Set, opts)?;
            (s, t, format!("barSub{n}({})", spec.name))
        }
    };
    let (_, incl) = sub_object(&sym.space, |k, c| {
        let e = sym.elements(k, c);
        match kind {
            ReducedKind::Sp => e.contains(&tower[k]),
            ReducedKind::Sub => distinct(&e) < n,
        }
    })?;
    let (q, proj) = collapse(&sym.space, &incl)?;
    let (q, proj) = renamed_target(q, proj, label)?;
    Ok(ConstructionResult {
        dimension_bound: q.dimension_bound(),
        space: q,
        maps: BTreeMap::from([("proj".to_string(), proj)]),
    })
}

/// The chain complex `C(SP^2 X) ⊕ |C(X)|` with `d|c| = j_2 c − Δc − |∂c|`,
/// where `|c|` has degree `deg c + 1` and the basepoint vertex has no
/// shifted copy.
pub fn w2_chain_model(spec: &OrderedComplexSpec, opts: &Options) -> Result<ChainComplex> {
    let sp = symmetric_product(spec, 2, opts)?;
    let (diag, j2) = (sp.map("diag")?, sp.map("j_n")?);
    let x = diag.source().clone();
    let top = sp.space.truncation();
    let (nsp, nx) = rayon::join(
        || normalized_chains(&sp.space),
        || normalized_chains_upto(&x, top - 1),
    );
    let (nsp, nx) = (nsp?, nx?);
    let bp = nx
        .generator(0, x.find(0, &[spec.basepoint]).expect("basepoint vertex"))
        .expect("vertices are nondegenerate");
    // position of |c| among the shifted generators of degree deg c + 1
    let shifted = |deg: usize, g: usize| -> Option<usize> {
        match deg {
            0 if g == bp => None,
            0 if g > bp => Some(g - 1),
            _ => Some(g),
        }
    };
    let shifted_rank = |deg: usize| -> usize {
        let r = nx.complex.rank(deg);
        if deg == 0 {
            r - 1
        } else {
            r
        }
    };
    let boundaries: Vec<SparseIntMatrix> = (0..=top)
        .into_par_iter()
        .map(|k| {
            let own = nsp.complex.rank(k);
            let extra = if k == 0 { 0 } else { shifted_rank(k - 1) };
            if k == 0 {
                return SparseIntMatrix::zero(0, own);
            }
            let lower_own = nsp.complex.rank(k - 1);
            let lower_extra = if k == 1 { 0 } else { shifted_rank(k - 2) };
            let bsp = nsp.complex.boundary(k);
            let mut columns: Vec<Vec<(u32, Int)>> = (0..own)
                .map(|j| bsp.column(j).map(|(i, v)| (i as u32, v.clone())).collect())
                .collect();
            let jm = chain_map(j2, &nx, &nsp, k - 1);
            let dm = chain_map(diag, &nx, &nsp, k - 1);
            for g in 0..nx.complex.rank(k - 1) {
                if shifted(k - 1, g).is_none() {
                    continue;
                }
                let mut col: BTreeMap<u32, Int> = BTreeMap::new();
                for (i, v) in jm.column(g) {
                    let e = col.entry(i as u32).or_insert(Int::ZERO);
                    *e = &*e + v;
                }
                for (i, v) in dm.column(g) {
                    let e = col.entry(i as u32).or_insert(Int::ZERO);
                    *e = &*e - v;
                }
                if k >= 2 {
                    for (i, v) in nx.complex.boundary(k - 1).column(g) {
                        if let Some(p) = shifted(k - 2, i) {
                            let e = col.entry((lower_own + p) as u32).or_insert(Int::ZERO);
                            *e = &*e - v;
                        }
                    }
                }
                columns.push(col.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            }
            debug_assert_eq!(columns.len(), own + extra);
            SparseIntMatrix::from_columns(lower_own + lower_extra, columns)
        })
        .collect();
    let exact = nsp.complex.exact_through().min(nx.complex.exact_through() + 1);
    ChainComplex::new(boundaries, exact)
}

/// `H_*(SP^2 X)` modulo the image of `Δ_* − j_*` from `H_*(X)`, degree by
/// degree, together with the induced maps used.
#[derive(Clone, Debug)]
pub struct CoproductModel {
    pub groups: Vec<HomologyGroup>,
    pub sp2: Vec<HomologyGroup>,
    pub diag: Vec<InducedMap>,
    pub j: Vec<InducedMap>,
    pub quotients: Vec<AbelianQuotient>,
}

impl CoproductModel {
    /// Class in `H_k(Sub_3(X, x_0))` of `Δ_*` of the `i`-th generator of
    /// `H_k(X)`, in the invariant-factor coordinates of the quotient.
    pub fn diagonal_image(&self, k: usize, i: usize) -> Vec<BigInt> {
        self.quotients[k].class_of(&self.diag[k].image_of(i))
    }
}

pub fn sub3_homology_via_coproduct(
    spec: &OrderedComplexSpec,
    opts: &Options,
) -> Result<CoproductModel> {
    let sp = symmetric_product(spec, 2, opts)?;
    let (diag, j2) = (sp.map("diag")?, sp.map("j_n")?);
    let x = diag.source().clone();
    let (nsp, nx) = rayon::join(|| normalized_chains(&sp.space), || normalized_chains(&x));
    let (nsp, nx) = (nsp?, nx?);
    let top = nsp.complex.exact_through().min(nx.complex.exact_through());
    let per_degree: Vec<Result<(InducedMap, InducedMap, AbelianQuotient)>> = (0..=top)
        .into_par_iter()
        .map(|k| {
            let bsp = HomologyBasis::new(&nsp.complex, k)?;
            let bx = HomologyBasis::new(&nx.complex, k)?;
            let dm = induced_between(&bx, &bsp, &chain_map(diag, &nx, &nsp, k))?;
            let jm = induced_between(&bx, &bsp, &chain_map(j2, &nx, &nsp, k))?;
            let rels: Vec<Vec<BigInt>> = (0..bx.generators().len())
                .map(|i| {
                    dm.image_of(i)
                        .iter()
                        .zip(jm.image_of(i))
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            let q = AbelianQuotient::new(bsp.orders(), &rels);
            Ok((dm, jm, q))
        })
        .collect();
    let mut model = CoproductModel {
        groups: Vec::new(),
        sp2: Vec::new(),
        diag: Vec::new(),
        j: Vec::new(),
        quotients: Vec::new(),
    };
    for (k, r) in per_degree.into_iter().enumerate() {
        let (dm, jm, q) = r?;
        model.groups.push(q.group(k));
        model.sp2.push(dm.target.clone());
        model.diag.push(dm);
        model.j.push(jm);
        model.quotients.push(q);
    }
    Ok(model)
}

/// `true` if every entry is zero.
pub fn is_zero_vector(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::ring::Coefficients;
    use crate::homology::{groups, sset_homology};
    use crate::space::{circle, interval, sphere};

    fn z(s: &SimplicialSet) -> Vec<HomologyGroup> {
        sset_homology(s, Coefficients::Integers).unwrap()
    }

    #[test]
    fn sp1_is_x() {
        let c = circle(4).unwrap();
        let sp = symmetric_product(&c, 1, &Options::default()).unwrap();
        let x = from_ordered_complex_capped(&c, 2, u64::MAX).unwrap();
        assert_eq!(sp.space.cell_counts(), x.cell_counts());
        assert_eq!(z(&sp.space), z(&x));
    }

    #[test]
    fn sp2_matches_quotient_of_square() {
        let c = circle(3).unwrap();
        let x = Arc::new(from_ordered_complex_capped(&c, 3, u64::MAX).unwrap());
        let (sq, proj) = power(&x, 2).unwrap();
        let pairs: Vec<(usize, usize, usize)> = (0..=3)
            .flat_map(|k| (0..sq.len(k)).map(move |c| (k, c)))
            .map(|(k, c)| {
                let (a, b) = (proj[0].apply(k, c), proj[1].apply(k, c));
                let swapped = (0..sq.len(k))
                    .find(|&d| proj[0].apply(k, d) == b && proj[1].apply(k, d) == a)
                    .unwrap();
                (k, c, swapped)
            })
            .collect();
        let (q, _) = quotient(&sq, &pairs).unwrap();
        let sp = Symmetric::build(&x, 2, Kind::Multiset, "sp".into(), u64::MAX).unwrap();
        assert_eq!(q.cell_counts(), sp.space.cell_counts());
        for k in 0..=3 {
            for c in 0..q.len(k) {
                assert_eq!(q.payload(k, c), sp.space.payload(k, c));
                assert_eq!(q.is_degenerate(k, c), sp.space.is_degenerate(k, c));
            }
        }
        assert_eq!(z(&sp.space), groups(&[(1, &[]), (1, &[]), (0, &[]), (0, &[])]));
    }

    #[test]
    fn sub2_is_sp2() {
        let c = circle(3).unwrap();
        let sp = symmetric_product(&c, 2, &Options::default()).unwrap();
        let sub = finite_subset_space(&c, 2, &Options::default()).unwrap();
        assert_eq!(*sp.space.cell_counts(), *sub.space.cell_counts());
        for k in 0..=sp.space.truncation() {
            for i in 0..sp.space.len(k) {
                assert_eq!(sp.space.payload(k, i), sub.space.payload(k, i));
            }
        }
    }

    #[test]
    fn interval_square_is_contractible() {
        let (sq, _) = power(&Arc::new(from_ordered_complex_capped(&interval(), 3, u64::MAX).unwrap()), 2).unwrap();
        assert_eq!(z(&sq)[..3], groups(&[(1, &[]), (0, &[]), (0, &[])])[..]);
    }

    #[test]
    fn pi_after_q_is_direct_quotient() {
        let c = circle(3).unwrap();
        let opts = Options {
            truncation: Some(3),
            auxiliary: true,
            ..Options::default()
        };
        let sp = symmetric_product(&c, 3, &opts).unwrap();
        let sub = finite_subset_space(&c, 3, &opts).unwrap();
        let q = sp.map("q").unwrap();
        let pi = sub.map("pi").unwrap();
        let composite = q.then(pi).unwrap();
        let direct = Symmetric {
            x: sp.map("diag").unwrap().source().clone(),
            n: 3,
            kind: Kind::Set,
            space: sub.space.clone(),
        };
        let (_, proj) = power(&direct.x, 3).unwrap();
        for k in 0..=3 {
            for c in 0..composite.source().len(k) {
                let coords: Vec<u32> = proj.iter().map(|p| p.apply(k, c) as u32).collect();
                assert_eq!(composite.apply(k, c), direct.index(k, &coords));
            }
        }
    }

    #[test]
    fn maps_are_simplicial_and_named() {
        let s = sphere(2).unwrap();
        let opts = Options {
            auxiliary: true,
            ..Options::default()
        };
        let sub = finite_subset_space(&s, 2, &opts).unwrap();
        for name in sub.maps.keys() {
            assert!(MAP_NAMES.contains(&name.as_str()));
        }
        assert!(sub.map("incl_sub").is_ok());
        assert!(matches!(sub.map("alpha"), Err(Error::UnknownMap(_))));
    }

    #[test]
    fn fat_diagonal_of_sp2_is_x() {
        let f = fat_diagonal(&sphere(2).unwrap(), 2, &Options::default()).unwrap();
        let h = z(&f.space);
        assert_eq!(h[..4], groups(&[(1, &[]), (0, &[]), (1, &[]), (0, &[])])[..]);
    }

    #[test]
    fn based_subset3_agrees_with_subsets_containing_basepoint() {
        let c = circle(3).unwrap();
        let b = based_subset3(&c, &Options::default()).unwrap();
        let sub = finite_subset_space(&c, 3, &Options::truncation(3)).unwrap();
        let sym_x = sub.map("j").unwrap().source().clone();
        let tower = towers(&sym_x, 0);
        let (with_bp, _) = sub_object(&sub.space, |k, c| {
            elements_of(&sym_x, &sub.space, k, c).contains(&tower[k])
        })
        .unwrap();
        assert_eq!(b.space.nondegenerate_counts(), with_bp.nondegenerate_counts());
        assert_eq!(z(&b.space), z(&with_bp));
    }
}
