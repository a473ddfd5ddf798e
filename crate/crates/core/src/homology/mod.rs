//! Homology of chain complexes and simplicial sets.

pub mod basis;
pub mod chain;
pub mod int;
pub mod matrix;
pub mod pi1;
pub mod quotient;
pub(crate) mod reduce;
pub mod ring;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sset::SimplicialSet;
use chain::ChainComplex;
use matrix::{smith_dense, DenseMatrix};
use reduce::Reducer;
use ring::{Coefficients, Integers, PrimeField, Ring};

pub use basis::{induced_chain_map, induced_map, HomologyBasis, InducedMap};
pub use chain::{chain_map, normalized_chains, normalized_chains_upto, NormalizedChains};
pub use int::Int;
pub use matrix::{smith_normal_form, SmithForm, SparseIntMatrix};
pub use quotient::AbelianQuotient;

/// `H_dim ≅ Z^betti ⊕ ⊕ Z/t` (torsion coefficients ascending, each dividing
/// the next). Over `F_p` the torsion list is empty and `betti` is the
/// dimension. `reliable` is false in degrees where the chain complex is a
/// truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub dim: usize,
    pub betti: usize,
    pub torsion: Vec<u64>,
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub reliable: bool,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl HomologyGroup {
    pub fn new(dim: usize, betti: usize, torsion: &[u64]) -> Self {
        HomologyGroup {
            dim,
            betti,
            torsion: torsion.to_vec(),
            reliable: true,
        }
    }

    pub fn free(dim: usize, betti: usize) -> Self {
        Self::new(dim, betti, &[])
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Same group, ignoring the reliability flag.
    pub fn same_group(&self, other: &HomologyGroup) -> bool {
        self.dim == other.dim && self.betti == other.betti && self.torsion == other.torsion
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Shorthand for expected values: `groups(&[(1, &[]), (0, &[2])])` is
/// `H_0 = Z, H_1 = Z/2`.
pub fn groups(spec: &[(usize, &[u64])]) -> Vec<HomologyGroup> {
    spec.iter()
        .enumerate()
        .map(|(k, (b, t))| HomologyGroup::new(k, *b, t))
        .collect()
}

/// Homology in degrees `0..=top_degree` of the complex.
pub fn homology(complex: &ChainComplex, coeff: Coefficients) -> Result<Vec<HomologyGroup>> {
    let top = complex.top_degree();
    let mut out = match coeff {
        Coefficients::Integers => {
            let mut r = Reducer::new(Integers, complex, 0, top, false);
            r.run();
            integral_from_reduced(&r, top)
        }
        Coefficients::Mod(p) => {
            let mut r = Reducer::new(PrimeField::new(p)?, complex, 0, top, false);
            r.run();
            (0..=top)
                .map(|k| {
                    debug_assert!(r.alive(k).iter().all(|&c| r.boundary_of(k, c).is_empty()));
                    HomologyGroup::free(k, r.alive(k).len())
                })
                .collect()
        }
    };
    for g in out.iter_mut() {
        g.reliable = g.dim <= complex.exact_through();
    }
    Ok(out)
}

/// Homology of the normalized chains of a simplicial set.
pub fn sset_homology(s: &SimplicialSet, coeff: Coefficients) -> Result<Vec<HomologyGroup>> {
    homology(&normalized_chains(s)?.complex, coeff)
}

/// Dense matrix of the reduced `∂_k` (rows: surviving `k-1` cells, columns:
/// surviving `k` cells, or only those with nonzero boundary if
/// `skip_cycles`).
pub(crate) fn reduced_boundary<R: Ring<Elem = Int>>(
    r: &Reducer<R>,
    k: usize,
    skip_cycles: bool,
) -> DenseMatrix {
    let rows = if k == 0 { Vec::new() } else { r.alive(k - 1) };
    let mut cols = r.alive(k);
    if skip_cycles {
        cols.retain(|&c| !r.boundary_of(k, c).is_empty());
    }
    let mut m = DenseMatrix::zeros(rows.len(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        for (x, v) in r.boundary_of(k, c) {
            let i = rows.binary_search(x).expect("boundary of a surviving cell survives");
            m[(i, j)] = v.to_big();
        }
    }
    m
}

fn integral_from_reduced(r: &Reducer<Integers>, top: usize) -> Vec<HomologyGroup> {
    let smith: Vec<Option<SmithForm>> = (0..=top + 1)
        .map(|k| (k >= 1 && k <= top).then(|| smith_dense(&reduced_boundary(r, k, true), false)))
        .collect();
    let rank = |k: usize| smith[k].as_ref().map_or(0, |s| s.rank);
    (0..=top)
        .map(|k| {
            let n = r.alive(k).len();
            let torsion: Vec<u64> = smith[k + 1]
                .as_ref()
                .map(|s| {
                    s.invariant_factors()
                        .iter()
                        .filter(|d| !d.is_one())
                        .map(|d| d.to_u64().expect("torsion coefficient fits in u64"))
                        .collect()
                })
                .unwrap_or_default();
            HomologyGroup::new(k, n - rank(k) - rank(k + 1), &torsion)
        })
        .collect()
}

/// Euler characteristic from Betti numbers of the exact degrees.
pub fn euler_characteristic(groups: &[HomologyGroup]) -> i64 {
    groups
        .iter()
        .map(|g| if g.dim % 2 == 0 { g.betti as i64 } else { -(g.betti as i64) })
        .sum()
}

/// Checks the universal coefficient theorem degree by degree:
/// `dim H_k(F_p) = b_k + #{t in T_k : p | t} + #{t in T_{k-1} : p | t}`.
pub fn universal_coefficients_agree(
    integral: &[HomologyGroup],
    mod_p: &[HomologyGroup],
    p: u64,
) -> bool {
    let div = |g: &HomologyGroup| g.torsion.iter().filter(|&&t| t % p == 0).count();
    integral.iter().zip(mod_p).all(|(z, f)| {
        let below = if z.dim == 0 { 0 } else { div(&integral[z.dim - 1]) };
        f.betti == z.betti + div(z) + below
    })
}

pub(crate) fn big_mod(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        a.clone()
    } else {
        use num_integer::Integer;
        a.mod_floor(m)
    }
}
