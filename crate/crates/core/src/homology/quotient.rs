//! Finitely generated abelian groups given by generators and relations.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{smith_dense, DenseMatrix};
use super::{big_mod, HomologyGroup};

/// `Z^g` modulo the span of some relation vectors, diagonalized so that
/// classes can be compared.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    u: DenseMatrix,
    /// Order of each diagonal coordinate (`0` for a free one), length `g`.
    diagonal: Vec<BigInt>,
}

impl AbelianQuotient {
    /// Generators with the given orders (`None` for free), modulo `relations`
    /// (vectors of length `orders.len()`).
    pub fn new(orders: &[Option<BigInt>], relations: &[Vec<BigInt>]) -> Self {
        let g = orders.len();
        let mut columns: Vec<Vec<BigInt>> = Vec::new();
        for (i, o) in orders.iter().enumerate() {
            if let Some(t) = o {
                let mut c = vec![BigInt::zero(); g];
                c[i] = t.clone();
                columns.push(c);
            }
        }
        columns.extend(relations.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned());
        let mut a = DenseMatrix::zeros(g, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), g, "relation length");
            for (i, v) in c.iter().enumerate() {
                a[(i, j)] = v.clone();
            }
        }
        let s = smith_dense(&a, true);
        let mut diagonal: Vec<BigInt> = s.diagonal.iter().map(|d| d.abs()).collect();
        diagonal.resize(g, BigInt::zero());
        AbelianQuotient {
            u: s.transforms.expect("transforms requested").u,
            diagonal,
        }
    }

    /// The group as `Z^b ⊕ ⊕ Z/t`, reported in degree `dim`.
    pub fn group(&self, dim: usize) -> HomologyGroup {
        let betti = self.diagonal.iter().filter(|d| d.is_zero()).count();
        let torsion: Vec<u64> = self
            .diagonal
            .iter()
            .filter(|d| *d > &BigInt::one())
            .map(|d| d.to_u64().expect("torsion coefficient fits in u64"))
            .collect();
        HomologyGroup::new(dim, betti, &torsion)
    }

    /// Coordinates of the class of `v` on the nontrivial cyclic summands,
    /// torsion coordinates reduced into `0..t`. Zero iff `v` is a relation.
    pub fn class_of(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self.u.mul_vec(v);
        w.iter()
            .zip(&self.diagonal)
            .filter(|(_, d)| !d.is_one())
            .map(|(x, d)| big_mod(x, d))
            .collect()
    }

    pub fn is_zero_class(&self, v: &[BigInt]) -> bool {
        self.class_of(v).iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn z2_modulo_diagonal_doubling() {
        // Z^2 / <(2, 2)> = Z + Z2
        let q = AbelianQuotient::new(&[None, None], &[b(&[2, 2])]);
        assert_eq!(q.group(0), HomologyGroup::new(0, 1, &[2]));
        assert!(q.is_zero_class(&b(&[2, 2])));
        assert!(!q.is_zero_class(&b(&[1, 1])));
        assert!(!q.is_zero_class(&b(&[1, 0])));
    }

    #[test]
    fn torsion_generators_and_no_relations() {
        let q = AbelianQuotient::new(&[Some(BigInt::from(4)), None], &[]);
        assert_eq!(q.group(3), HomologyGroup::new(3, 1, &[4]));
        assert!(q.is_zero_class(&b(&[4, 0])));
        assert!(!q.is_zero_class(&b(&[2, 0])));
        let q = AbelianQuotient::new(&[Some(BigInt::from(4))], &[b(&[2])]);
        assert_eq!(q.group(1), HomologyGroup::new(1, 0, &[2]));
        let trivial = AbelianQuotient::new(&[], &[]);
        assert!(trivial.group(0).is_zero());
    }
}
