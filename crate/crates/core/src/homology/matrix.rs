//! Sparse and dense integer matrices, and Smith normal form with transforms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::int::Int;

/// A sparse integer matrix in compressed-column form.
///
/// Entries are kept in canonical `(column, row)` order with no explicit zeros
/// and no repeated positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<Int>,
}

impl SparseIntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            col_ptr: vec![0; cols + 1],
            row_idx: Vec::new(),
            vals: Vec::new(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Int)>,
    {
        let mut t: Vec<(usize, usize, Int)> = triplets.into_iter().collect();
        for (r, c, _) in &t {
            assert!(*r < rows && *c < cols, "entry ({r},{c}) out of range");
        }
        t.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut columns: Vec<Vec<(u32, Int)>> = vec![Vec::new(); cols];
        for (r, c, v) in t {
            let col = &mut columns[c];
            match col.last_mut() {
                Some((lr, lv)) if *lr as usize == r => *lv = &*lv + &v,
                _ => col.push((r as u32, v)),
            }
        }
        Self::from_columns(rows, columns)
    }

    /// Builds a matrix from per-column entry lists sorted by row.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, Int)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        let mut row_idx = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for col in columns {
            let mut last: Option<u32> = None;
            for (r, v) in col {
                assert!((r as usize) < rows, "row {r} out of range");
                if let Some(l) = last {
                    assert!(r > l, "column entries must be strictly sorted");
                }
                last = Some(r);
                if !v.is_zero() {
                    row_idx.push(r);
                    vals.push(v);
                }
            }
            col_ptr.push(row_idx.len());
        }
        SparseIntMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            vals,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, &Int)> + '_ {
        let r = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[r.clone()]
            .iter()
            .map(|&i| i as usize)
            .zip(&self.vals[r])
    }

    /// All entries in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Int)> + '_ {
        (0..self.cols).flat_map(move |j| self.column(j).map(move |(i, v)| (i, j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            d[(i, j)] = v.to_big();
        }
        d
    }

    pub fn from_dense(d: &DenseMatrix) -> Self {
        let columns = (0..d.cols)
            .map(|j| {
                (0..d.rows)
                    .filter(|&i| !d[(i, j)].is_zero())
                    .map(|i| (i as u32, Int::from_big(d[(i, j)].clone())))
                    .collect()
            })
            .collect();
        Self::from_columns(d.rows, columns)
    }

    /// `self * rhs`, exactly.
    pub fn mul(&self, rhs: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut columns = Vec::with_capacity(rhs.cols);
        let mut acc: std::collections::BTreeMap<u32, Int> = Default::default();
        for j in 0..rhs.cols {
            acc.clear();
            for (k, b) in rhs.column(j) {
                for (i, a) in self.column(k) {
                    let e = acc.entry(i as u32).or_insert(Int::ZERO);
                    *e = &*e + &(a * b);
                }
            }
            columns.push(
                std::mem::take(&mut acc)
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        SparseIntMatrix::from_columns(self.rows, columns)
    }
}

/// A dense row-major matrix of big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        s += &self[(i, j)] * x;
                    }
                }
                s
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Rows `start..` as a new matrix.
    pub fn rows_from(&self, start: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows - start, self.cols);
        for i in start..self.rows {
            for j in 0..self.cols {
                m[(i - start, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Columns `start..` as a new matrix.
    pub fn cols_from(&self, start: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols - start);
        for i in 0..self.rows {
            for j in start..self.cols {
                m[(i, j - start)] = self[(i, j)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let add = s * c;
                self.data[dst * self.cols + j] += add;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let add = s * c;
                self.data[i * self.cols + dst] += add;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + c];
            *v = -std::mem::take(v);
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }
}

/// Unimodular transforms with `U·A·V = D`, plus their inverses.
#[derive(Clone, Debug)]
pub struct Transforms {
    pub u: DenseMatrix,
    pub u_inv: DenseMatrix,
    pub v: DenseMatrix,
    pub v_inv: DenseMatrix,
}

#[derive(Clone, Debug)]
pub struct SmithForm {
    rows: usize,
    cols: usize,
    /// Diagonal of D, length `min(rows, cols)`; nonzero entries first, each
    /// dividing the next.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<Transforms>,
}

impl SmithForm {
    pub fn d_matrix(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diagonal[..self.rank]
    }

    /// Re-multiplies `U·A·V` and the inverse pairs and compares exactly.
    pub fn certify(&self, a: &DenseMatrix) -> bool {
        let Some(t) = &self.transforms else {
            return false;
        };
        let divides = self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            }
        });
        divides
            && self.diagonal.iter().all(|d| !d.is_negative())
            && t.u.mul(a).mul(&t.v) == self.d_matrix()
            && t.u.mul(&t.u_inv) == DenseMatrix::identity(self.rows)
            && t.v.mul(&t.v_inv) == DenseMatrix::identity(self.cols)
    }
}

struct Elim {
    a: DenseMatrix,
    t: Option<Transforms>,
}

impl Elim {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(t) = &mut self.t {
            t.u.swap_rows(i, j);
            t.u_inv.swap_cols(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(t) = &mut self.t {
            t.v.swap_cols(i, j);
            t.v_inv.swap_rows(i, j);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_row(dst, src, c);
        if let Some(t) = &mut self.t {
            t.u.add_row(dst, src, c);
            t.u_inv.add_col(src, dst, &-c);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.a.add_col(dst, src, c);
        if let Some(t) = &mut self.t {
            t.v.add_col(dst, src, c);
            t.v_inv.add_row(src, dst, &-c);
        }
    }
    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some(t) = &mut self.t {
            t.u.negate_row(r);
            t.u_inv.negate_col(r);
        }
    }
}

/// Smith normal form of a dense matrix.
pub fn smith_dense(a: &DenseMatrix, with_transforms: bool) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut e = Elim {
        a: a.clone(),
        t: with_transforms.then(|| Transforms {
            u: DenseMatrix::identity(m),
            u_inv: DenseMatrix::identity(m),
            v: DenseMatrix::identity(n),
            v_inv: DenseMatrix::identity(n),
        }),
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &e.a[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < e.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        e.swap_rows(t, pi);
        e.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !e.a[(i, t)].is_zero() {
                    let q = &e.a[(i, t)] / &e.a[(t, t)];
                    if !q.is_zero() {
                        e.add_row(i, t, &-q);
                    }
                    if !e.a[(i, t)].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !e.a[(t, j)].is_zero() {
                    let q = &e.a[(t, j)] / &e.a[(t, t)];
                    if !q.is_zero() {
                        e.add_col(j, t, &-q);
                    }
                    if !e.a[(t, j)].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                let mut best = (t, t);
                for i in t + 1..m {
                    let x = &e.a[(i, t)];
                    if !x.is_zero() && x.abs() < e.a[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    let x = &e.a[(t, j)];
                    if !x.is_zero() && x.abs() < e.a[best].abs() {
                        best = (t, j);
                    }
                }
                e.swap_rows(t, best.0);
                e.swap_cols(t, best.1);
                continue;
            }
            let p = e.a[(t, t)].clone();
            let bad_row =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&e.a[(i, j)] % &p).is_zero()));
            match bad_row {
                Some(i) => e.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if e.a[(t, t)].is_negative() {
            e.negate_row(t);
        }
        t += 1;
    }
    let diagonal: Vec<BigInt> = (0..m.min(n)).map(|i| e.a[(i, i)].clone()).collect();
    let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
    debug_assert!(e.a.is_diagonal());
    SmithForm {
        rows: m,
        cols: n,
        diagonal,
        rank,
        transforms: e.t,
    }
}

/// Smith normal form with transforms; the certificate `U·M·V = D` is
/// re-multiplied and checked before returning.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let dense = m.to_dense();
    let snf = smith_dense(&dense, true);
    assert!(snf.certify(&dense), "Smith normal form certificate failed");
    snf
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use proptest::prelude::*;

    /// Determinant by cofactor expansion (independent of elimination).
    fn det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut s = BigInt::zero();
        for j in 0..n {
            if m[0][j] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                .collect();
            let term = BigInt::from(m[0][j]) * det(&minor);
            if j % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        s
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    /// Invariant factors via determinantal divisors: d_k = D_k / D_{k-1}
    /// where D_k is the gcd of all k×k minors.
    fn oracle_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
        let (r, c) = (m.len(), m.first().map_or(0, |x| x.len()));
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=r.min(c) {
            let mut g = BigInt::zero();
            for rs in subsets(r, k) {
                for cs in subsets(c, k) {
                    let minor: Vec<Vec<i64>> =
                        rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = g.gcd(&det(&minor));
                }
            }
            if g.is_zero() {
                break;
            }
            out.push(&g / &prev);
            prev = g;
        }
        out
    }

    #[test]
    fn textbook_two_by_two() {
        let m = DenseMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]);
        let snf = smith_dense(&m, true);
        assert!(snf.certify(&m));
        assert_eq!(snf.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
        let rows = vec![vec![2i64, 4], vec![6, 8]];
        assert_eq!(oracle_factors(&rows), snf.diagonal);
    }

    #[test]
    fn identity_and_zero() {
        let id = DenseMatrix::identity(3);
        let snf = smith_dense(&id, true);
        assert!(snf.certify(&id));
        assert_eq!(snf.diagonal, vec![BigInt::one(); 3]);
        let t = snf.transforms.unwrap();
        assert_eq!(t.u, id);
        assert_eq!(t.v, id);

        let z = SparseIntMatrix::zero(2, 3);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.rank, 0);
        assert!(snf.diagonal.iter().all(|d| d.is_zero()));
    }

    #[test]
    fn sparse_product_and_triplets() {
        let a = SparseIntMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, Int::from(1)), (0, 0, Int::from(1)), (1, 1, Int::from(3)), (1, 0, Int::from(0))],
        );
        assert_eq!(a.nnz(), 2);
        let b = a.mul(&a);
        let d = b.to_dense();
        assert_eq!(d[(0, 0)], BigInt::from(4));
        assert_eq!(d[(1, 1)], BigInt::from(9));
        assert_eq!(SparseIntMatrix::from_dense(&d), b);
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(
            rows in 1usize..4, cols in 1usize..4,
            vals in proptest::collection::vec(-6i64..7, 16)
        ) {
            let m: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| vals[i * 4 + j]).collect()).collect();
            let dense = DenseMatrix::from_rows(&m);
            let snf = smith_dense(&dense, true);
            prop_assert!(snf.certify(&dense));
            prop_assert_eq!(snf.invariant_factors().to_vec(), oracle_factors(&m));
            let t = snf.transforms.as_ref().unwrap();
            if rows <= 3 && cols <= 3 {
                let to_i64 = |d: &DenseMatrix| -> Vec<Vec<i64>> {
                    (0..d.rows()).map(|i| (0..d.cols()).map(|j| i64::try_from(&d[(i, j)]).unwrap()).collect()).collect()
                };
                prop_assert_eq!(det(&to_i64(&t.u)).abs(), BigInt::one());
                prop_assert_eq!(det(&to_i64(&t.v)).abs(), BigInt::one());
            }
        }
    }
}
