use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Fp;

/// Dense row-major matrix over F_q.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MatFq {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Output of a row reduction: the reduced matrix (zero rows kept at the
/// bottom) and the pivot column of each nonzero row, in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatFq,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The nonzero rows only.
    pub fn basis(&self) -> MatFq {
        self.matrix.select_rows(0..self.rank())
    }
}

impl MatFq {
    pub fn zeros(q: u32, rows: usize, cols: usize) -> Self {
        MatFq {
            q,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(q: u32, n: usize) -> Self {
        let mut m = MatFq::zeros(q, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Entries are reduced mod q.
    pub fn from_vec(q: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        MatFq {
            q,
            rows,
            cols,
            data: data.into_iter().map(|x| x % q).collect(),
        }
    }

    pub fn from_rows(q: u32, rows: &[Vec<u32>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        MatFq::from_vec(q, rows.len(), cols, rows.concat())
    }

    /// Block-diagonal matrix with the given square-or-rectangular blocks.
    pub fn block_diag(q: u32, blocks: &[MatFq]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = MatFq::zeros(q, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn field(&self) -> Fp {
        Fp::new(self.q)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.q;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> MatFq {
        let mut data = Vec::new();
        let mut rows = 0;
        for i in idx {
            data.extend_from_slice(self.row(i));
            rows += 1;
        }
        MatFq {
            q: self.q,
            rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> MatFq {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            data.extend(idx.iter().map(|&j| self.get(i, j)));
        }
        MatFq {
            q: self.q,
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    pub fn transpose(&self) -> MatFq {
        let mut t = MatFq::zeros(self.q, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &MatFq) -> MatFq {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        assert_eq!(self.q, other.q);
        let mut out = MatFq::zeros(self.q, self.rows, other.cols);
        for i in 0..self.rows {
            vec_mat_mul_into(self.row(i), other, &mut out.data[i * other.cols..(i + 1) * other.cols]);
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MatFq {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = MatFq::identity(self.q, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Smallest `e >= 1` with `self^e = I`, searching up to `limit`.
    pub fn multiplicative_order(&self, limit: u64) -> Option<u64> {
        let id = MatFq::identity(self.q, self.rows);
        let mut acc = self.clone();
        for e in 1..=limit {
            if acc == id {
                return Some(e);
            }
            acc = acc.mul(self);
        }
        None
    }

    pub fn scale(&self, c: u32) -> MatFq {
        let f = self.field();
        MatFq {
            q: self.q,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    pub fn sub(&self, other: &MatFq) -> MatFq {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field();
        MatFq {
            q: self.q,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    /// Canonical reduced echelon form with right-hand pivots: each pivot is
    /// the rightmost nonzero entry of its row, pivot columns are zero in all
    /// other rows, and pivots decrease strictly down the rows.
    pub fn rref(&self) -> Rref {
        let cols: Vec<usize> = (0..self.cols).rev().collect();
        self.reduce_with_column_order(&cols)
    }

    /// Standard reduced row echelon form (leftmost pivots, increasing).
    pub fn rref_left(&self) -> Rref {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.reduce_with_column_order(&cols)
    }

    fn reduce_with_column_order(&self, order: &[usize]) -> Rref {
        let f = self.field();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for &c in order {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(p, next);
            let inv = f.inv(m.get(next, c));
            m.scale_row(next, inv);
            for i in 0..m.rows {
                if i != next {
                    let factor = m.get(i, c);
                    if factor != 0 {
                        m.add_row_multiple(i, next, f.neg(factor));
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref_left().rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Basis (as rows) of the right null space `{v : M v^T = 0}`.
    pub fn kernel(&self) -> MatFq {
        let f = self.field();
        let r = self.rref_left();
        let mut is_pivot = vec![false; self.cols];
        for &p in &r.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = MatFq::zeros(self.q, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, 1);
            for (row, &pc) in r.pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.matrix.get(row, fc)));
            }
        }
        basis
    }

    pub fn inverse(&self) -> Result<MatFq> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut aug = MatFq::zeros(self.q, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let cols: Vec<usize> = (0..n).collect();
        let r = aug.reduce_with_column_order(&cols);
        if r.rank() < n || r.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::NotInvertible);
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(r.matrix.select_cols(&idx))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: u32) {
        let f = self.field();
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, c);
        }
    }

    /// row[target] += c * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: u32) {
        let f = self.field();
        for j in 0..self.cols {
            let v = f.add(self.get(target, j), f.mul(c, self.get(source, j)));
            self.data[target * self.cols + j] = v;
        }
    }
}

/// `out = v * m` for a row vector `v`.
#[inline]
pub fn vec_mat_mul_into(v: &[u32], m: &MatFq, out: &mut [u32]) {
    debug_assert_eq!(v.len(), m.rows);
    debug_assert_eq!(out.len(), m.cols);
    let q = m.q as u64;
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (i, &x) in v.iter().enumerate() {
            acc += x as u64 * m.data[i * m.cols + j] as u64;
        }
        *o = (acc % q) as u32;
    }
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFq[q={}, {}x{}]", self.q, self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn rref_of_identity_and_zero() {
        let id = MatFq::identity(3, 4);
        let r = id.rref();
        assert_eq!(r.pivots, vec![3, 2, 1, 0]);
        assert_eq!(r.basis().rref().matrix.rank(), 4);
        let z = MatFq::zeros(2, 2, 3);
        let r = z.rref();
        assert!(r.pivots.is_empty());
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn right_pivot_form_of_small_example() {
        // Row space over F_2 of [[1,1,0],[0,1,1]] has nonzero vectors
        // 110, 011, 101. Right-pivot canonical basis: the unique vector
        // ending at column 3 with zero in column 2 is 101; the one ending at
        // column 2 is 110.
        let m = MatFq::from_rows(2, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![2, 1]);
        assert_eq!(r.matrix.to_rows(), vec![vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn kernel_examples() {
        let m = MatFq::from_rows(2, &[vec![1, 1]]);
        assert_eq!(m.kernel().to_rows(), vec![vec![1, 1]]);
        let z = MatFq::zeros(3, 2, 2);
        assert_eq!(z.kernel().rref_left().matrix, MatFq::identity(3, 2));
        let inv = MatFq::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        assert_eq!(inv.kernel().rows(), 0);
    }

    #[test]
    fn inverse_round_trip() {
        let m = MatFq::from_rows(3, &[vec![1, 2, 0], vec![0, 1, 1], vec![2, 0, 1]]);
        if let Ok(inv) = m.inverse() {
            assert_eq!(m.mul(&inv), MatFq::identity(3, 3));
        } else {
            assert!(!m.is_invertible());
        }
        let singular = MatFq::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(singular.inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn row_space_determines_rref_exhaustively_f2() {
        // All 2x3 matrices over F_2: equal row spaces (as sets of vectors)
        // iff equal canonical forms.
        let mut seen: alloc::collections::BTreeMap<Vec<Vec<u32>>, BTreeSet<Vec<u32>>> =
            Default::default();
        for bits in 0u32..64 {
            let data: Vec<u32> = (0..6).map(|b| (bits >> b) & 1).collect();
            let m = MatFq::from_vec(2, 2, 3, data);
            let span: BTreeSet<Vec<u32>> = (0..4u32)
                .map(|c| {
                    (0..3)
                        .map(|j| ((c & 1) * m.get(0, j) + ((c >> 1) & 1) * m.get(1, j)) % 2)
                        .collect()
                })
                .collect();
            let key = m.rref().basis().to_rows();
            let prev = seen.entry(key).or_insert_with(|| span.clone());
            assert_eq!(*prev, span);
        }
        let distinct_spans: BTreeSet<_> = seen.values().cloned().collect();
        assert_eq!(distinct_spans.len(), seen.len());
    }
}
