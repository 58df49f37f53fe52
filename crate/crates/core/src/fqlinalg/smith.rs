use alloc::vec::Vec;

use num_bigint::BigUint;

use super::MatFq;
use crate::poly::{Fp, Poly};

/// Dense matrix over F_q[x].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatFq {
    q: u32,
    rows: usize,
    cols: usize,
    data: Vec<Poly>,
}

impl PolyMatFq {
    /// x I - M for a square M.
    pub fn characteristic(m: &MatFq) -> Self {
        assert!(m.is_square());
        let q = m.q();
        let f = Fp::new(q);
        let n = m.rows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let c = f.neg(m.get(i, j));
                let mut p = Poly::constant(q, c);
                if i == j {
                    p = p.add(&Poly::x(q));
                }
                data.push(p);
            }
        }
        PolyMatFq { q, rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.data[i * self.cols + j] = p;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[t] -= c * row[s]
    fn row_sub(&mut self, t: usize, s: usize, c: &Poly) {
        for j in 0..self.cols {
            let v = self.get(t, j).sub(&c.mul(self.get(s, j)));
            self.set(t, j, v);
        }
    }

    /// col[t] -= c * col[s]
    fn col_sub(&mut self, t: usize, s: usize, c: &Poly) {
        for i in 0..self.rows {
            let v = self.get(i, t).sub(&c.mul(self.get(i, s)));
            self.set(i, t, v);
        }
    }

    /// Diagonal of the Smith normal form, monic, `min(rows, cols)` entries
    /// (zero polynomials for rank deficiency, placed last).
    pub fn smith_diagonal(&self) -> Vec<Poly> {
        let mut m = self.clone();
        let n = m.rows.min(m.cols);
        let mut diag = Vec::with_capacity(n);
        for t in 0..n {
            loop {
                // lowest-degree nonzero entry in the trailing block, ties by position
                let mut best: Option<(usize, usize, usize)> = None;
                for i in t..m.rows {
                    for j in t..m.cols {
                        if let Some(d) = m.get(i, j).degree() {
                            if best.is_none_or(|(bd, _, _)| d < bd) {
                                best = Some((d, i, j));
                            }
                        }
                    }
                }
                let Some((_, pi, pj)) = best else {
                    break;
                };
                m.swap_rows(t, pi);
                m.swap_cols(t, pj);
                let pivot = m.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..m.rows {
                    let (quo, rem) = m.get(i, t).div_rem(&pivot);
                    m.row_sub(i, t, &quo);
                    clean &= rem.is_zero();
                }
                for j in t + 1..m.cols {
                    let (quo, rem) = m.get(t, j).div_rem(&pivot);
                    m.col_sub(j, t, &quo);
                    clean &= rem.is_zero();
                }
                if !clean {
                    continue;
                }
                // divisibility of the rest by the pivot
                let bad = (t + 1..m.rows)
                    .find(|&i| (t + 1..m.cols).any(|j| !pivot.divides(m.get(i, j))));
                match bad {
                    Some(i) => {
                        let neg_one = Poly::constant(m.q, m.q - 1);
                        m.row_sub(t, i, &neg_one);
                    }
                    None => break,
                }
            }
            diag.push(m.get(t, t).monic());
        }
        diag
    }
}

/// Invariant factors d_1 | d_2 | ... | d_n of x I - M, leading 1s included.
pub fn invariant_factors(m: &MatFq) -> Vec<Poly> {
    if m.rows() == 0 {
        return Vec::new();
    }
    PolyMatFq::characteristic(m).smith_diagonal()
}

/// Sum over i, j of deg gcd(d_i(A), d_j(B)).
pub fn cecioni_frobenius_dim(a: &MatFq, b: &MatFq) -> usize {
    let fa = invariant_factors(a);
    let fb = invariant_factors(b);
    fa.iter()
        .flat_map(|x| fb.iter().map(move |y| x.gcd(y).degree().unwrap_or(0)))
        .sum()
}

/// Matrix of X -> AX - XB on a x b matrices, X flattened row-major, acting
/// on column vectors.
pub fn sylvester_operator(a: &MatFq, b: &MatFq) -> MatFq {
    assert!(a.is_square() && b.is_square());
    let q = a.q();
    let f = Fp::new(q);
    let (na, nb) = (a.rows(), b.rows());
    let mut op = MatFq::zeros(q, na * nb, na * nb);
    for i in 0..na {
        for j in 0..nb {
            let row = i * nb + j;
            for k in 0..na {
                let col = k * nb + j;
                op.set(row, col, f.add(op.get(row, col), a.get(i, k)));
            }
            for k in 0..nb {
                let col = i * nb + k;
                op.set(row, col, f.sub(op.get(row, col), b.get(k, j)));
            }
        }
    }
    op
}

/// Dimension of `{X : AX = XB}` and its size q^dim.
pub fn sylvester_solution_count(a: &MatFq, b: &MatFq) -> (usize, BigUint) {
    let op = sylvester_operator(a, b);
    let dim = op.cols() - op.rank();
    (dim, BigUint::from(a.q()).pow(dim as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::companion_matrix;
    use alloc::vec;

    fn p(q: u32, c: &[u32]) -> Poly {
        Poly::from_coeffs(q, c.to_vec())
    }

    #[test]
    fn zero_matrix_factors() {
        let z = MatFq::zeros(2, 2, 2);
        assert_eq!(invariant_factors(&z), vec![p(2, &[0, 1]), p(2, &[0, 1])]);
        let (dim, count) = sylvester_solution_count(&z, &z);
        assert_eq!(dim, 4);
        assert_eq!(count, BigUint::from(16u32));
    }

    #[test]
    fn companion_factors_and_counts() {
        let f = p(2, &[1, 1, 1]);
        let c = companion_matrix(&f);
        assert_eq!(invariant_factors(&c), vec![Poly::one(2), f.clone()]);
        assert_eq!(sylvester_solution_count(&c, &c).0, 2);
        assert_eq!(cecioni_frobenius_dim(&c, &c), 2);
        let g = p(2, &[1, 1, 0, 1]);
        let h = p(2, &[1, 0, 1, 1]);
        let (cg, ch) = (companion_matrix(&g), companion_matrix(&h));
        assert_eq!(sylvester_solution_count(&cg, &ch).0, 0);
        assert_eq!(cecioni_frobenius_dim(&cg, &ch), 0);
        let dd = MatFq::block_diag(2, &[c.clone(), c.clone()]);
        assert_eq!(invariant_factors(&dd), vec![Poly::one(2), Poly::one(2), f.clone(), f]);
        assert_eq!(cecioni_frobenius_dim(&dd, &dd), sylvester_solution_count(&dd, &dd).0);
    }
}
