//! Symbolic weights: products of q-numbers [t_r^{q^a}, t_s^{q^b}]_{q^m} and
//! of ratios of binomials 1 - t^e, and sums of such products over Schubert
//! cells.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinat::{
    beta_of_lambda, double_coset_blocks, inversion_table, inversions, join, lambda_blocks,
    min_coset_reps, partitions_in_box, standardize, weak_compositions_bounded, BoxedPartition,
    CosetPerm, StarRectangle,
};
use crate::error::{Error, Result};

/// The q-number [t_r^{q^a}, t_s^{q^b}]_{q^m} = sum over i + j = q^m - 1 of
/// A^i B^j. Variables are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QNumFactor {
    pub r: usize,
    pub a: u32,
    pub s: usize,
    pub b: u32,
    pub m: u32,
}

impl QNumFactor {
    pub fn new(r: usize, a: u32, s: usize, b: u32) -> Self {
        QNumFactor { r, a, s, b, m: 1 }
    }
}

fn power_tex(var: usize, e: u32) -> String {
    match e {
        0 => format!("t_{var}"),
        1 => format!("t_{var}^q"),
        _ => format!("t_{var}^{{q^{e}}}"),
    }
}

impl fmt::Display for QNumFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", power_tex(self.r, self.a), power_tex(self.s, self.b))?;
        if self.m > 1 {
            write!(f, "_{{q^{}}}", self.m)?;
        }
        Ok(())
    }
}

/// prod (1 - t_var^{num_i}) / prod (1 - t_var^{den_j}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RatioFactor {
    pub var: usize,
    pub num: Vec<u64>,
    pub den: Vec<u64>,
}

/// A product of q-numbers and ratio factors times a rational constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightProduct {
    pub factors: Vec<QNumFactor>,
    pub ratios: Vec<RatioFactor>,
    pub numer: i64,
    pub denom: u64,
}

impl Default for WeightProduct {
    fn default() -> Self {
        WeightProduct::one()
    }
}

impl WeightProduct {
    pub fn one() -> Self {
        WeightProduct {
            factors: Vec::new(),
            ratios: Vec::new(),
            numer: 1,
            denom: 1,
        }
    }

    pub fn from_factors(factors: Vec<QNumFactor>) -> Self {
        WeightProduct {
            factors,
            ..WeightProduct::one()
        }
    }

    pub fn from_ratio(r: RatioFactor) -> Self {
        WeightProduct {
            ratios: vec![r],
            ..WeightProduct::one()
        }
    }

    pub fn mul(mut self, other: WeightProduct) -> Self {
        self.factors.extend(other.factors);
        self.ratios.extend(other.ratios);
        self.numer *= other.numer;
        self.denom *= other.denom;
        self
    }

    /// Factors sorted, for multiset comparison.
    pub fn sorted_factors(&self) -> Vec<QNumFactor> {
        let mut f = self.factors.clone();
        f.sort();
        f
    }

    /// Largest variable index used.
    pub fn max_var(&self) -> usize {
        let f = self.factors.iter().map(|x| x.r.max(x.s));
        let r = self.ratios.iter().map(|x| x.var);
        f.chain(r).max().unwrap_or(0)
    }
}

impl fmt::Display for WeightProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() && self.ratios.is_empty() {
            return write!(f, "{}", self.numer);
        }
        for x in &self.factors {
            write!(f, "{x}")?;
        }
        for r in &self.ratios {
            write!(f, "R_{}({}/{})", r.var, r.num.len(), r.den.len())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub label: String,
    pub product: WeightProduct,
}

/// A sum of labelled weight products; `q` fixes the base of every q-number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSum {
    pub q: u64,
    pub terms: Vec<Term>,
}

impl WeightSum {
    pub fn new(q: u64) -> Self {
        WeightSum { q, terms: Vec::new() }
    }

    pub fn single(q: u64, label: impl Into<String>, product: WeightProduct) -> Self {
        WeightSum {
            q,
            terms: vec![Term {
                label: label.into(),
                product,
            }],
        }
    }

    pub fn push(&mut self, label: impl Into<String>, product: WeightProduct) {
        self.terms.push(Term {
            label: label.into(),
            product,
        });
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_var(&self) -> usize {
        self.terms.iter().map(|t| t.product.max_var()).max().unwrap_or(0)
    }
}

/// Weight of the cell at horizontal distance i and vertical distance j from
/// the bottom-left corner of a box of height h in block (r, s).
pub fn cell_weight(i: usize, j: usize, r: usize, s: usize, h: usize) -> QNumFactor {
    QNumFactor::new(r, (i + j) as u32, s, (i + h) as u32)
}

/// Cell weights of λ laid out like its echelon matrix: one vector per row
/// of λ, cells from left to right.
pub fn lambda_weight_table(lambda: &BoxedPartition, alpha: &[usize]) -> Result<Vec<Vec<QNumFactor>>> {
    let b = lambda_blocks(lambda, alpha)?;
    let l = alpha.len();
    let mut rows = Vec::with_capacity(lambda.k());
    for r in 0..l {
        let h = b.beta[r];
        for a in 0..h {
            let j = h - 1 - a;
            let mut row = Vec::new();
            for s in (r..l).rev() {
                for i in 0..b.blocks[r][s][a] {
                    row.push(cell_weight(i, j, r + 1, s + 1, h));
                }
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// wt(λ; α, k).
pub fn wt_lambda(lambda: &BoxedPartition, alpha: &[usize]) -> Result<WeightProduct> {
    let table = lambda_weight_table(lambda, alpha)?;
    Ok(WeightProduct::from_factors(table.into_iter().flatten().collect()))
}

/// Closed form for α = (1, ..., 1): prod over cells (i, j) of λ of
/// [t_{n-k-λ_i+i}, t_{n-k+λ'_j-j+1}^q]; row variable first.
pub fn wt_lambda_maximally_split(lambda: &BoxedPartition) -> WeightProduct {
    let (k, n) = (lambda.k(), lambda.k() + lambda.width());
    let conj = lambda.conjugate();
    let mut factors = Vec::new();
    for (i0, &li) in lambda.parts().iter().enumerate() {
        let i = i0 + 1;
        for j in 1..=li {
            let row = n - k - li + i;
            let col = n - k + conj[j - 1] + 1 - j;
            factors.push(QNumFactor::new(row, 0, col, 1));
        }
    }
    WeightProduct::from_factors(factors)
}

fn check_composition(alpha: &[usize], n: usize, what: &str) -> Result<()> {
    if alpha.is_empty() && n > 0 || alpha.contains(&0) || alpha.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameters(format!("{what} is not a composition of {n}")));
    }
    Ok(())
}

/// sum over λ in the k-by-(n-k) box of wt(λ; α, k).
pub fn grassmannian_csp_poly(q: u64, alpha: &[usize], k: usize) -> Result<WeightSum> {
    let n: usize = alpha.iter().sum();
    check_composition(alpha, n, "α")?;
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
    }
    let mut sum = WeightSum::new(q);
    for lam in partitions_in_box(k, n - k) {
        let p = wt_lambda(&lam, alpha)?;
        sum.push(lam.to_string(), p);
    }
    Ok(sum)
}

/// The same sum split by β(λ).
pub fn grassmannian_refined(q: u64, alpha: &[usize], k: usize) -> Result<BTreeMap<Vec<usize>, WeightSum>> {
    let n: usize = alpha.iter().sum();
    check_composition(alpha, n, "α")?;
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
    }
    let mut out: BTreeMap<Vec<usize>, WeightSum> = BTreeMap::new();
    for lam in partitions_in_box(k, n - k) {
        let beta = beta_of_lambda(&lam, alpha)?;
        let p = wt_lambda(&lam, alpha)?;
        out.entry(beta).or_insert_with(|| WeightSum::new(q)).push(lam.to_string(), p);
    }
    Ok(out)
}

/// Ratio form of the (q,t)-multinomial [n; β]_{q,t} in variable `var`.
pub fn qt_multinomial_ratio(q: u64, beta: &[usize], var: usize) -> RatioFactor {
    let n: usize = beta.iter().sum();
    let qp = |e: usize| q.pow(e as u32);
    let num = (0..n).map(|i| qp(n) - qp(i)).collect();
    let mut den = Vec::new();
    let mut s = 0;
    for &b in beta {
        den.extend((0..b).map(|i| qp(s + b) - qp(s + i)));
        s += b;
    }
    RatioFactor { var, num, den }
}

pub fn qt_multinomial(q: u64, beta: &[usize]) -> WeightProduct {
    WeightProduct::from_ratio(qt_multinomial_ratio(q, beta, 1))
}

/// Tree weight wt(w; t_var) of a word with distinct letters.
pub fn wt_w_single_var(w: &[usize], var: usize) -> WeightProduct {
    let std = standardize(w);
    WeightProduct::from_factors(
        inversion_table(&std)
            .into_iter()
            .map(|row| QNumFactor::new(var, row.a as u32, var, row.b as u32))
            .collect(),
    )
}

pub fn wt_w_single(w: &[usize]) -> WeightProduct {
    wt_w_single_var(w, 1)
}

/// Sum form of the (q,t)-multinomial: sum over W^β of wt(w; t).
pub fn qt_multinomial_sum(q: u64, beta: &[usize]) -> WeightSum {
    let mut sum = WeightSum::new(q);
    for w in min_coset_reps(beta) {
        sum.push(w.to_string(), wt_w_single(w.w()));
    }
    sum
}

/// Weight of one h-by-v star rectangle in F_{rs}.
pub fn wt_rectangle(h: usize, v: usize, r: usize, s: usize) -> WeightProduct {
    let mut f = Vec::with_capacity(h * v);
    for j in 0..h {
        for i in 0..v {
            f.push(cell_weight(i, j, r, s, h));
        }
    }
    WeightProduct::from_factors(f)
}

/// wt(F_{rs}; t_r, t_s).
pub fn wt_f_rs(rects: &[StarRectangle], r: usize, s: usize) -> WeightProduct {
    rects
        .iter()
        .fold(WeightProduct::one(), |acc, x| acc.mul(wt_rectangle(x.height, x.width, r, s)))
}

/// wt(w; α): tree weights on the diagonal blocks times rectangle weights.
pub fn wt_w_alpha(w: &CosetPerm, alpha: &[usize]) -> Result<WeightProduct> {
    let b = double_coset_blocks(w, alpha)?;
    let mut p = WeightProduct::one();
    for (s, ws) in b.w_s.iter().enumerate() {
        p = p.mul(wt_w_single_var(ws, s + 1));
    }
    for (&(r, s), rects) in &b.rectangles {
        p = p.mul(wt_f_rs(rects, r, s));
    }
    Ok(p)
}

/// X_{α,β}(t) = sum over W^β of wt(w; α).
pub fn x_alpha_beta(q: u64, alpha: &[usize], beta: &[usize]) -> Result<WeightSum> {
    let n: usize = alpha.iter().sum();
    check_composition(alpha, n, "α")?;
    check_composition(beta, n, "β")?;
    let mut sum = WeightSum::new(q);
    for w in min_coset_reps(beta) {
        let p = wt_w_alpha(&w, alpha)?;
        sum.push(w.to_string(), p);
    }
    Ok(sum)
}

/// X_{α,β} split by double coset (the matrix [β^{(s)}_k]).
pub fn x_alpha_beta_refined(
    q: u64,
    alpha: &[usize],
    beta: &[usize],
) -> Result<BTreeMap<Vec<Vec<usize>>, WeightSum>> {
    let n: usize = alpha.iter().sum();
    check_composition(alpha, n, "α")?;
    check_composition(beta, n, "β")?;
    let mut out: BTreeMap<Vec<Vec<usize>>, WeightSum> = BTreeMap::new();
    for w in min_coset_reps(beta) {
        let b = double_coset_blocks(&w, alpha)?;
        let p = wt_w_alpha(&w, alpha)?;
        out.entry(b.beta_s).or_insert_with(|| WeightSum::new(q)).push(w.to_string(), p);
    }
    Ok(out)
}

/// Closed form of one double-coset piece of X_{α,β}: the product of the
/// (q,t)-multinomials [α_s; β^{(s)}]_{q,t_s} and the rectangle weights.
pub fn flag_factored_refinement(q: u64, beta_s: &[Vec<usize>]) -> WeightProduct {
    let mut p = WeightProduct::one();
    for (s, bs) in beta_s.iter().enumerate() {
        p = p.mul(WeightProduct::from_ratio(qt_multinomial_ratio(q, bs, s + 1)));
    }
    let m = beta_s.first().map_or(0, Vec::len);
    for r in 0..beta_s.len() {
        for s in 0..r {
            for a in 0..m {
                for b in a + 1..m {
                    p = p.mul(wt_rectangle(beta_s[r][a], beta_s[s][b], r + 1, s + 1));
                }
            }
        }
    }
    p
}

/// X_{1^n,β} with value-indexed factors [t_{w(i)}, t_{w(j)}].
pub fn x_1n_beta(q: u64, beta: &[usize]) -> WeightSum {
    let mut sum = WeightSum::new(q);
    for w in min_coset_reps(beta) {
        let v = w.w();
        let f = inversions(v)
            .into_iter()
            .map(|(i, j)| QNumFactor::new(v[i - 1], 0, v[j - 1], 0))
            .collect();
        sum.push(w.to_string(), WeightProduct::from_factors(f));
    }
    sum
}

/// Ratio form of the ordinary t-multinomial [n; β]_t in variable `var`.
pub fn t_multinomial_ratio(beta: &[usize], var: usize) -> RatioFactor {
    let n: usize = beta.iter().sum();
    RatioFactor {
        var,
        num: (1..=n as u64).collect(),
        den: beta.iter().flat_map(|&b| 1..=b as u64).collect(),
    }
}

/// Calls `visit` with every tuple (β^{(1)}, ..., β^{(l)}) of weak
/// compositions of α_1, ..., α_l into m parts with component-wise sum β.
pub fn for_each_composition_tuple(alpha: &[usize], beta: &[usize], mut visit: impl FnMut(&[Vec<usize>])) {
    let l = alpha.len();
    let m = beta.len();
    let mut tuple = vec![vec![0; m]; l];
    let mut remaining = beta.to_vec();
    // suffix sums of α, to prune blocks that cannot be completed
    let mut after = vec![0; l + 1];
    for r in (0..l).rev() {
        after[r] = after[r + 1] + alpha[r];
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        r: usize,
        i: usize,
        left: usize,
        alpha: &[usize],
        after: &[usize],
        tuple: &mut Vec<Vec<usize>>,
        remaining: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        let m = remaining.len();
        if r == alpha.len() {
            visit(tuple);
            return;
        }
        if i + 1 == m || m == 0 {
            if m > 0 {
                if left > remaining[i] {
                    return;
                }
                tuple[r][i] = left;
                remaining[i] -= left;
            } else if left > 0 {
                return;
            }
            if remaining.iter().sum::<usize>() == after[r + 1] {
                let next = alpha.get(r + 1).copied().unwrap_or(0);
                go(r + 1, 0, next, alpha, after, tuple, remaining, visit);
            }
            if m > 0 {
                remaining[i] += left;
                tuple[r][i] = 0;
            }
            return;
        }
        for x in 0..=left.min(remaining[i]) {
            tuple[r][i] = x;
            remaining[i] -= x;
            go(r, i + 1, left - x, alpha, after, tuple, remaining, visit);
            remaining[i] += x;
        }
        tuple[r][i] = 0;
    }
    if l == 0 {
        if beta.iter().all(|&b| b == 0) {
            visit(&tuple);
        }
        return;
    }
    go(0, 0, alpha[0], alpha, &after, &mut tuple, &mut remaining, &mut visit);
}

/// All tuples visited by [`for_each_composition_tuple`].
pub fn composition_tuples(alpha: &[usize], beta: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_composition_tuple(alpha, beta, |t| out.push(t.to_vec()));
    out
}

/// Y_{α,β}(t): sum over composition tuples of products of t_r-multinomials.
pub fn y_alpha_beta(alpha: &[usize], beta: &[usize]) -> Result<WeightSum> {
    let n: usize = alpha.iter().sum();
    check_composition(alpha, n, "α")?;
    if beta.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameters(format!("β is not a weak composition of {n}")));
    }
    let mut sum = WeightSum::new(1);
    for_each_composition_tuple(alpha, beta, |tuple| {
        // a multinomial with a single nonzero part is 1
        let ratios = tuple
            .iter()
            .enumerate()
            .filter(|(_, b)| b.iter().filter(|&&x| x > 0).count() > 1)
            .map(|(r, b)| t_multinomial_ratio(b, r + 1))
            .collect();
        let mut label = String::with_capacity(2 * tuple.len() * beta.len());
        for (r, b) in tuple.iter().enumerate() {
            if r > 0 {
                label.push(';');
            }
            label.push_str(&join(b, ","));
        }
        sum.push(label, WeightProduct { ratios, ..WeightProduct::one() });
    });
    Ok(sum)
}

/// Product formula for the number of m1-by-m2 solutions of
/// diag(U_1) X = X diag(U_2). `one_based` selects the index ranges 1..=m
/// instead of 0..m.
pub fn upper_block_product(m1: usize, m2: usize, one_based: bool) -> WeightProduct {
    let off = usize::from(one_based);
    let mut f = Vec::new();
    for j in off..m1 + off {
        for i in off..m2 + off {
            f.push(QNumFactor::new(1, (i + j) as u32, 2, (i + m1) as u32));
        }
    }
    WeightProduct::from_factors(f)
}

/// Gaussian binomial [n; k]_q by the product formula.
pub fn q_binomial(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qb.pow((n - i) as u32) - 1u32;
        den *= qb.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Gaussian binomial as a sum over partitions in the box.
pub fn q_binomial_sum(n: usize, k: usize, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    partitions_in_box(k, n - k).map(|l| qb.pow(l.size() as u32)).sum()
}

/// q-multinomial [n; β]_q as a product of binomials along partial sums.
pub fn q_multinomial(beta: &[usize], q: u64) -> BigUint {
    let mut total = 0;
    let mut acc = BigUint::one();
    for &b in beta {
        total += b;
        acc *= q_binomial(total, b, q);
    }
    acc
}

/// Right-hand side of the generalised q-Vandermonde identity: the sum over
/// composition tuples of prod_r [α_r; β^{(r)}]_q times q to the number of
/// pairs (r > s, i < j) weighted by β^{(r)}_i β^{(s)}_j. Summed block by
/// block, memoised on the part of β not yet used.
pub fn vandermonde_rhs(q: u64, alpha: &[usize], beta: &[usize]) -> BigUint {
    fn go(
        q: &BigUint,
        qn: u64,
        alpha: &[usize],
        beta: &[usize],
        remaining: &mut Vec<usize>,
        memo: &mut BTreeMap<(usize, Vec<usize>), BigUint>,
    ) -> BigUint {
        let Some((&a, rest)) = alpha.split_first() else {
            return if remaining.iter().all(|&x| x == 0) { BigUint::one() } else { BigUint::zero() };
        };
        let key = (alpha.len(), remaining.clone());
        if let Some(v) = memo.get(&key) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        for t in weak_compositions_bounded(a, remaining) {
            // used[j] = β_j - remaining_j counts entries of earlier blocks
            let mut e = 0;
            let mut used_right: usize = 0;
            for j in (0..t.len()).rev() {
                e += t[j] * used_right;
                used_right += beta[j] - remaining[j];
            }
            for (r, x) in remaining.iter_mut().zip(&t) {
                *r -= x;
            }
            let tail = go(q, qn, rest, beta, remaining, memo);
            for (r, x) in remaining.iter_mut().zip(&t) {
                *r += x;
            }
            if !tail.is_zero() {
                total += q_multinomial(&t, qn) * q.pow(e as u32) * tail;
            }
        }
        memo.insert(key, total.clone());
        total
    }
    let mut memo = BTreeMap::new();
    go(&BigUint::from(q), q, alpha, beta, &mut beta.to_vec(), &mut memo)
}

/// The Grassmannian t = 1 specialisation: sum over β of prod_r [α_r; β_r]_q
/// times prod_{r<s} q^{β_r(α_s - β_s)}.
pub fn grassmannian_vandermonde_rhs(q: u64, alpha: &[usize], k: usize) -> BigUint {
    let qb = BigUint::from(q);
    weak_compositions_bounded(k, alpha)
        .into_iter()
        .map(|beta| {
            let mut t: BigUint = alpha.iter().zip(&beta).map(|(&a, &b)| q_binomial(a, b, q)).product();
            let mut e = 0;
            for r in 0..alpha.len() {
                for s in r + 1..alpha.len() {
                    e += beta[r] * (alpha[s] - beta[s]);
                }
            }
            t *= qb.pow(e as u32);
            t
        })
        .sum()
}

/// Factored form of the β-refined Grassmannian sum.
pub fn factored_refinement(q: u64, alpha: &[usize], beta: &[usize]) -> Result<WeightProduct> {
    if alpha.len() != beta.len() || alpha.iter().zip(beta).any(|(a, b)| b > a) {
        return Err(Error::InvalidParameters("need β_r ≤ α_r in every block".into()));
    }
    let qp = |e: usize| q.pow(e as u32);
    let mut p = WeightProduct::one();
    for (r, (&a, &b)) in alpha.iter().zip(beta).enumerate() {
        if b == 0 {
            continue;
        }
        p = p.mul(WeightProduct::from_ratio(RatioFactor {
            var: r + 1,
            num: (0..b).map(|i| qp(a) - qp(i)).collect(),
            den: (0..b).map(|i| qp(b) - qp(i)).collect(),
        }));
    }
    for r in 0..alpha.len() {
        for s in r + 1..alpha.len() {
            p = p.mul(wt_rectangle(beta[r], alpha[s] - beta[s], r + 1, s + 1));
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::compositions;

    fn f(r: usize, a: u32, s: usize, b: u32) -> QNumFactor {
        QNumFactor::new(r, a, s, b)
    }

    #[test]
    fn cell_weight_examples() {
        assert_eq!(cell_weight(0, 0, 3, 3, 2), f(3, 0, 3, 2));
        assert_eq!(cell_weight(1, 1, 1, 1, 2), f(1, 2, 1, 3));
        assert_eq!(cell_weight(0, 0, 1, 2, 2), f(1, 0, 2, 2));
    }

    #[test]
    fn worked_weight_table() {
        let lam = BoxedPartition::new(4, 5, &[5, 4, 1, 1]).unwrap();
        let t = lambda_weight_table(&lam, &[4, 2, 3]).unwrap();
        assert_eq!(
            t,
            vec![
                vec![f(1, 1, 3, 2), f(1, 1, 2, 2), f(1, 2, 2, 3), f(1, 1, 1, 2), f(1, 2, 1, 3)],
                vec![f(1, 0, 3, 2), f(1, 0, 2, 2), f(1, 1, 2, 3), f(1, 0, 1, 2)],
                vec![f(3, 1, 3, 2)],
                vec![f(3, 0, 3, 2)],
            ]
        );
    }

    #[test]
    fn factor_counts_match_size() {
        for n in 1..=7 {
            for alpha in compositions(n) {
                for k in 0..=n {
                    for lam in partitions_in_box(k, n - k) {
                        assert_eq!(wt_lambda(&lam, &alpha).unwrap().factors.len(), lam.size());
                    }
                }
            }
        }
    }

    #[test]
    fn tree_weights_worked_word() {
        let p = wt_w_single(&[3, 8, 5, 2, 1, 6, 4, 7, 9]);
        let mut got: Vec<(u32, u32)> = p.factors.iter().map(|x| (x.a, x.b)).collect();
        let mut want = vec![
            (4, 0), (4, 1), (4, 2), (4, 3), (3, 0), (3, 1), (3, 2),
            (5, 3), (6, 5), (5, 4), (2, 1), (6, 5), (7, 6),
        ];
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
        assert_eq!(wt_w_single(&[2, 1]).factors, vec![f(1, 1, 1, 0)]);
    }

    #[test]
    fn f21_weight_of_worked_coset() {
        let w = CosetPerm::new(&[1, 3, 4], &[5, 3, 4, 6, 1, 2, 7, 8]).unwrap();
        let b = double_coset_blocks(&w, &[4, 4]).unwrap();
        let p = wt_f_rs(&b.rectangles[&(2, 1)], 2, 1);
        let one = [f(2, 0, 1, 1), f(2, 1, 1, 2)];
        let mut want: Vec<QNumFactor> = one.iter().cycle().take(6).copied().collect();
        want.sort();
        assert_eq!(p.sorted_factors(), want);
        assert_eq!(wt_rectangle(2, 1, 1, 2).factors, vec![f(1, 0, 2, 2), f(1, 1, 2, 2)]);
    }

    #[test]
    fn sizes_of_sums() {
        let s = grassmannian_csp_poly(2, &[2], 1).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.terms[1].product.factors, vec![f(1, 0, 1, 1)]);
        assert_eq!(x_alpha_beta(2, &[2, 1, 2], &[1, 2, 2]).unwrap().len(), 30);
        let x = x_1n_beta(2, &[1, 1]);
        assert_eq!(x.terms[1].product.factors, vec![f(2, 0, 1, 0)]);
        assert_eq!(y_alpha_beta(&[3], &[1, 2]).unwrap().len(), 1);
    }

    #[test]
    fn q_binomials() {
        assert_eq!(q_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(q_binomial(7, 0, 3), BigUint::one());
        for n in 0..8 {
            for k in 0..=n {
                for q in 2..5 {
                    assert_eq!(q_binomial(n, k, q), q_binomial_sum(n, k, q));
                }
            }
        }
        for n in 1..7 {
            for alpha in compositions(n) {
                for k in 0..=n {
                    assert_eq!(grassmannian_vandermonde_rhs(3, &alpha, k), q_binomial(n, k, 3));
                }
            }
        }
        assert_eq!(q_multinomial(&[2, 1], 2), BigUint::from(7u32));
        assert_eq!(q_multinomial(&[1, 1, 1], 2), BigUint::from(21u32));
    }

    #[test]
    fn vandermonde_small() {
        assert_eq!(vandermonde_rhs(2, &[2, 2], &[2, 2]), BigUint::from(35u32));
        assert_eq!(vandermonde_rhs(3, &[3, 2, 2], &[2, 2, 3]), q_multinomial(&[2, 2, 3], 3));
        assert_eq!(vandermonde_rhs(5, &[4], &[1, 3]), q_multinomial(&[1, 3], 5));
    }

    // term by term over composition tuples
    fn vandermonde_direct(q: u64, alpha: &[usize], beta: &[usize]) -> BigUint {
        let qb = BigUint::from(q);
        composition_tuples(alpha, beta)
            .into_iter()
            .map(|t| {
                let mut e = 0usize;
                for r in 0..t.len() {
                    for s in 0..r {
                        for i in 0..beta.len() {
                            for j in i + 1..beta.len() {
                                e += t[r][i] * t[s][j];
                            }
                        }
                    }
                }
                t.iter().map(|b| q_multinomial(b, q)).product::<BigUint>() * qb.pow(e as u32)
            })
            .sum()
    }

    #[test]
    fn vandermonde_memo_matches_direct() {
        for n in 1..=5 {
            for a in compositions(n) {
                for b in compositions(n) {
                    assert_eq!(vandermonde_rhs(3, &a, &b), vandermonde_direct(3, &a, &b), "{a:?} {b:?}");
                }
            }
        }
        // weak β as well
        assert_eq!(vandermonde_rhs(2, &[2, 3], &[0, 4, 1]), vandermonde_direct(2, &[2, 3], &[0, 4, 1]));
    }

    #[test]
    fn composition_tuples_match_filter() {
        for (alpha, beta) in [(vec![2, 1], vec![1, 2]), (vec![1, 1, 1], vec![1, 1, 1]), (vec![3, 2], vec![2, 0, 3])] {
            let mut brute = Vec::new();
            let choices: Vec<Vec<Vec<usize>>> =
                alpha.iter().map(|&a| weak_compositions_bounded(a, &vec![a; beta.len()])).collect();
            let mut idx = vec![0; alpha.len()];
            'outer: loop {
                let t: Vec<Vec<usize>> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
                if (0..beta.len()).all(|j| t.iter().map(|b| b[j]).sum::<usize>() == beta[j]) {
                    brute.push(t);
                }
                for r in (0..idx.len()).rev() {
                    idx[r] += 1;
                    if idx[r] < choices[r].len() {
                        continue 'outer;
                    }
                    idx[r] = 0;
                }
                break;
            }
            let mut fast = composition_tuples(&alpha, &beta);
            fast.sort();
            brute.sort();
            assert_eq!(fast, brute, "{alpha:?} {beta:?}");
        }
        assert_eq!(composition_tuples(&[1; 5], &[1; 5]).len(), 120);
    }
}
