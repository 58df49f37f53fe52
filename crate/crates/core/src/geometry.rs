//! Brute-force enumeration of subspaces, flags and set-flags, and
//! fixed-point counting under torus elements.
//!
//! The counters here never use block-structure shortcuts: every point of
//! the space is generated and tested, so the counts can serve as oracles
//! for the weight formulas.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::combinat::{
    beta_of_lambda, block_of, column_blocks_right_to_left, double_coset_blocks, index_blocks,
    min_coset_reps, partitions_in_box, pivot_columns, BoxedPartition, CosetPerm,
};
use crate::error::{Error, Result};
use crate::ffield::{companion_matrix, BlockOrder, FieldTower, TorusElement};
use crate::fqlinalg::MatFq;
use crate::weightalg::{q_binomial, q_multinomial};

/// Default bound on the number of points enumerated.
pub const DEFAULT_CAP: u64 = 10_000_000;

fn check_cap(count: BigUint, cap: u64, what: &str) -> Result<u64> {
    match u64::try_from(&count) {
        Ok(c) if c <= cap => Ok(c),
        _ => Err(Error::TooLarge(format!("{what} has {count} points, above the cap of {cap}"))),
    }
}

fn check_invertible(m: &MatFq) -> Result<()> {
    if !m.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(())
}

/// A point of G_k(n): the canonical right-pivot echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subspace {
    matrix: MatFq,
    /// 0-based pivot columns, decreasing down the rows.
    pivots: Vec<usize>,
    lambda: BoxedPartition,
}

impl Subspace {
    /// Row space of `m`, which must have full row rank.
    pub fn from_matrix(m: &MatFq) -> Result<Self> {
        let r = m.rref();
        if r.rank() != m.rows() {
            return Err(Error::InvalidParameters(format!(
                "rows are dependent: rank {} of {}",
                r.rank(),
                m.rows()
            )));
        }
        let k = m.rows();
        let parts: Vec<usize> = r.pivots.iter().enumerate().map(|(i, &c)| c + 1 + i - k).collect();
        let lambda = BoxedPartition::new(k, m.cols() - k, &parts)?;
        Ok(Subspace {
            matrix: r.matrix,
            pivots: r.pivots,
            lambda,
        })
    }

    pub fn matrix(&self) -> &MatFq {
        &self.matrix
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn lambda(&self) -> &BoxedPartition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn ambient(&self) -> usize {
        self.matrix.cols()
    }
}

/// β(Z) read off the Schubert cell of Z.
pub fn subspace_beta(z: &Subspace, alpha: &[usize]) -> Result<Vec<usize>> {
    beta_of_lambda(&z.lambda, alpha)
}

/// β(Z) from ranks of coordinate projections: β_r = rank π_r(Z) - rank
/// π_{r-1}(Z), where π_r keeps column blocks 1..r (block 1 rightmost).
pub fn subspace_beta_linear(z: &Subspace, alpha: &[usize]) -> Vec<usize> {
    let ranges = column_blocks_right_to_left(alpha);
    let mut prev = 0;
    let mut cols = Vec::new();
    ranges
        .iter()
        .map(|&(lo, hi)| {
            cols.extend(lo - 1..hi);
            let rank = z.matrix.select_cols(&cols).rank();
            let b = rank - prev;
            prev = rank;
            b
        })
        .collect()
}

pub fn act_subspace(z: &Subspace, m: &MatFq) -> Result<Subspace> {
    check_invertible(m)?;
    Subspace::from_matrix(&z.matrix.mul(m))
}

pub fn is_fixed(z: &Subspace, m: &MatFq) -> Result<bool> {
    check_invertible(m)?;
    let n = z.ambient();
    let mut v = vec![0; n];
    Ok(rows_fixed(m.q(), z.matrix.data(), z.dim(), n, &z.pivots, m.data(), &mut v))
}

/// Whether the row space of the k x n echelon basis `z` is mapped into
/// itself by `m`. Each row of z·m is reduced against the pivots of z.
fn rows_fixed(q: u32, z: &[u32], k: usize, n: usize, pivots: &[usize], m: &[u32], v: &mut [u32]) -> bool {
    for i in 0..k {
        mul_row(q, &z[i * n..(i + 1) * n], m, n, v);
        for (t, &p) in pivots.iter().enumerate() {
            let c = v[p];
            if c != 0 {
                let neg = q - c;
                for (x, &y) in v.iter_mut().zip(&z[t * n..(t + 1) * n]) {
                    *x = (*x + neg * y) % q;
                }
            }
        }
        if v.iter().any(|&x| x != 0) {
            return false;
        }
    }
    true
}

#[inline]
fn mul_row(q: u32, row: &[u32], m: &[u32], n: usize, v: &mut [u32]) {
    v.iter_mut().for_each(|x| *x = 0);
    for (j, &x) in row.iter().enumerate() {
        if x != 0 {
            for (o, &y) in v.iter_mut().zip(&m[j * n..(j + 1) * n]) {
                *o += x * y;
            }
        }
    }
    v.iter_mut().for_each(|x| *x %= q);
}

/// Visit every assignment of F_q values to the `free` positions of `buf`.
fn for_each_fill(q: u32, buf: &mut [u32], free: &[usize], mut f: impl FnMut(&[u32])) {
    for &p in free {
        buf[p] = 0;
    }
    loop {
        f(buf);
        let mut carried = true;
        for &p in free {
            buf[p] += 1;
            if buf[p] < q {
                carried = false;
                break;
            }
            buf[p] = 0;
        }
        if carried {
            return;
        }
    }
}

/// Pivot pattern of the Schubert cell C_λ and the positions of its stars.
#[derive(Clone, Debug)]
struct GrassCell {
    pivots: Vec<usize>,
    base: Vec<u32>,
    free: Vec<usize>,
}

fn grass_cell(lambda: &BoxedPartition) -> GrassCell {
    let k = lambda.k();
    let n = k + lambda.width();
    let pivots: Vec<usize> = pivot_columns(lambda).into_iter().map(|c| c - 1).collect();
    let mut base = vec![0; k * n];
    let mut free = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        base[i * n + p] = 1;
        for c in 0..p {
            if !pivots.contains(&c) {
                free.push(i * n + c);
            }
        }
    }
    GrassCell {
        pivots,
        base,
        free,
    }
}

/// Every k-dimensional subspace of F_q^n, grouped by Schubert cell.
pub fn enumerate_subspaces(q: u32, n: usize, k: usize, cap: u64) -> Result<impl Iterator<Item = Subspace>> {
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
    }
    check_cap(q_binomial(n, k, q as u64), cap, &format!("G_{k}({n}) over F_{q}"))?;
    Ok(partitions_in_box(k, n - k).flat_map(move |lambda| {
        let mut cell = grass_cell(&lambda);
        let mut out = Vec::new();
        let pivots = cell.pivots.clone();
        let free = core::mem::take(&mut cell.free);
        for_each_fill(q, &mut cell.base, &free, |buf| {
            out.push(Subspace {
                matrix: MatFq::from_vec(q, k, n, buf.to_vec()),
                pivots: pivots.clone(),
                lambda: lambda.clone(),
            });
        });
        out
    }))
}

/// Options shared by the fixed-point counters.
#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub cap: u64,
    /// Verify the block-echelon shape of every fixed point.
    pub check_structure: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            cap: DEFAULT_CAP,
            check_structure: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GrassmannCount {
    pub total: u64,
    pub by_beta: BTreeMap<Vec<usize>, u64>,
    /// Fixed points whose echelon form breaks the block structure.
    pub structure_violations: u64,
}

/// Per-block data the structure check needs: column range, d_r and the
/// companion matrix of u_r's minimal polynomial.
#[derive(Clone, Debug)]
pub struct BlockStructure {
    /// 0-based half-open column range.
    pub cols: (usize, usize),
    pub d: usize,
    pub companion: MatFq,
}

/// Structure data for Grassmannian verification (blocks right to left).
pub fn grassmann_structure(tower: &FieldTower, u: &TorusElement) -> Vec<BlockStructure> {
    block_structure(tower, u, &column_blocks_right_to_left(&u.alpha))
}

/// Structure data for flag verification (blocks left to right).
pub fn flag_structure(tower: &FieldTower, u: &TorusElement) -> Vec<BlockStructure> {
    block_structure(tower, u, &index_blocks(&u.alpha))
}

fn block_structure(tower: &FieldTower, u: &TorusElement, ranges: &[(usize, usize)]) -> Vec<BlockStructure> {
    u.components
        .iter()
        .zip(ranges)
        .map(|(&c, &(lo, hi))| {
            let f = tower.field(c.degree).minimal_polynomial(c);
            let companion = companion_matrix(&f);
            BlockStructure {
                cols: (lo - 1, hi),
                d: companion.rows(),
                companion,
            }
        })
        .collect()
}

/// Whether the positions `rel` (relative to a block start) are a union of
/// aligned groups {gd, ..., gd + d - 1}.
fn aligned_groups(rel: &[usize], d: usize) -> bool {
    rel.iter()
        .all(|&p| (p / d * d..p / d * d + d).all(|x| rel.contains(&x)))
}

/// Block-echelon shape of a fixed subspace: within each column block the
/// pivots come in aligned groups of d_r, and every d_r x d_r piece of the
/// diagonal block (rows of a pivot group ordered so the pivot piece is the
/// identity) commutes with the companion matrix.
fn grass_structure_ok(q: u32, z: &[u32], n: usize, pivots: &[usize], blocks: &[BlockStructure]) -> bool {
    for b in blocks {
        let (lo, hi) = b.cols;
        let d = b.d;
        let rows: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .filter(|&(_, &p)| lo <= p && p < hi)
            .map(|(i, &p)| (p - lo, i))
            .collect();
        let rel: Vec<usize> = rows.iter().map(|x| x.0).collect();
        if !aligned_groups(&rel, d) {
            return false;
        }
        let u = b.companion.data();
        for g in rel.iter().filter(|&&p| p % d == 0) {
            let mut group: Vec<(usize, usize)> = rows.iter().copied().filter(|x| x.0 / d == g / d).collect();
            group.sort_unstable();
            for h in (lo..hi).step_by(d) {
                let x: Vec<u32> = group
                    .iter()
                    .flat_map(|&(_, i)| z[i * n + h..i * n + h + d].iter().copied())
                    .collect();
                if !commutes(q, &x, u, d) {
                    return false;
                }
            }
        }
    }
    true
}

fn commutes(q: u32, x: &[u32], u: &[u32], d: usize) -> bool {
    for i in 0..d {
        for j in 0..d {
            let (mut a, mut b) = (0, 0);
            for t in 0..d {
                a += x[i * d + t] * u[t * d + j];
                b += u[i * d + t] * x[t * d + j];
            }
            if a % q != b % q {
                return false;
            }
        }
    }
    true
}

/// Fixed points of u on G_k(n), n = Σα, with the torus acting through
/// blocks l, ..., 1 from the left.
pub fn count_fixed_grassmannian(
    tower: &FieldTower,
    alpha: &[usize],
    k: usize,
    u: &TorusElement,
    opts: &CountOptions,
) -> Result<GrassmannCount> {
    let m = u.matrix(tower, BlockOrder::Descending);
    let structure = opts.check_structure.then(|| grassmann_structure(tower, u));
    count_fixed_grassmannian_matrix(alpha, k, &m, structure.as_deref(), opts.cap)
}

/// Same as [`count_fixed_grassmannian`] for an arbitrary invertible matrix.
/// The refinement key is β of the Schubert cell.
pub fn count_fixed_grassmannian_matrix(
    alpha: &[usize],
    k: usize,
    m: &MatFq,
    structure: Option<&[BlockStructure]>,
    cap: u64,
) -> Result<GrassmannCount> {
    let q = m.q();
    let n: usize = alpha.iter().sum();
    if m.rows() != n || !m.is_square() {
        return Err(Error::InvalidParameters(format!("matrix is not {n} x {n}")));
    }
    if k > n {
        return Err(Error::InvalidParameters(format!("k = {k} exceeds n = {n}")));
    }
    check_invertible(m)?;
    check_cap(q_binomial(n, k, q as u64), cap, &format!("G_{k}({n}) over F_{q}"))?;
    let mut out = GrassmannCount::default();
    let mut v = vec![0; n];
    let data = m.data();
    for lambda in partitions_in_box(k, n - k) {
        let beta = beta_of_lambda(&lambda, alpha)?;
        let mut cell = grass_cell(&lambda);
        let free = core::mem::take(&mut cell.free);
        let pivots = cell.pivots.clone();
        let mut count = 0;
        let mut bad = 0;
        for_each_fill(q, &mut cell.base, &free, |z| {
            if rows_fixed(q, z, k, n, &pivots, data, &mut v) {
                count += 1;
                if let Some(s) = structure {
                    if !grass_structure_ok(q, z, n, &pivots, s) {
                        bad += 1;
                    }
                }
            }
        });
        out.total += count;
        out.structure_violations += bad;
        *out.by_beta.entry(beta).or_insert(0) += count;
    }
    Ok(out)
}

/// A point of Fl(β): a basis whose first β_1 + ... + β_i rows span V_i,
/// in the echelon form of its Schubert cell C_w.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagFq {
    beta: Vec<usize>,
    basis: MatFq,
    w: CosetPerm,
}

impl FlagFq {
    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn basis(&self) -> &MatFq {
        &self.basis
    }

    pub fn w(&self) -> &CosetPerm {
        &self.w
    }

    /// dim V_1, dim V_2, ...
    pub fn dims(&self) -> Vec<usize> {
        self.beta
            .iter()
            .scan(0, |acc, &b| {
                *acc += b;
                Some(*acc)
            })
            .collect()
    }

    /// V_i, 1-based.
    pub fn subspace(&self, i: usize) -> Subspace {
        let d = self.dims()[i - 1];
        Subspace::from_matrix(&self.basis.select_rows(0..d)).expect("flag rows are independent")
    }

    pub fn chain(&self) -> Vec<Subspace> {
        (1..=self.beta.len()).map(|i| self.subspace(i)).collect()
    }
}

/// Echelon pattern of C_w: row i has its pivot at w(i), stars at columns
/// j < w(i) whose pivot row lies below i, zeros elsewhere.
#[derive(Clone, Debug)]
struct FlagCell {
    base: Vec<u32>,
    free: Vec<usize>,
    /// Row holding the pivot of each column, 0-based.
    pivot_row: Vec<usize>,
    /// β-block of each row, 0-based.
    row_block: Vec<usize>,
}

fn flag_cell(w: &CosetPerm) -> FlagCell {
    let n = w.n();
    let winv = w.inverse();
    let mut base = vec![0; n * n];
    let mut free = Vec::new();
    for (i, &wi) in w.w().iter().enumerate() {
        base[i * n + wi - 1] = 1;
        for j in 1..wi {
            if winv[j - 1] > i + 1 {
                free.push(i * n + j - 1);
            }
        }
    }
    let blocks = index_blocks(w.beta());
    FlagCell {
        base,
        free,
        pivot_row: winv.iter().map(|&i| i - 1).collect(),
        row_block: (1..=n).map(|i| block_of(&blocks, i)).collect(),
    }
}

/// Every flag in Fl(β) over F_q, grouped by cell C_w.
pub fn enumerate_flags(q: u32, beta: &[usize], cap: u64) -> Result<impl Iterator<Item = FlagFq>> {
    check_cap(q_multinomial(beta, q as u64), cap, &format!("Fl({beta:?}) over F_{q}"))?;
    let n: usize = beta.iter().sum();
    let beta = beta.to_vec();
    Ok(min_coset_reps(&beta).flat_map(move |w| {
        let mut cell = flag_cell(&w);
        let free = core::mem::take(&mut cell.free);
        let mut out = Vec::new();
        for_each_fill(q, &mut cell.base, &free, |buf| {
            out.push(FlagFq {
                beta: beta.clone(),
                basis: MatFq::from_vec(q, n, n, buf.to_vec()),
                w: w.clone(),
            });
        });
        out
    }))
}

/// Whether V_b · m ⊆ V_b for every b. The basis is triangular with pivot
/// w(i) rightmost in row i, so reducing by descending column identifies the
/// rows a vector needs.
fn flag_rows_fixed(q: u32, z: &[u32], n: usize, cell: &FlagCell, last: usize, m: &[u32], v: &mut [u32]) -> bool {
    for i in 0..n {
        let b = cell.row_block[i];
        if b == last {
            continue;
        }
        mul_row(q, &z[i * n..(i + 1) * n], m, n, v);
        for c in (0..n).rev() {
            let x = v[c];
            if x == 0 {
                continue;
            }
            let t = cell.pivot_row[c];
            if cell.row_block[t] > b {
                return false;
            }
            let neg = q - x;
            for (o, &y) in v[..=c].iter_mut().zip(&z[t * n..t * n + c + 1]) {
                *o = (*o + neg * y) % q;
            }
        }
    }
    true
}

pub fn is_flag_fixed(f: &FlagFq, m: &MatFq) -> Result<bool> {
    check_invertible(m)?;
    let cell = flag_cell(&f.w);
    let n = f.w.n();
    let mut v = vec![0; n];
    Ok(flag_rows_fixed(m.q(), f.basis.data(), n, &cell, f.beta.len() - 1, m.data(), &mut v))
}

/// The image chain V_1·m ⊂ V_2·m ⊂ ... in canonical form.
pub fn act_flag(f: &FlagFq, m: &MatFq) -> Result<Vec<Subspace>> {
    check_invertible(m)?;
    f.chain().iter().map(|z| act_subspace(z, m)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FlagCount {
    pub total: u64,
    /// Keyed by (β^{(1)}, ..., β^{(l)}).
    pub by_coset: BTreeMap<Vec<Vec<usize>>, u64>,
    pub structure_violations: u64,
}

/// Fixed flags of u on Fl(β), the torus acting through blocks 1, ..., l
/// from the left.
pub fn count_fixed_flags(
    tower: &FieldTower,
    alpha: &[usize],
    beta: &[usize],
    u: &TorusElement,
    opts: &CountOptions,
) -> Result<FlagCount> {
    let m = u.matrix(tower, BlockOrder::Ascending);
    let structure = opts.check_structure.then(|| flag_structure(tower, u));
    count_fixed_flags_matrix(alpha, beta, &m, structure.as_deref(), opts.cap)
}

pub fn count_fixed_flags_matrix(
    alpha: &[usize],
    beta: &[usize],
    m: &MatFq,
    structure: Option<&[BlockStructure]>,
    cap: u64,
) -> Result<FlagCount> {
    let q = m.q();
    let n: usize = alpha.iter().sum();
    if beta.iter().sum::<usize>() != n || m.rows() != n || !m.is_square() {
        return Err(Error::InvalidParameters("α, β and the matrix size disagree".into()));
    }
    if beta.is_empty() {
        return Err(Error::InvalidParameters("β must have at least one part".into()));
    }
    check_invertible(m)?;
    check_cap(q_multinomial(beta, q as u64), cap, &format!("Fl({beta:?}) over F_{q}"))?;
    let mut out = FlagCount::default();
    let mut v = vec![0; n];
    let data = m.data();
    let last = beta.len() - 1;
    for w in min_coset_reps(beta) {
        let key = double_coset_blocks(&w, alpha)?.beta_s;
        let mut cell = flag_cell(&w);
        let free = core::mem::take(&mut cell.free);
        let mut base = core::mem::take(&mut cell.base);
        let mut count = 0;
        let mut bad = 0;
        for_each_fill(q, &mut base, &free, |z| {
            if flag_rows_fixed(q, z, n, &cell, last, data, &mut v) {
                count += 1;
                if let Some(s) = structure {
                    if !flag_structure_ok(&w, s) {
                        bad += 1;
                    }
                }
            }
        });
        out.total += count;
        out.structure_violations += bad;
        *out.by_coset.entry(key).or_insert(0) += count;
    }
    Ok(out)
}

/// For every V_k and every column block A_s, the pivots of V_k inside A_s
/// form aligned groups of d_s.
fn flag_structure_ok(w: &CosetPerm, blocks: &[BlockStructure]) -> bool {
    let mut seen = 0;
    for &b in w.beta() {
        seen += b;
        for blk in blocks {
            let (lo, hi) = blk.cols;
            let rel: Vec<usize> = w.w()[..seen]
                .iter()
                .filter(|&&c| lo < c && c <= hi)
                .map(|&c| c - 1 - lo)
                .collect();
            if !aligned_groups(&rel, blk.d) {
                return false;
            }
        }
    }
    true
}

/// β^{(s)}_k by linear algebra: the number of pivots of V_k in A_s is
/// rank(V_k | columns after A_{s-1}) - rank(V_k | columns after A_s), and
/// β^{(s)}_k is its increment in k.
pub fn flag_beta_s_linear(f: &FlagFq, alpha: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = alpha.iter().sum();
    let blocks = index_blocks(alpha);
    let chain = f.chain();
    let tail_rank = |z: &Subspace, from: usize| -> usize {
        let cols: Vec<usize> = (from..n).collect();
        if cols.is_empty() {
            0
        } else {
            z.matrix().select_cols(&cols).rank()
        }
    };
    let mut out = vec![vec![0; f.beta.len()]; alpha.len()];
    for (s, &(lo, hi)) in blocks.iter().enumerate() {
        let mut prev = 0;
        for (k, z) in chain.iter().enumerate() {
            let here = tail_rank(z, lo - 1) - tail_rank(z, hi);
            out[s][k] = here - prev;
            prev = here;
        }
    }
    out
}

/// A chain of subsets of {1..n} with sizes β_1, β_1 + β_2, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SetFlag {
    pub chain: Vec<Vec<usize>>,
}

impl SetFlag {
    /// From a labelling f: [n] -> blocks (0-based labels): the i-th set is
    /// the preimage of labels < i.
    pub fn from_labels(labels: &[u8], parts: usize) -> Self {
        let chain = (1..=parts)
            .map(|i| {
                (0..labels.len())
                    .filter(|&x| (labels[x] as usize) < i)
                    .map(|x| x + 1)
                    .collect()
            })
            .collect();
        SetFlag { chain }
    }
}

/// Lexicographic successor of a sequence; false at the last one.
fn next_permutation(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Every labelling of [n] with β_k copies of label k - 1, in lex order.
/// These are in bijection with set-flags of type β.
pub fn setflag_labelings(beta: &[usize]) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = beta
        .iter()
        .enumerate()
        .flat_map(|(k, &b)| core::iter::repeat_n(k as u8, b))
        .collect();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

pub fn enumerate_setflags(beta: &[usize]) -> Vec<SetFlag> {
    setflag_labelings(beta)
        .iter()
        .map(|l| SetFlag::from_labels(l, beta.len()))
        .collect()
}

/// c_1^{j_1} ... c_l^{j_l} with c_r the cycle (lo lo+1 ... hi) on block A_r,
/// as 0-based images.
pub fn cycle_power_permutation(alpha: &[usize], powers: &[usize]) -> Result<Vec<usize>> {
    if alpha.len() != powers.len() {
        return Err(Error::InvalidParameters("one cycle power per block required".into()));
    }
    let mut sigma = Vec::new();
    for (&(lo, hi), &j) in index_blocks(alpha).iter().zip(powers) {
        let a = hi + 1 - lo;
        for x in 0..a {
            sigma.push(lo - 1 + (x + j) % a);
        }
    }
    Ok(sigma)
}

/// Set-flags of type β invariant under the cycle-power permutation.
pub fn count_fixed_setflags(alpha: &[usize], beta: &[usize], powers: &[usize]) -> Result<u64> {
    let n: usize = alpha.iter().sum();
    if beta.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameters("α and β have different sizes".into()));
    }
    let sigma = cycle_power_permutation(alpha, powers)?;
    Ok(count_fixed_labelings(&setflag_labelings(beta), &sigma))
}

/// Labellings f with f∘σ = f.
pub fn count_fixed_labelings(labels: &[Vec<u8>], sigma: &[usize]) -> u64 {
    labels
        .iter()
        .filter(|f| sigma.iter().enumerate().all(|(i, &s)| f[i] == f[s]))
        .count() as u64
}

pub fn random_matrix<R: Rng + ?Sized>(q: u32, rows: usize, cols: usize, rng: &mut R) -> MatFq {
    let data = (0..rows * cols).map(|_| rng.random_range(0..q)).collect();
    MatFq::from_vec(q, rows, cols, data)
}

pub fn random_invertible<R: Rng + ?Sized>(q: u32, n: usize, rng: &mut R) -> MatFq {
    loop {
        let m = random_matrix(q, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

/// Random invertible matrix that is block diagonal for the given sizes.
pub fn random_block_invertible<R: Rng + ?Sized>(q: u32, sizes: &[usize], rng: &mut R) -> MatFq {
    let blocks: Vec<MatFq> = sizes.iter().map(|&a| random_invertible(q, a, rng)).collect();
    MatFq::block_diag(q, &blocks)
}

pub fn random_subspace<R: Rng + ?Sized>(q: u32, n: usize, k: usize, rng: &mut R) -> Subspace {
    loop {
        if let Ok(z) = Subspace::from_matrix(&random_matrix(q, k, n, rng)) {
            return z;
        }
    }
}

/// g m g^{-1}.
pub fn conjugate(m: &MatFq, g: &MatFq) -> Result<MatFq> {
    Ok(g.mul(m).mul(&g.inverse()?))
}

/// Fixed-point totals of m and g m g^{-1} on G_k(n) agree.
pub fn conjugation_invariance_check(alpha: &[usize], k: usize, m: &MatFq, g: &MatFq, cap: u64) -> Result<bool> {
    let a = count_fixed_grassmannian_matrix(alpha, k, m, None, cap)?;
    let b = count_fixed_grassmannian_matrix(alpha, k, &conjugate(m, g)?, None, cap)?;
    Ok(a.total == b.total)
}
