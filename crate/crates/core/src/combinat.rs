//! Partitions in a box, compositions, Schubert-cell block data, minimal
//! coset representatives and inversion trees.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A partition with at most `k` parts, each at most `width`, stored padded
/// with zeros to length `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BoxedPartition {
    k: usize,
    width: usize,
    parts: Vec<usize>,
}

impl BoxedPartition {
    pub fn new(k: usize, width: usize, parts: &[usize]) -> Result<Self> {
        let nonzero: Vec<usize> = parts.iter().copied().filter(|&p| p > 0).collect();
        if nonzero.len() > k {
            return Err(Error::InvalidParameters(format!("more than {k} nonzero parts")));
        }
        if nonzero.windows(2).any(|w| w[0] < w[1]) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidParameters("parts must be weakly decreasing".into()));
        }
        if nonzero.first().is_some_and(|&p| p > width) {
            return Err(Error::InvalidParameters(format!("part exceeds box width {width}")));
        }
        let mut padded = nonzero;
        padded.resize(k, 0);
        Ok(BoxedPartition { k, width, parts: padded })
    }

    pub fn empty(k: usize, width: usize) -> Self {
        BoxedPartition {
            k,
            width,
            parts: vec![0; k],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Padded parts, length k.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn nonzero_parts(&self) -> Vec<usize> {
        self.parts.iter().copied().filter(|&p| p > 0).collect()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Conjugate partition, padded to length `width`.
    pub fn conjugate(&self) -> Vec<usize> {
        (1..=self.width)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect()
    }
}

impl fmt::Display for BoxedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero_parts();
        if nz.is_empty() {
            return write!(f, "()");
        }
        write!(f, "{}", join(&nz, ","))
    }
}

pub fn join(xs: &[usize], sep: &str) -> String {
    let mut s = String::with_capacity(xs.len() * (sep.len() + 1));
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
        }
        match char::from_digit(x as u32, 10) {
            Some(c) if x < 10 => s.push(c),
            _ => s.push_str(&format!("{x}")),
        }
    }
    s
}

/// Iterator over the partitions in a `k` by `width` box in lexicographic
/// order of their padded parts.
#[derive(Clone, Debug)]
pub struct PartitionsInBox {
    next: Option<Vec<usize>>,
    k: usize,
    width: usize,
}

pub fn partitions_in_box(k: usize, width: usize) -> PartitionsInBox {
    PartitionsInBox {
        next: Some(vec![0; k]),
        k,
        width,
    }
}

impl Iterator for PartitionsInBox {
    type Item = BoxedPartition;

    fn next(&mut self) -> Option<BoxedPartition> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let can_grow = |p: &[usize], i: usize| -> bool {
            let cap = if i == 0 { self.width } else { p[i - 1] };
            p[i] < cap
        };
        if let Some(i) = (0..self.k).rev().find(|&i| can_grow(&succ, i)) {
            succ[i] += 1;
            for x in &mut succ[i + 1..] {
                *x = 0;
            }
            self.next = Some(succ);
        }
        Some(BoxedPartition {
            k: self.k,
            width: self.width,
            parts: cur,
        })
    }
}

/// All compositions of `n` (positive parts), lexicographic.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Weak compositions of `total` into `bounds.len()` parts with part `i` at
/// most `bounds[i]`, lexicographic.
pub fn weak_compositions_bounded(total: usize, bounds: &[usize]) -> Vec<Vec<usize>> {
    fn go(total: usize, bounds: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match bounds.split_first() {
            None => {
                if total == 0 {
                    out.push(prefix.clone());
                }
            }
            Some((&b, rest)) => {
                let room: usize = rest.iter().sum();
                for x in 0..=b.min(total) {
                    if total - x > room {
                        continue;
                    }
                    prefix.push(x);
                    go(total - x, rest, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(total, bounds, &mut Vec::new(), &mut out);
    out
}

/// Weak compositions of `total` into `parts` parts.
pub fn weak_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    weak_compositions_bounded(total, &vec![total; parts])
}

/// Pivot columns (1-based) of the Schubert cell of λ in G_k(n), in row
/// order: λ_i + k - i + 1.
pub fn pivot_columns(lambda: &BoxedPartition) -> Vec<usize> {
    let k = lambda.k;
    lambda
        .parts
        .iter()
        .enumerate()
        .map(|(i, &p)| p + k - i)
        .collect()
}

/// Column range (1-based, inclusive) of each block when blocks of sizes
/// `alpha` are laid out right to left, block 1 rightmost.
pub fn column_blocks_right_to_left(alpha: &[usize]) -> Vec<(usize, usize)> {
    let n: usize = alpha.iter().sum();
    let mut hi = n;
    alpha
        .iter()
        .map(|&a| {
            let r = (hi + 1 - a, hi);
            hi -= a;
            r
        })
        .collect()
}

/// Index sets A_1, ..., A_l (1-based, left to right) of a composition.
pub fn index_blocks(parts: &[usize]) -> Vec<(usize, usize)> {
    let mut lo = 1;
    parts
        .iter()
        .map(|&a| {
            let r = (lo, lo + a - 1);
            lo += a;
            r
        })
        .collect()
}

/// Which block (0-based) of `ranges` contains `x`.
pub(crate) fn block_of(ranges: &[(usize, usize)], x: usize) -> usize {
    ranges
        .iter()
        .position(|&(lo, hi)| lo <= x && x <= hi)
        .expect("index outside every block")
}

fn check_alpha(alpha: &[usize], n: usize) -> Result<()> {
    if alpha.contains(&0) {
        return Err(Error::InvalidParameters("composition parts must be positive".into()));
    }
    if alpha.iter().sum::<usize>() != n {
        return Err(Error::InvalidParameters(format!(
            "composition {} does not sum to {n}",
            join(alpha, ",")
        )));
    }
    Ok(())
}

/// β(λ): number of pivots in each column block, blocks labelled right to
/// left.
pub fn beta_of_lambda(lambda: &BoxedPartition, alpha: &[usize]) -> Result<Vec<usize>> {
    check_alpha(alpha, lambda.k + lambda.width)?;
    let ranges = column_blocks_right_to_left(alpha);
    let mut beta = vec![0; alpha.len()];
    for c in pivot_columns(lambda) {
        beta[block_of(&ranges, c)] += 1;
    }
    Ok(beta)
}

/// The grid [λ^{r,s}] of a Grassmannian Schubert cell. `blocks[r][s]` holds
/// the row lengths (β_r of them) of the star pattern in row block r and
/// column block s; indices are 0-based here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrassmannBlocks {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    pub blocks: Vec<Vec<Vec<usize>>>,
}

impl GrassmannBlocks {
    /// λ^{r,s} with 1-based indices, zero rows dropped.
    pub fn block(&self, r: usize, s: usize) -> Vec<usize> {
        self.blocks[r - 1][s - 1].iter().copied().filter(|&x| x > 0).collect()
    }

    pub fn star_count(&self) -> usize {
        self.blocks.iter().flatten().flatten().sum()
    }
}

pub fn lambda_blocks(lambda: &BoxedPartition, alpha: &[usize]) -> Result<GrassmannBlocks> {
    let beta = beta_of_lambda(lambda, alpha)?;
    let l = alpha.len();
    let ranges = column_blocks_right_to_left(alpha);
    let pivots = pivot_columns(lambda);
    let mut blocks = vec![vec![Vec::new(); l]; l];
    let mut row = 0;
    for r in 0..l {
        for a in 0..beta[r] {
            let p = pivots[row];
            let lo = ranges[r].0;
            // stars left of the pivot inside its own block
            let local = p - lo - (beta[r] - 1 - a);
            for s in 0..l {
                let v = match s.cmp(&r) {
                    core::cmp::Ordering::Less => 0,
                    core::cmp::Ordering::Equal => local,
                    core::cmp::Ordering::Greater => alpha[s] - beta[s],
                };
                blocks[r][s].push(v);
            }
            row += 1;
        }
    }
    Ok(GrassmannBlocks {
        alpha: alpha.to_vec(),
        beta,
        blocks,
    })
}

/// Inverse of [`lambda_blocks`]: only the diagonal blocks carry information.
pub fn blocks_to_lambda(alpha: &[usize], beta: &[usize], diagonal: &[Vec<usize>]) -> Result<BoxedPartition> {
    let n: usize = alpha.iter().sum();
    let k: usize = beta.iter().sum();
    if beta.len() != alpha.len() || diagonal.len() != alpha.len() {
        return Err(Error::InvalidParameters("block data has the wrong length".into()));
    }
    let ranges = column_blocks_right_to_left(alpha);
    let mut pivots = Vec::with_capacity(k);
    for r in 0..alpha.len() {
        let d = &diagonal[r];
        if beta[r] > alpha[r] {
            return Err(Error::InvalidParameters("β_r exceeds α_r".into()));
        }
        let mut padded = d.clone();
        padded.resize(beta[r], 0);
        if padded.len() != beta[r]
            || padded.windows(2).any(|w| w[0] < w[1])
            || padded.first().is_some_and(|&x| x > alpha[r] - beta[r])
        {
            return Err(Error::InvalidParameters(format!("diagonal block {} does not fit its box", r + 1)));
        }
        for (a, &x) in padded.iter().enumerate() {
            pivots.push(ranges[r].0 + x + (beta[r] - 1 - a));
        }
    }
    let parts: Vec<usize> = pivots.iter().enumerate().map(|(i, &p)| p - (k - i)).collect();
    BoxedPartition::new(k, n - k, &parts)
}

/// A minimal-length representative of a coset w S_β, in one-line notation
/// with values 1..n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CosetPerm {
    beta: Vec<usize>,
    w: Vec<usize>,
}

fn check_permutation(w: &[usize]) -> Result<()> {
    let n = w.len();
    let mut seen = vec![false; n + 1];
    for &x in w {
        if x == 0 || x > n || seen[x] {
            return Err(Error::InvalidParameters(format!("{} is not a permutation", join(w, ","))));
        }
        seen[x] = true;
    }
    Ok(())
}

impl CosetPerm {
    /// Fails with `NotMinimalRep` unless `w` increases on every β-block.
    pub fn new(beta: &[usize], w: &[usize]) -> Result<Self> {
        check_permutation(w)?;
        if beta.iter().sum::<usize>() != w.len() {
            return Err(Error::InvalidParameters("β does not sum to the length of w".into()));
        }
        let p = CosetPerm {
            beta: beta.to_vec(),
            w: w.to_vec(),
        };
        if !p.is_minimal() {
            return Err(Error::NotMinimalRep);
        }
        Ok(p)
    }

    /// The representative of w S_β: sort each block.
    pub fn minimal_rep(beta: &[usize], w: &[usize]) -> Result<Self> {
        check_permutation(w)?;
        let mut v = w.to_vec();
        for (lo, hi) in index_blocks(beta) {
            v[lo - 1..hi].sort_unstable();
        }
        CosetPerm::new(beta, &v)
    }

    fn is_minimal(&self) -> bool {
        index_blocks(&self.beta)
            .into_iter()
            .all(|(lo, hi)| self.w[lo - 1..hi].windows(2).all(|x| x[0] < x[1]))
    }

    pub fn beta(&self) -> &[usize] {
        &self.beta
    }

    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn n(&self) -> usize {
        self.w.len()
    }

    /// Inverse permutation, 1-based: `inv[v-1]` is the position of value v.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.w.len()];
        for (i, &v) in self.w.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        inv
    }
}

impl fmt::Display for CosetPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n() > 9 { "," } else { "" };
        let blocks: Vec<String> = index_blocks(&self.beta)
            .into_iter()
            .map(|(lo, hi)| join(&self.w[lo - 1..hi], sep))
            .collect();
        write!(f, "{}", blocks.join("|"))
    }
}

/// Iterator over W^β in lexicographic order of one-line notation.
#[derive(Clone, Debug)]
pub struct MinCosetReps {
    beta: Vec<usize>,
    n: usize,
    // chosen[b] = values of block b, ascending; None when exhausted
    chosen: Option<Vec<Vec<usize>>>,
}

pub fn min_coset_reps(beta: &[usize]) -> MinCosetReps {
    let n = beta.iter().sum();
    let mut it = MinCosetReps {
        beta: beta.to_vec(),
        n,
        chosen: None,
    };
    let mut chosen = vec![Vec::new(); beta.len()];
    it.fill_from(&mut chosen, 0);
    it.chosen = Some(chosen);
    it
}

impl MinCosetReps {
    fn available(&self, chosen: &[Vec<usize>], upto: usize) -> Vec<usize> {
        let mut used = vec![false; self.n + 1];
        for c in &chosen[..upto] {
            for &v in c {
                used[v] = true;
            }
        }
        (1..=self.n).filter(|&v| !used[v]).collect()
    }

    /// Smallest choice for blocks `from..`.
    fn fill_from(&self, chosen: &mut [Vec<usize>], from: usize) {
        for b in from..self.beta.len() {
            let avail = self.available(chosen, b);
            chosen[b] = avail[..self.beta[b]].to_vec();
        }
    }

    /// Next combination of `cur` within `avail` in lex order.
    fn next_combination(avail: &[usize], cur: &[usize]) -> Option<Vec<usize>> {
        let k = cur.len();
        let m = avail.len();
        let idx: Vec<usize> = cur
            .iter()
            .map(|v| avail.iter().position(|a| a == v).expect("value available"))
            .collect();
        let i = (0..k).rev().find(|&i| idx[i] < m - k + i)?;
        let mut next = idx.clone();
        next[i] += 1;
        for j in i + 1..k {
            next[j] = next[j - 1] + 1;
        }
        Some(next.into_iter().map(|j| avail[j]).collect())
    }
}

impl Iterator for MinCosetReps {
    type Item = CosetPerm;

    fn next(&mut self) -> Option<CosetPerm> {
        let cur = self.chosen.take()?;
        let w: Vec<usize> = cur.iter().flatten().copied().collect();
        let mut succ = cur.clone();
        let mut advanced = false;
        for b in (0..self.beta.len()).rev() {
            let avail = self.available(&succ, b);
            if let Some(c) = Self::next_combination(&avail, &succ[b]) {
                succ[b] = c;
                self.fill_from(&mut succ, b + 1);
                advanced = true;
                break;
            }
        }
        if advanced {
            self.chosen = Some(succ);
        }
        Some(CosetPerm {
            beta: self.beta.clone(),
            w,
        })
    }
}

/// Inversions (i, j) by position, 1-based: i < j and w(i) > w(j).
pub fn inversions(w: &[usize]) -> Vec<(usize, usize)> {
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if w[i] > w[j] {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

/// Relabel a word with distinct letters by 1..len preserving order.
pub fn standardize(word: &[usize]) -> Vec<usize> {
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    word.iter()
        .map(|x| sorted.binary_search(x).expect("letter present") + 1)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub label: usize,
    /// 1-based position in the word.
    pub position: usize,
    pub left: Option<usize>,
    pub right: Option<usize>,
}

/// Binary tree of a word: the smallest letter is the root, with the trees
/// of the subwords to its left and right as children.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InversionTree {
    pub nodes: Vec<TreeNode>,
    pub root: Option<usize>,
}

pub fn inversion_tree(word: &[usize]) -> InversionTree {
    fn build(word: &[usize], offset: usize, nodes: &mut Vec<TreeNode>) -> Option<usize> {
        let (m, _) = word.iter().enumerate().min_by_key(|&(_, &x)| x)?;
        let left = build(&word[..m], offset, nodes);
        let right = build(&word[m + 1..], offset + m + 1, nodes);
        nodes.push(TreeNode {
            label: word[m],
            position: offset + m + 1,
            left,
            right,
        });
        Some(nodes.len() - 1)
    }
    let mut nodes = Vec::with_capacity(word.len());
    let root = build(word, 0, &mut nodes);
    InversionTree { nodes, root }
}

impl InversionTree {
    pub fn in_order(&self) -> Vec<usize> {
        fn walk(t: &InversionTree, n: Option<usize>, out: &mut Vec<usize>) {
            if let Some(i) = n {
                walk(t, t.nodes[i].left, out);
                out.push(t.nodes[i].label);
                walk(t, t.nodes[i].right, out);
            }
        }
        let mut out = Vec::new();
        walk(self, self.root, &mut out);
        out
    }

    pub fn subtree_labels(&self, node: Option<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = node.into_iter().collect();
        while let Some(i) = stack.pop() {
            out.push(self.nodes[i].label);
            stack.extend(self.nodes[i].left);
            stack.extend(self.nodes[i].right);
        }
        out
    }

    pub fn node_at_position(&self, position: usize) -> Option<usize> {
        self.nodes.iter().position(|n| n.position == position)
    }
}

/// One row of the inversion-weight table: the weight is
/// [t^{q^a}, t^{q^b}] with a = k - 1 + r and b = a - ℓ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InversionWeight {
    pub positions: (usize, usize),
    pub values: (usize, usize),
    pub k: usize,
    pub ell: usize,
    pub r: usize,
    pub a: usize,
    pub b: usize,
}

/// Tree weight of the inversion at positions (i, j), 1-based.
pub fn tree_inversion_weight(w: &[usize], (i, j): (usize, usize)) -> Result<InversionWeight> {
    if i == 0 || j > w.len() || i >= j || w[i - 1] <= w[j - 1] {
        return Err(Error::NotAnInversion(i, j));
    }
    let (wi, wj) = (w[i - 1], w[j - 1]);
    // join of positions i and j: position of the minimum of w(i..j)
    let k = (i..=j).min_by_key(|&p| w[p - 1]).expect("nonempty range");
    let wk = w[k - 1];
    // left subtree: maximal run ending at k-1 of letters larger than w(k)
    let mut lo = k;
    while lo > 1 && w[lo - 2] > wk {
        lo -= 1;
    }
    let mut hi = k;
    while hi < w.len() && w[hi] > wk {
        hi += 1;
    }
    let ell = w[lo - 1..k - 1].iter().filter(|&&x| x >= wi).count();
    let r = w[k..hi].iter().filter(|&&x| x <= wj).count();
    let a = k - 1 + r;
    Ok(InversionWeight {
        positions: (i, j),
        values: (wi, wj),
        k,
        ell,
        r,
        a,
        b: a - ell,
    })
}

/// Tree weights of all inversions, sorted by (w(j), w(i)).
pub fn inversion_table(w: &[usize]) -> Vec<InversionWeight> {
    let mut rows: Vec<InversionWeight> = inversions(w)
        .into_iter()
        .map(|p| tree_inversion_weight(w, p).expect("inversion"))
        .collect();
    rows.sort_by_key(|r| (r.values.1, r.values.0));
    rows
}

/// One star rectangle of F_{rs}: `height` rows from the r side, `width`
/// columns from the s side, between row block a and column block b (a < b).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StarRectangle {
    pub a: usize,
    pub b: usize,
    pub height: usize,
    pub width: usize,
}

/// Double-coset data of a flag Schubert cell, blocks A_r labelled left to
/// right. Indices r, s in `rectangles` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagBlocks {
    pub alpha: Vec<usize>,
    pub beta: Vec<usize>,
    /// beta_s[s-1][k-1] = #{i in B_k : w(i) in A_s}.
    pub beta_s: Vec<Vec<usize>>,
    /// Diagonal permutations with absolute labels.
    pub w_s: Vec<Vec<usize>>,
    /// For each r > s, the nonempty rectangles of F_{rs}.
    pub rectangles: BTreeMap<(usize, usize), Vec<StarRectangle>>,
}

impl FlagBlocks {
    pub fn rectangle_stars(&self) -> usize {
        self.rectangles
            .values()
            .flatten()
            .map(|x| x.height * x.width)
            .sum()
    }
}

pub fn double_coset_blocks(w: &CosetPerm, alpha: &[usize]) -> Result<FlagBlocks> {
    if !w.is_minimal() {
        return Err(Error::NotMinimalRep);
    }
    check_alpha(alpha, w.n())?;
    let a_blocks = index_blocks(alpha);
    let b_blocks = index_blocks(&w.beta);
    let (l, m) = (alpha.len(), w.beta.len());
    let mut beta_s = vec![vec![0; m]; l];
    let mut w_s = vec![Vec::new(); l];
    for (k, &(lo, hi)) in b_blocks.iter().enumerate() {
        for i in lo..=hi {
            let s = block_of(&a_blocks, w.w[i - 1]);
            beta_s[s][k] += 1;
        }
    }
    for &v in &w.w {
        w_s[block_of(&a_blocks, v)].push(v);
    }
    let mut rectangles = BTreeMap::new();
    for r in 0..l {
        for s in 0..r {
            let mut rects = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    let (h, v) = (beta_s[r][a], beta_s[s][b]);
                    if h > 0 && v > 0 {
                        rects.push(StarRectangle {
                            a: a + 1,
                            b: b + 1,
                            height: h,
                            width: v,
                        });
                    }
                }
            }
            rectangles.insert((r + 1, s + 1), rects);
        }
    }
    Ok(FlagBlocks {
        alpha: alpha.to_vec(),
        beta: w.beta.clone(),
        beta_s,
        w_s,
        rectangles,
    })
}

/// Parse "5,4,1,1" or, for single digits, "5411".
pub fn parse_list(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() || s == "()" {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidParameters(format!("cannot parse '{s}' as a list of integers"));
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect()
    } else {
        s.chars()
            .filter(|c| *c != '|')
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect()
    }
}
