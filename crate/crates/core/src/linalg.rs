//! Exact sparse linear algebra over a cyclotomic field.
//!
//! The workhorse is [`Echelon`]: an incrementally built row-echelon basis of a
//! subspace that remembers, for every basis vector, a "tag" vector in some
//! other space. With unit tags on matrix columns the tags become preimages, and
//! dependencies found during insertion are kernel vectors.
//!
//! [`kernel_chain`] computes the subspaces ker x^k for a map x that is graded
//! over a directed graph of blocks (each block maps into one successor block).

use crate::exactfield::CycNum;

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    pub entries: Vec<(usize, CycNum)>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, n: u32) -> SparseVec {
        SparseVec { entries: vec![(i, CycNum::one(n))] }
    }

    pub fn from_dense(v: &[CycNum]) -> SparseVec {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, n: u32) -> Vec<CycNum> {
        let mut v = vec![CycNum::zero(n); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&CycNum> {
        self.entries.binary_search_by_key(&i, |e| e.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &CycNum) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect() }
    }
}

/// `v -= c * w` on a dense vector.
fn axpy_neg(v: &mut [CycNum], c: &CycNum, w: &SparseVec) {
    for (i, x) in &w.entries {
        let d = c * x;
        v[*i] = &v[*i] - &d;
    }
}

/// Column-sparse matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
    pub n: u32,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize, n: u32) -> SparseMatrix {
        SparseMatrix { rows, cols: vec![SparseVec::new(); cols], n }
    }

    pub fn identity(d: usize, n: u32) -> SparseMatrix {
        SparseMatrix { rows: d, cols: (0..d).map(|i| SparseVec::unit(i, n)).collect(), n }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, r: usize, c: usize) -> CycNum {
        self.cols[c].get(r).cloned().unwrap_or_else(|| CycNum::zero(self.n))
    }

    pub fn from_dense(rows: &[Vec<CycNum>], n: u32) -> SparseMatrix {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let cols = (0..nc)
            .map(|c| {
                SparseVec::from_dense(&rows.iter().map(|r| r[c].clone()).collect::<Vec<_>>())
            })
            .collect();
        SparseMatrix { rows: nr, cols, n }
    }

    pub fn to_dense(&self) -> Vec<Vec<CycNum>> {
        let mut out = vec![vec![CycNum::zero(self.n); self.ncols()]; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, x) in &col.entries {
                out[*r][c] = x.clone();
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = vec![CycNum::zero(self.n); self.rows];
        for (j, x) in &v.entries {
            axpy_neg(&mut acc, &-x, &self.cols[*j]);
        }
        SparseVec::from_dense(&acc)
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols(), other.rows);
        SparseMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
            n: self.n,
        }
    }

    /// `self - c * I` (square).
    pub fn shift(&self, c: &CycNum) -> SparseMatrix {
        let mut out = self.clone();
        for (j, col) in out.cols.iter_mut().enumerate() {
            let mut d = col.to_dense(self.rows, self.n);
            d[j] = &d[j] - c;
            *col = SparseVec::from_dense(&d);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows, 0, self.n);
        for c in &self.cols {
            e.insert(c.to_dense(self.rows, self.n), Vec::new());
        }
        e.rank()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let nc = self.ncols();
        let mut e = Echelon::new(self.rows, nc, self.n);
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            let mut tag = vec![CycNum::zero(self.n); nc];
            tag[j] = CycNum::one(self.n);
            if let Some(t) = e.insert(c.to_dense(self.rows, self.n), tag) {
                out.push(t);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    vec: SparseVec,
    tag: SparseVec,
}

/// Incremental echelon basis with tags. Every stored row satisfies the same
/// linear relation with its tag that the inserted vectors satisfied.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    tag_dim: usize,
    n: u32,
    rows: Vec<Row>,
}

impl Echelon {
    pub fn new(dim: usize, tag_dim: usize, n: u32) -> Echelon {
        Echelon { dim, tag_dim, n, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduce `v` against the basis; `tag` receives the matching combination
    /// of row tags (subtracted).
    pub fn reduce(&self, v: &mut [CycNum], tag: &mut [CycNum]) {
        for row in &self.rows {
            let c = &v[row.pivot];
            if c.is_zero() {
                continue;
            }
            let c = c.clone();
            axpy_neg(v, &c, &row.vec);
            if !tag.is_empty() {
                axpy_neg(tag, &c, &row.tag);
            }
        }
    }

    /// Insert a vector. Returns `None` if it enlarged the span, or the
    /// reduced tag if the vector was already in the span.
    pub fn insert(&mut self, mut v: Vec<CycNum>, mut tag: Vec<CycNum>) -> Option<SparseVec> {
        debug_assert_eq!(v.len(), self.dim);
        if tag.is_empty() && self.tag_dim > 0 {
            tag = vec![CycNum::zero(self.n); self.tag_dim];
        }
        self.reduce(&mut v, &mut tag);
        match v.iter().position(|x| !x.is_zero()) {
            None => Some(SparseVec::from_dense(&tag)),
            Some(p) => {
                let inv = v[p].inv().expect("pivot is nonzero");
                let vec = SparseVec::from_dense(&v).scale(&inv);
                let tag = SparseVec::from_dense(&tag).scale(&inv);
                self.rows.push(Row { pivot: p, vec, tag });
                None
            }
        }
    }

    /// Is `v` in the span?
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut d = v.to_dense(self.dim, self.n);
        self.reduce(&mut d, &mut []);
        d.iter().all(|x| x.is_zero())
    }

    /// With unit tags: coordinates of `v` with respect to the inserted
    /// vectors, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut d = v.to_dense(self.dim, self.n);
        let mut t = vec![CycNum::zero(self.n); self.tag_dim];
        self.reduce(&mut d, &mut t);
        if d.iter().all(|x| x.is_zero()) {
            Some(SparseVec::from_dense(&t).scale(&CycNum::from_int(self.n, -1)))
        } else {
            None
        }
    }
}

/// Input to [`kernel_chain`]: blocks of dimensions `dims`, block `c` mapped
/// into block `succ[c]` by `maps[c]` (`None` means x vanishes on the block).
pub struct ChainInput {
    pub dims: Vec<usize>,
    pub succ: Vec<Option<usize>>,
    pub maps: Vec<SparseMatrix>,
    pub n: u32,
}

/// For every block, the vectors of ker x^∞ grouped by the first level k at
/// which they enter ker x^k. `counts[c][k-1]` is dim K_k(c) - dim K_{k-1}(c).
#[derive(Clone, Debug)]
pub struct ChainOutput {
    pub counts: Vec<Vec<usize>>,
    pub vectors: Vec<Vec<SparseVec>>,
}

impl ChainOutput {
    /// dim ker x^k on block c.
    pub fn kdim(&self, c: usize, k: usize) -> usize {
        self.counts[c].iter().take(k).sum()
    }

    pub fn levels(&self) -> usize {
        self.counts.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn nil_dim(&self, c: usize) -> usize {
        self.counts[c].iter().sum()
    }
}

pub fn kernel_chain(inp: &ChainInput) -> ChainOutput {
    let nb = inp.dims.len();
    let n = inp.n;
    let mut images: Vec<Option<Echelon>> = Vec::with_capacity(nb);
    let mut rems: Vec<Option<Echelon>> = Vec::with_capacity(nb);
    let mut counts = vec![Vec::new(); nb];
    let mut vectors = vec![Vec::new(); nb];
    let mut fresh: Vec<Vec<SparseVec>> = vec![Vec::new(); nb];
    for c in 0..nb {
        let dc = inp.dims[c];
        match inp.succ[c] {
            None => {
                for i in 0..dc {
                    fresh[c].push(SparseVec::unit(i, n));
                }
                images.push(None);
                rems.push(None);
            }
            Some(s) => {
                let ds = inp.dims[s];
                let mut e = Echelon::new(ds, dc, n);
                for (j, col) in inp.maps[c].cols.iter().enumerate() {
                    let mut tag = vec![CycNum::zero(n); dc];
                    tag[j] = CycNum::one(n);
                    if let Some(k) = e.insert(col.to_dense(ds, n), tag) {
                        fresh[c].push(k);
                    }
                }
                images.push(Some(e));
                rems.push(Some(Echelon::new(ds, dc, n)));
            }
        }
    }
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for c in 0..nb {
        if let Some(s) = inp.succ[c] {
            preds[s].push(c);
        }
    }
    loop {
        if fresh.iter().all(|f| f.is_empty()) {
            break;
        }
        let mut next: Vec<Vec<SparseVec>> = vec![Vec::new(); nb];
        for s in 0..nb {
            for w in &fresh[s] {
                for &c in &preds[s] {
                    let img = images[c].as_ref().expect("block with successor");
                    let ds = inp.dims[s];
                    let dc = inp.dims[c];
                    let mut r = w.to_dense(ds, n);
                    let mut t = vec![CycNum::zero(n); dc];
                    img.reduce(&mut r, &mut t);
                    let p: Vec<CycNum> = t.iter().map(|x| -x).collect();
                    if let Some(u) = rems[c].as_mut().unwrap().insert(r, p) {
                        next[c].push(u);
                    }
                }
            }
        }
        for c in 0..nb {
            counts[c].push(fresh[c].len());
            vectors[c].append(&mut fresh[c]);
        }
        fresh = next;
    }
    for c in counts.iter_mut() {
        while c.last() == Some(&0) {
            c.pop();
        }
    }
    ChainOutput { counts, vectors }
}

/// Sizes of the Jordan blocks of a square matrix at eigenvalue `beta`,
/// sorted descending.
pub fn jordan_blocks(m: &SparseMatrix, beta: &CycNum) -> Vec<usize> {
    let a = m.shift(beta);
    let out = kernel_chain(&ChainInput {
        dims: vec![m.rows],
        succ: vec![Some(0)],
        maps: vec![a],
        n: m.n,
    });
    blocks_from_counts(&out.counts[0])
}

/// From dim K_k - dim K_{k-1} (= number of blocks of size ≥ k) to sizes.
pub fn blocks_from_counts(counts: &[usize]) -> Vec<usize> {
    let mut sizes = Vec::new();
    for k in (1..=counts.len()).rev() {
        let ge = counts[k - 1];
        let gt = counts.get(k).copied().unwrap_or(0);
        for _ in 0..ge.saturating_sub(gt) {
            sizes.push(k);
        }
    }
    sizes
}

/// Exact determinant of a square integer matrix (Bareiss).
pub fn det_int(m: &[Vec<i64>]) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> CycNum {
        CycNum::from_int(5, v)
    }

    #[test]
    fn jordan_literal_blocks() {
        let b = c(3);
        let j3 = SparseMatrix::from_dense(
            &[vec![b.clone(), c(1), c(0)], vec![c(0), b.clone(), c(1)], vec![c(0), c(0), b.clone()]],
            5,
        );
        assert_eq!(jordan_blocks(&j3, &b), vec![3]);
        let d = SparseMatrix::from_dense(&[vec![b.clone(), c(0)], vec![c(0), b.clone()]], 5);
        assert_eq!(jordan_blocks(&d, &b), vec![1, 1]);
        assert!(jordan_blocks(&d, &c(1)).is_empty());
        // companion of (y - 3)^2 = y^2 - 6y + 9
        let comp = SparseMatrix::from_dense(&[vec![c(0), c(-9)], vec![c(1), c(6)]], 5);
        assert_eq!(jordan_blocks(&comp, &b), vec![2]);
    }

    #[test]
    fn kernel_and_rank() {
        let m = SparseMatrix::from_dense(&[vec![c(1), c(2), c(3)], vec![c(2), c(4), c(6)]], 5);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.apply(&v).is_zero());
        }
    }

    #[test]
    fn bareiss() {
        assert_eq!(det_int(&[vec![2, 1], vec![1, 1]]), 1.into());
        assert_eq!(det_int(&[vec![0, 1], vec![1, 0]]), (-1).into());
        assert_eq!(det_int(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), (-3).into());
    }
}
