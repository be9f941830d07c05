//! Brute-force decomposition of an explicit weight module.
//!
//! Nilpotent summands are counted from the dimensions of ker x^k restricted to
//! small x-graded blocks of the basis. Non-nilpotent summands V_t([σ],β) are
//! read off from the Jordan type of Y = x^{s̄} on the weight space of the
//! canonical coset representative; the eigenvalues are taken from a candidate
//! pool whose completeness is proved by a dimension count.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactfield::CycNum;
use crate::hopfdata::{Character, HopfParams};
use crate::linalg::{kernel_chain, ChainInput, ChainOutput, Echelon, SparseMatrix, SparseVec};
use crate::weightmods::{
    build_decomposition, rep_check, tensor_rep, Decomposition, Label, MatrixRep, NonNilLabel,
};

/// Candidate eigenvalues of Y on the invertible part, each with an s′-th root
/// used to label the summands it produces. Always contains 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPool {
    vals: BTreeMap<CycNum, CycNum>,
}

impl EigenPool {
    pub fn new(n: u32) -> EigenPool {
        let mut vals = BTreeMap::new();
        vals.insert(CycNum::zero(n), CycNum::zero(n));
        EigenPool { vals }
    }

    /// Add β = η^{s′} with root η.
    pub fn insert_root(&mut self, eta: &CycNum, sprime: u64) {
        self.vals.entry(eta.pow_u(sprime)).or_insert_with(|| eta.clone());
    }

    /// Add all β's carried by non-nilpotent labels.
    pub fn insert_labels(&mut self, d: &Decomposition) {
        for (l, _) in d.iter() {
            if let Label::NonNil(n) = l {
                self.vals.entry(n.beta.clone()).or_insert_with(|| n.eta.clone());
            }
        }
    }

    pub fn extend(&mut self, o: &EigenPool) {
        for (b, r) in &o.vals {
            self.vals.entry(b.clone()).or_insert_with(|| r.clone());
        }
    }

    pub fn root(&self, beta: &CycNum) -> Option<&CycNum> {
        self.vals.get(beta)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CycNum> {
        self.vals.keys()
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }
}

/// Jordan data of Y on one weight space: eigenvalue → block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceJordan {
    pub weight: Character,
    pub dim: usize,
    pub blocks: Vec<(CycNum, Vec<usize>)>,
}

impl SliceJordan {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weight": self.weight.to_string(),
            "dim": self.dim,
            "blocks": self.blocks.iter().map(|(b, s)| serde_json::json!({"eigenvalue": b.to_json(), "sizes": s})).collect::<Vec<_>>(),
        })
    }
}

/// Partition of the basis by weight; x must map slice μ into slice χμ.
pub fn weight_slices(rep: &MatrixRep, p: &HopfParams) -> Result<BTreeMap<Character, Vec<usize>>> {
    let mut out: BTreeMap<Character, Vec<usize>> = BTreeMap::new();
    for (i, w) in rep.weights.iter().enumerate() {
        out.entry(w.clone()).or_default().push(i);
    }
    for (j, col) in rep.x.cols.iter().enumerate() {
        let target = rep.weights[j].mul(&p.chi);
        if let Some((i, _)) = col.entries.iter().find(|(i, _)| rep.weights[*i] != target) {
            return Err(Error::InvalidRep(format!(
                "x sends basis vector {j} (weight {}) to basis vector {i} (weight {})",
                rep.weights[j], rep.weights[*i]
            )));
        }
    }
    Ok(out)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Basis blocks such that x maps each block into a single block and no two
/// blocks share a target. Then ker x^k splits along the blocks.
pub struct Blocks {
    pub members: Vec<Vec<usize>>,
    pub block_of: Vec<usize>,
    pub succ: Vec<Option<usize>>,
    pub pred: Vec<Option<usize>>,
    pub maps: Vec<SparseMatrix>,
}

pub fn refine_blocks(rep: &MatrixRep) -> Blocks {
    let d = rep.dim;
    let mut uf = UnionFind::new(d);
    loop {
        let mut changed = false;
        // image of a block lies in one block
        let mut first_row: Vec<Option<usize>> = vec![None; d];
        for j in 0..d {
            let root = uf.find(j);
            for (i, _) in &rep.x.cols[j].entries {
                match first_row[root] {
                    None => first_row[root] = Some(*i),
                    Some(r) => changed |= uf.union(r, *i),
                }
            }
        }
        // blocks with a common target merge
        let mut source_of: Vec<Option<usize>> = vec![None; d];
        for j in 0..d {
            if let Some((i, _)) = rep.x.cols[j].entries.first() {
                let t = uf.find(*i);
                match source_of[t] {
                    None => source_of[t] = Some(j),
                    Some(k) => changed |= uf.union(k, j),
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut id_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut block_of = vec![0; d];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..d {
        let r = uf.find(i);
        let id = *id_of_root.entry(r).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        block_of[i] = id;
        members[id].push(i);
    }
    let nb = members.len();
    let mut pos = vec![0; d];
    for m in &members {
        for (k, &i) in m.iter().enumerate() {
            pos[i] = k;
        }
    }
    let mut succ = vec![None; nb];
    let mut pred = vec![None; nb];
    let mut maps = Vec::with_capacity(nb);
    for (c, m) in members.iter().enumerate() {
        let target = m
            .iter()
            .find_map(|&j| rep.x.cols[j].entries.first().map(|(i, _)| block_of[*i]));
        succ[c] = target;
        if let Some(s) = target {
            pred[s] = Some(c);
            let cols = m
                .iter()
                .map(|&j| SparseVec {
                    entries: rep.x.cols[j].entries.iter().map(|(i, v)| (pos[*i], v.clone())).collect(),
                })
                .collect();
            maps.push(SparseMatrix { rows: members[s].len(), cols, n: rep.x.n });
        } else {
            maps.push(SparseMatrix::zero(0, m.len(), rep.x.n));
        }
    }
    Blocks { members, block_of, succ, pred, maps }
}

/// Nilpotent summands of any weight module together with the dimension of
/// ker x^∞ (the nilpotent part), block by block.
pub struct NilAnalysis {
    pub decomposition: Decomposition,
    pub blocks: Blocks,
    pub chain: ChainOutput,
}

impl NilAnalysis {
    pub fn nil_dim(&self) -> usize {
        (0..self.blocks.members.len()).map(|c| self.chain.nil_dim(c)).sum()
    }

    /// Nilpotent-part dimension inside the weight space with the given indices.
    pub fn nil_dim_in(&self, indices: &[usize]) -> usize {
        let blocks: BTreeSet<usize> = indices.iter().map(|&i| self.blocks.block_of[i]).collect();
        blocks.iter().map(|&c| self.chain.nil_dim(c)).sum()
    }
}

pub fn analyze_nil(rep: &MatrixRep, p: &HopfParams) -> Result<NilAnalysis> {
    let blocks = refine_blocks(rep);
    let chain = kernel_chain(&ChainInput {
        dims: blocks.members.iter().map(|m| m.len()).collect(),
        succ: blocks.succ.clone(),
        maps: blocks.maps.clone(),
        n: p.n,
    });
    let delta = |c: usize, t: usize| -> usize {
        if t == 0 {
            return 0;
        }
        chain.counts[c].get(t - 1).copied().unwrap_or(0)
    };
    let mut decomposition = Decomposition::new();
    for (c, m) in blocks.members.iter().enumerate() {
        let weight = &rep.weights[m[0]];
        for t in 1..=chain.counts[c].len() {
            let inflow = blocks.pred[c].map_or(0, |pc| delta(pc, t + 1));
            let here = delta(c, t);
            if inflow > here {
                return Err(Error::Internal(format!(
                    "negative multiplicity for V{t}({weight}) in nilpotent count"
                )));
            }
            decomposition.add_label(Label::nil(t, weight.clone()), (here - inflow) as u64);
        }
    }
    Ok(NilAnalysis { decomposition, blocks, chain })
}

/// Decomposition of a module on which x is nilpotent.
pub fn decompose_nilpotent(rep: &MatrixRep, p: &HopfParams) -> Result<Decomposition> {
    let a = analyze_nil(rep, p)?;
    if a.nil_dim() != rep.dim {
        return Err(Error::InvalidArgument(format!(
            "x is not nilpotent: ker x^inf has dimension {} of {}",
            a.nil_dim(),
            rep.dim
        )));
    }
    check_dim(&a.decomposition, rep.dim, p)?;
    Ok(a.decomposition)
}

fn check_dim(d: &Decomposition, dim: usize, p: &HopfParams) -> Result<()> {
    if d.dim(p) != dim {
        return Err(Error::Internal(format!(
            "dimension audit failed: summands give {}, module has {}",
            d.dim(p),
            dim
        )));
    }
    Ok(())
}

/// Y = x^{s̄} on the weight space of `mu`, as a matrix in the slice basis.
/// Zero if the ⟨χ⟩-orbit of `mu` is not fully present.
pub fn slice_power(
    rep: &MatrixRep,
    slices: &BTreeMap<Character, Vec<usize>>,
    mu: &Character,
    p: &HopfParams,
) -> Result<SparseMatrix> {
    let sb = p
        .sbar_finite()
        .ok_or_else(|| Error::UnsupportedCase("x^sbar needs |chi| < infinity".into()))?;
    let start = slices.get(mu).cloned().unwrap_or_default();
    let mut y = SparseMatrix::identity(start.len(), p.n);
    let mut cur_w = mu.clone();
    let mut cur = start.clone();
    for _ in 0..sb {
        let next_w = cur_w.mul(&p.chi);
        let next = match slices.get(&next_w) {
            Some(v) => v.clone(),
            None => return Ok(SparseMatrix::zero(start.len(), start.len(), p.n)),
        };
        let pos: BTreeMap<usize, usize> = next.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let m = SparseMatrix {
            rows: next.len(),
            cols: cur
                .iter()
                .map(|&j| SparseVec {
                    entries: rep.x.cols[j].entries.iter().map(|(i, v)| (pos[i], v.clone())).collect(),
                })
                .collect(),
            n: p.n,
        };
        y = m.mul(&y);
        cur = next;
        cur_w = next_w;
    }
    Ok(y)
}

/// Jordan data of Y on the slice of `mu` for the pool values, stopping once
/// the generalized eigenspaces fill `target` dimensions. Zero is skipped:
/// `known_zero` is the size of the nilpotent part on this slice.
fn slice_jordan_inner(
    y: &SparseMatrix,
    mu: &Character,
    pool: &EigenPool,
    known_zero: Option<usize>,
) -> Result<SliceJordan> {
    let dim = y.rows;
    let mut filled = 0usize;
    let mut blocks = Vec::new();
    if let Some(z) = known_zero {
        filled = z;
    }
    for beta in pool.iter() {
        if filled == dim {
            break;
        }
        if beta.is_zero() && known_zero.is_some() {
            continue;
        }
        let sizes = crate::linalg::jordan_blocks(y, beta);
        let g: usize = sizes.iter().sum();
        if g > 0 {
            filled += g;
            blocks.push((beta.clone(), sizes));
        }
    }
    if filled != dim {
        return Err(Error::IncompleteEigenPool { slice: mu.to_string(), missing: dim - filled });
    }
    Ok(SliceJordan { weight: mu.clone(), dim, blocks })
}

/// Jordan data of Y on one weight space (every pool value, including 0).
pub fn slice_jordan(rep: &MatrixRep, mu: &Character, pool: &EigenPool, p: &HopfParams) -> Result<SliceJordan> {
    let slices = weight_slices(rep, p)?;
    let y = slice_power(rep, &slices, mu, p)?;
    slice_jordan_inner(&y, mu, pool, None)
}

fn coset_reps(rep: &MatrixRep, p: &HopfParams) -> BTreeSet<Character> {
    rep.weights.iter().map(|w| p.coset_rep(w)).collect()
}

/// Non-nilpotent summands read from the canonical slice of each coset.
pub fn decompose_invertible(
    rep: &MatrixRep,
    pool: &EigenPool,
    p: &HopfParams,
) -> Result<(Decomposition, Vec<SliceJordan>)> {
    invertible_inner(rep, pool, p, None)
}

fn invertible_inner(
    rep: &MatrixRep,
    pool: &EigenPool,
    p: &HopfParams,
    nil: Option<&NilAnalysis>,
) -> Result<(Decomposition, Vec<SliceJordan>)> {
    let slices = weight_slices(rep, p)?;
    let sp = p
        .sprime
        .ok_or_else(|| Error::UnsupportedCase("invertible part needs |chi| < infinity".into()))?;
    let mut out = Decomposition::new();
    let mut tables = Vec::new();
    for sigma in coset_reps(rep, p) {
        let idx = slices.get(&sigma).cloned().unwrap_or_default();
        if idx.is_empty() {
            continue;
        }
        let known_zero = nil.map(|a| a.nil_dim_in(&idx));
        if known_zero == Some(idx.len()) {
            continue;
        }
        let y = slice_power(rep, &slices, &sigma, p)?;
        let table = slice_jordan_inner(&y, &sigma, pool, known_zero)?;
        for (beta, sizes) in &table.blocks {
            if beta.is_zero() {
                continue;
            }
            for &t in sizes {
                let eta = pool.root(beta).cloned().ok_or_else(|| {
                    Error::Internal(format!("no {sp}-th root known for eigenvalue {beta}"))
                })?;
                let lab = NonNilLabel::new(t, &sigma, eta, p)?;
                if lab.beta != *beta {
                    return Err(Error::Internal("carried root does not match eigenvalue".into()));
                }
                out.add_label(Label::NonNil(lab), 1);
            }
        }
        tables.push(table);
    }
    Ok((out, tables))
}

/// Explicit Fitting decomposition for Y = x^{s̄}: bases (in full coordinates)
/// of the nilpotent part ker Y^D and the invertible part im Y^D.
pub struct FittingSplit {
    pub nil: Vec<SparseVec>,
    pub inv: Vec<SparseVec>,
}

pub fn fitting_split(rep: &MatrixRep, p: &HopfParams) -> Result<FittingSplit> {
    let a = analyze_nil(rep, p)?;
    let mut nil = Vec::new();
    for (c, m) in a.blocks.members.iter().enumerate() {
        for v in &a.chain.vectors[c] {
            nil.push(SparseVec { entries: v.entries.iter().map(|(k, x)| (m[*k], x.clone())).collect() });
        }
    }
    let sb = match p.sbar_finite() {
        None => {
            if nil.len() != rep.dim {
                return Err(Error::InvalidRep("x is not nilpotent although |chi| is infinite".into()));
            }
            return Ok(FittingSplit { nil, inv: Vec::new() });
        }
        Some(sb) => sb as usize,
    };
    let slices = weight_slices(rep, p)?;
    let levels = a.chain.levels();
    let m = levels.div_ceil(sb).max(1) as u64;
    let mut inv = Vec::new();
    let mut inv_by_slice: BTreeMap<Character, Echelon> = BTreeMap::new();
    for (w, idx) in &slices {
        let y = slice_power(rep, &slices, w, p)?;
        let mut pw = SparseMatrix::identity(idx.len(), p.n);
        for _ in 0..m {
            pw = y.mul(&pw);
        }
        let mut e = Echelon::new(rep.dim, 0, p.n);
        for col in &pw.cols {
            let full = SparseVec { entries: col.entries.iter().map(|(k, x)| (idx[*k], x.clone())).collect() };
            if e.insert(full.to_dense(rep.dim, p.n), Vec::new()).is_none() && !full.is_zero() {
                inv.push(full);
            }
        }
        inv_by_slice.insert(w.clone(), e);
    }
    let mut nil_e = Echelon::new(rep.dim, 0, p.n);
    for v in &nil {
        nil_e.insert(v.to_dense(rep.dim, p.n), Vec::new());
    }
    for v in &nil {
        if !nil_e.contains(&rep.x.apply(v)) {
            return Err(Error::Internal("nilpotent part is not x-stable".into()));
        }
    }
    for v in &inv {
        let w = rep.weights[v.entries[0].0].mul(&p.chi);
        let img = rep.x.apply(v);
        let ok = match inv_by_slice.get(&w) {
            Some(e) => e.contains(&img),
            None => img.is_zero(),
        };
        if !ok {
            return Err(Error::Internal("invertible part is not x-stable".into()));
        }
    }
    let mut all = nil_e.clone();
    for v in &inv {
        all.insert(v.to_dense(rep.dim, p.n), Vec::new());
    }
    if nil.len() + inv.len() != rep.dim || all.rank() != rep.dim {
        return Err(Error::Internal(format!(
            "Fitting parts do not span: {} + {} vs {}",
            nil.len(),
            inv.len(),
            rep.dim
        )));
    }
    Ok(FittingSplit { nil, inv })
}

/// Representation on an x-stable span of weight vectors.
pub fn restrict(rep: &MatrixRep, basis: &[SparseVec], p: &HopfParams) -> Result<MatrixRep> {
    let k = basis.len();
    let mut e = Echelon::new(rep.dim, k, p.n);
    for (i, v) in basis.iter().enumerate() {
        let mut tag = vec![CycNum::zero(p.n); k];
        tag[i] = CycNum::one(p.n);
        if e.insert(v.to_dense(rep.dim, p.n), tag).is_some() {
            return Err(Error::InvalidArgument("restriction basis is dependent".into()));
        }
    }
    let mut weights = Vec::with_capacity(k);
    for v in basis {
        let w = &rep.weights[v.entries.first().ok_or_else(|| Error::InvalidArgument("zero basis vector".into()))?.0];
        if v.entries.iter().any(|(i, _)| rep.weights[*i] != *w) {
            return Err(Error::InvalidArgument("restriction basis vector is not a weight vector".into()));
        }
        weights.push(w.clone());
    }
    let mut x = SparseMatrix::zero(k, k, p.n);
    for (j, v) in basis.iter().enumerate() {
        x.cols[j] = e
            .solve(&rep.x.apply(v))
            .ok_or_else(|| Error::Internal("subspace is not x-stable".into()))?;
    }
    Ok(MatrixRep::from_weights(weights, x, p))
}

/// Full pipeline: nilpotent part by graded kernel counts, invertible part by
/// Jordan data on canonical slices, dimension audit.
pub fn decompose(rep: &MatrixRep, p: &HopfParams, pool_hint: Option<&EigenPool>) -> Result<Decomposition> {
    Ok(decompose_report(rep, p, pool_hint)?.0)
}

pub fn decompose_report(
    rep: &MatrixRep,
    p: &HopfParams,
    pool_hint: Option<&EigenPool>,
) -> Result<(Decomposition, Vec<SliceJordan>)> {
    if !rep_check(rep, p) {
        return Err(Error::InvalidRep("representation fails the defining relations".into()));
    }
    weight_slices(rep, p)?;
    let a = analyze_nil(rep, p)?;
    let mut out = a.decomposition.clone();
    let mut tables = Vec::new();
    if a.nil_dim() != rep.dim {
        if p.sbar_finite().is_none() {
            return Err(Error::InvalidRep("x is not nilpotent although |chi| is infinite".into()));
        }
        let mut pool = EigenPool::new(p.n);
        if let Some(h) = pool_hint {
            pool.extend(h);
        }
        let (inv, t) = invertible_inner(rep, &pool, p, Some(&a))?;
        out = out.add(&inv);
        tables = t;
    }
    check_dim(&out, rep.dim, p)?;
    Ok((out, tables))
}

/// Eigenvalue candidates for a tensor product, computed from the factors:
/// their β's, the twists β ↦ λ(a)^{s̄}β by nilpotent weights of the other
/// factor, and the grid (θλ(a)^s + ηξ^j)^{s′} for pairs of non-nilpotent
/// summands.
pub fn candidate_pool(a: &Decomposition, b: &Decomposition, p: &HopfParams) -> EigenPool {
    let mut pool = EigenPool::new(p.n);
    let (Some(_), Some(sp), Some(s)) = (p.sbar_finite(), p.sprime, p.s_finite()) else {
        return pool;
    };
    let xi = p.xi.clone().expect("finite sbar");
    let add_root = |pool: &mut EigenPool, eta: &CycNum| {
        if !eta.is_zero() {
            pool.insert_root(eta, sp);
        }
    };
    let nil_weights = |d: &Decomposition| -> Vec<Character> {
        d.iter()
            .filter_map(|(l, _)| match l {
                Label::Nil(n) => Some(n.lambda.clone()),
                _ => None,
            })
            .collect()
    };
    let nonnil = |d: &Decomposition| -> Vec<NonNilLabel> {
        d.iter()
            .filter_map(|(l, _)| match l {
                Label::NonNil(n) => Some(n.clone()),
                _ => None,
            })
            .collect()
    };
    let (na, nb) = (nil_weights(a), nil_weights(b));
    let (wa, wb) = (nonnil(a), nonnil(b));
    for l in wa.iter().chain(wb.iter()) {
        add_root(&mut pool, &l.eta);
    }
    for lam in na.iter().chain(nb.iter()) {
        let la = p.at_a(lam);
        for l in wa.iter().chain(wb.iter()) {
            add_root(&mut pool, &(&la.pow_u(s) * &l.eta));
            if let Ok(inv) = la.inv() {
                add_root(&mut pool, &(&inv.pow_u(s) * &l.eta));
            }
        }
    }
    for (l, r) in wa.iter().flat_map(|x| wb.iter().map(move |y| (x, y))) {
        for (left, right) in [(l, r), (r, l)] {
            let ls = p.at_a(&right.sigma).pow_u(s);
            let base = &left.eta * &ls;
            let mut xp = CycNum::one(p.n);
            for _ in 0..sp {
                add_root(&mut pool, &(&base + &(&right.eta * &xp)));
                xp = &xp * &xi;
            }
        }
    }
    pool
}

/// Oracle tensor product of two decompositions.
pub fn oracle_tensor(
    a: &Decomposition,
    b: &Decomposition,
    p: &HopfParams,
    hint: Option<&EigenPool>,
) -> Result<Decomposition> {
    let ra = build_decomposition(a, p)?;
    let rb = build_decomposition(b, p)?;
    let rep = tensor_rep(&ra, &rb, p);
    let mut pool = candidate_pool(a, b, p);
    if let Some(h) = hint {
        pool.extend(h);
    }
    decompose(&rep, p, Some(&pool))
}
