//! Indecomposable weight modules: labels, explicit matrices, direct sums.
//!
//! `V_t(λ)` has basis m₀…m_{t-1} of weights χ^iλ with x the down-shift.
//! `V_t(σ,β)` has basis m₀…m_{ts̄-1}; x shifts, except that
//! x·m_{ts̄-1} = Σ α_j m_{js̄} where (y-β)^t = y^t - Σ α_j y^j.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::exactfield::CycNum;
use crate::hopfdata::{Character, HopfParams};
use crate::linalg::{SparseMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilLabel {
    pub t: usize,
    pub lambda: Character,
}

/// V_t([σ], β). Equality, ordering and hashing ignore the carried root η.
#[derive(Clone, Debug)]
pub struct NonNilLabel {
    pub t: usize,
    pub sigma: Character,
    pub beta: CycNum,
    pub eta: CycNum,
}

impl NonNilLabel {
    /// Label with β = η^{s′}; σ is replaced by its coset representative.
    pub fn new(t: usize, sigma: &Character, eta: CycNum, p: &HopfParams) -> Result<NonNilLabel> {
        let sp = p.sprime.ok_or_else(|| {
            Error::UnsupportedCase("non-nilpotent modules need |chi| < infinity".into())
        })?;
        if t == 0 {
            return Err(Error::InvalidArgument("module length must be positive".into()));
        }
        if eta.is_zero() {
            return Err(Error::InvalidArgument(
                "eta = 0 gives beta = 0, which is a nilpotent module".into(),
            ));
        }
        let beta = eta.pow_u(sp);
        Ok(NonNilLabel { t, sigma: p.coset_rep(sigma), beta, eta })
    }

    fn key(&self) -> (usize, &Character, &CycNum) {
        (self.t, &self.sigma, &self.beta)
    }
}

impl PartialEq for NonNilLabel {
    fn eq(&self, o: &Self) -> bool {
        self.key() == o.key()
    }
}

impl Eq for NonNilLabel {}

impl Hash for NonNilLabel {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.key().hash(h)
    }
}

impl Ord for NonNilLabel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

impl PartialOrd for NonNilLabel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Nil(NilLabel),
    NonNil(NonNilLabel),
}

impl Label {
    pub fn nil(t: usize, lambda: Character) -> Label {
        Label::Nil(NilLabel { t, lambda })
    }

    pub fn t(&self) -> usize {
        match self {
            Label::Nil(l) => l.t,
            Label::NonNil(l) => l.t,
        }
    }

    pub fn dim(&self, p: &HopfParams) -> usize {
        match self {
            Label::Nil(l) => l.t,
            Label::NonNil(l) => l.t * p.sbar_finite().unwrap_or(0) as usize,
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Label::Nil(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Label::Nil(l) => serde_json::json!({
                "type": "nil", "t": l.t, "char": l.lambda.to_string(), "beta": null,
            }),
            Label::NonNil(l) => serde_json::json!({
                "type": "nonnil", "t": l.t, "char": l.sigma.to_string(), "beta": l.beta.to_json(),
            }),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Nil(l) => write!(f, "V{}({})", l.t, l.lambda),
            Label::NonNil(l) => write!(f, "W{}({}; beta={})", l.t, l.sigma, l.beta),
        }
    }
}

/// Finite multiset of labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomposition {
    map: BTreeMap<Label, u64>,
}

impl Decomposition {
    pub fn new() -> Decomposition {
        Decomposition::default()
    }

    pub fn single(l: Label) -> Decomposition {
        let mut d = Decomposition::new();
        d.add_label(l, 1);
        d
    }

    pub fn add_label(&mut self, l: Label, k: u64) {
        if k > 0 {
            *self.map.entry(l).or_insert(0) += k;
        }
    }

    pub fn add(&self, o: &Decomposition) -> Decomposition {
        let mut out = self.clone();
        for (l, &k) in &o.map {
            out.add_label(l.clone(), k);
        }
        out
    }

    pub fn scale(&self, k: u64) -> Decomposition {
        let mut out = Decomposition::new();
        for (l, &m) in &self.map {
            out.add_label(l.clone(), m * k);
        }
        out
    }

    pub fn dim(&self, p: &HopfParams) -> usize {
        self.map.iter().map(|(l, &k)| l.dim(p) * k as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, u64)> {
        self.map.iter().map(|(l, &k)| (l, k))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, l: &Label) -> u64 {
        self.map.get(l).copied().unwrap_or(0)
    }

    /// `self - o` as signed multiplicities (nonzero entries only).
    pub fn diff(&self, o: &Decomposition) -> Vec<(Label, i64)> {
        let mut m: BTreeMap<&Label, i64> = BTreeMap::new();
        for (l, &k) in &self.map {
            *m.entry(l).or_insert(0) += k as i64;
        }
        for (l, &k) in &o.map {
            *m.entry(l).or_insert(0) -= k as i64;
        }
        m.into_iter().filter(|(_, v)| *v != 0).map(|(l, v)| (l.clone(), v)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.map
                .iter()
                .map(|(l, &k)| {
                    let mut v = l.to_json();
                    v["mult"] = serde_json::json!(k);
                    v
                })
                .collect(),
        )
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.map.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .map
            .iter()
            .map(|(l, &k)| if k == 1 { l.to_string() } else { format!("{k}*{l}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromIterator<(Label, u64)> for Decomposition {
    fn from_iter<I: IntoIterator<Item = (Label, u64)>>(it: I) -> Self {
        let mut d = Decomposition::new();
        for (l, k) in it {
            d.add_label(l, k);
        }
        d
    }
}

/// Explicit weight-graded representation. The group acts diagonally; `gdiag[g]`
/// holds the eigenvalues of the g-th generator.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub dim: usize,
    pub weights: Vec<Character>,
    pub gdiag: Vec<Vec<CycNum>>,
    pub x: SparseMatrix,
}

impl MatrixRep {
    pub fn from_weights(weights: Vec<Character>, x: SparseMatrix, p: &HopfParams) -> MatrixRep {
        let gdiag = (0..p.group.ngens())
            .map(|g| {
                let e = p.group.generator(g);
                weights.iter().map(|w| w.eval(&e)).collect()
            })
            .collect();
        MatrixRep { dim: weights.len(), weights, gdiag, x }
    }

    pub fn gmat(&self, g: usize) -> SparseMatrix {
        SparseMatrix {
            rows: self.dim,
            cols: self.gdiag[g]
                .iter()
                .enumerate()
                .map(|(i, v)| SparseVec { entries: vec![(i, v.clone())] })
                .collect(),
            n: self.x.n,
        }
    }
}

pub fn build_nil(t: usize, lambda: &Character, p: &HopfParams) -> MatrixRep {
    let weights: Vec<Character> = (0..t).map(|i| p.chi_shift(lambda, i as i64)).collect();
    let mut x = SparseMatrix::zero(t, t, p.n);
    for i in 0..t.saturating_sub(1) {
        x.cols[i] = SparseVec::unit(i + 1, p.n);
    }
    MatrixRep::from_weights(weights, x, p)
}

/// α₀ … α_{t-1} with (y - β)^t = y^t - Σ α_j y^j.
pub fn companion_alphas(t: usize, beta: &CycNum) -> Vec<CycNum> {
    let n = beta.order_n();
    // coefficients of (y - β)^t, ascending
    let mut c = vec![CycNum::one(n)];
    let mb = -beta;
    for _ in 0..t {
        let mut next = vec![CycNum::zero(n); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = &next[i + 1] + ci;
            next[i] = &next[i] + &(ci * &mb);
        }
        c = next;
    }
    c[..t].iter().map(|x| -x).collect()
}

pub fn build_nonnil(t: usize, sigma: &Character, eta: &CycNum, p: &HopfParams) -> Result<MatrixRep> {
    let sb = p.sbar_finite().ok_or_else(|| {
        Error::UnsupportedCase("no non-nilpotent indecomposables when |chi| is infinite".into())
    })? as usize;
    let sp = p.sprime.expect("finite sbar");
    if eta.is_zero() {
        return Err(Error::InvalidArgument("eta must be nonzero".into()));
    }
    if t == 0 {
        return Err(Error::InvalidArgument("module length must be positive".into()));
    }
    let beta = eta.pow_u(sp);
    let d = t * sb;
    let weights: Vec<Character> = (0..d).map(|i| p.chi_shift(sigma, i as i64)).collect();
    let mut x = SparseMatrix::zero(d, d, p.n);
    for i in 0..d - 1 {
        x.cols[i] = SparseVec::unit(i + 1, p.n);
    }
    let alphas = companion_alphas(t, &beta);
    x.cols[d - 1] = SparseVec {
        entries: alphas
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| (j * sb, a))
            .collect(),
    };
    Ok(MatrixRep::from_weights(weights, x, p))
}

pub fn build_label(l: &Label, p: &HopfParams) -> Result<MatrixRep> {
    match l {
        Label::Nil(l) => Ok(build_nil(l.t, &l.lambda, p)),
        Label::NonNil(l) => build_nonnil(l.t, &l.sigma, &l.eta, p),
    }
}

/// Block-diagonal realization of a whole decomposition.
pub fn build_decomposition(d: &Decomposition, p: &HopfParams) -> Result<MatrixRep> {
    let mut out = MatrixRep::from_weights(Vec::new(), SparseMatrix::zero(0, 0, p.n), p);
    for (l, k) in d.iter() {
        let r = build_label(l, p)?;
        for _ in 0..k {
            out = direct_sum(&out, &r);
        }
    }
    Ok(out)
}

pub fn rep_check(rep: &MatrixRep, p: &HopfParams) -> bool {
    let d = rep.dim;
    if rep.weights.len() != d || rep.x.rows != d || rep.x.ncols() != d {
        return false;
    }
    if rep.gdiag.len() != p.group.ngens() || rep.gdiag.iter().any(|g| g.len() != d) {
        return false;
    }
    for g in 0..p.group.ngens() {
        let e = p.group.generator(g);
        if (0..d).any(|i| rep.gdiag[g][i] != rep.weights[i].eval(&e)) {
            return false;
        }
    }
    let chi_inv: Vec<CycNum> = (0..p.group.ngens())
        .map(|g| p.chi.eval(&p.group.generator(g)).inv().expect("nonzero"))
        .collect();
    for (j, col) in rep.x.cols.iter().enumerate() {
        for (i, v) in &col.entries {
            if v.is_zero() || *i >= d {
                return false;
            }
            if rep.weights[*i] != rep.weights[j].mul(&p.chi) {
                return false;
            }
            // (x g)_{ij} = x_ij g_j must equal χ⁻¹(g) (g x)_{ij} = χ⁻¹(g) g_i x_ij
            for g in 0..p.group.ngens() {
                let lhs = v * &rep.gdiag[g][j];
                let rhs = &(&chi_inv[g] * &rep.gdiag[g][*i]) * v;
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// A ⊗ B with x ↦ x_A ⊗ ρ_B(a) + 1 ⊗ x_B; basis e_i ⊗ f_j at index i·dim B + j.
pub fn tensor_rep(a: &MatrixRep, b: &MatrixRep, p: &HopfParams) -> MatrixRep {
    let (da, db) = (a.dim, b.dim);
    let rho_b: Vec<CycNum> = b.weights.iter().map(|w| p.at_a(w)).collect();
    let mut weights = Vec::with_capacity(da * db);
    for wa in &a.weights {
        for wb in &b.weights {
            weights.push(wa.mul(wb));
        }
    }
    let mut x = SparseMatrix::zero(da * db, da * db, p.n);
    for i in 0..da {
        for j in 0..db {
            let mut entries: Vec<(usize, CycNum)> = Vec::new();
            for (k, v) in &a.x.cols[i].entries {
                entries.push((k * db + j, v * &rho_b[j]));
            }
            for (l, w) in &b.x.cols[j].entries {
                entries.push((i * db + l, w.clone()));
            }
            entries.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, CycNum)> = Vec::with_capacity(entries.len());
            for (r, v) in entries {
                match merged.last_mut() {
                    Some(last) if last.0 == r => last.1 = &last.1 + &v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            x.cols[i * db + j] = SparseVec { entries: merged };
        }
    }
    let gdiag = a
        .gdiag
        .iter()
        .zip(&b.gdiag)
        .map(|(ga, gb)| {
            let mut v = Vec::with_capacity(da * db);
            for u in ga {
                for w in gb {
                    v.push(u * w);
                }
            }
            v
        })
        .collect();
    MatrixRep { dim: da * db, weights, gdiag, x }
}

pub fn direct_sum(a: &MatrixRep, b: &MatrixRep) -> MatrixRep {
    let d = a.dim + b.dim;
    let mut x = SparseMatrix::zero(d, d, a.x.n);
    for (j, col) in a.x.cols.iter().enumerate() {
        x.cols[j] = col.clone();
    }
    for (j, col) in b.x.cols.iter().enumerate() {
        x.cols[a.dim + j] =
            SparseVec { entries: col.entries.iter().map(|(i, v)| (a.dim + i, v.clone())).collect() };
    }
    let mut weights = a.weights.clone();
    weights.extend(b.weights.iter().cloned());
    let gdiag = a
        .gdiag
        .iter()
        .zip(&b.gdiag)
        .map(|(u, v)| u.iter().chain(v.iter()).cloned().collect())
        .collect();
    MatrixRep { dim: d, weights, gdiag, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopfdata::GroupSpec;

    fn params() -> HopfParams {
        let g = GroupSpec::new(0, vec![6]).unwrap();
        let chi = Character::new(&g, 6, vec![], vec![1]).unwrap();
        HopfParams::new(6, g, vec![2], chi).unwrap()
    }

    #[test]
    fn alphas_match_expansion() {
        let b = CycNum::from_int(6, 3);
        let a = companion_alphas(2, &b);
        assert_eq!(a, vec![CycNum::from_int(6, -9), CycNum::from_int(6, 6)]);
        assert_eq!(companion_alphas(1, &b), vec![b]);
    }

    #[test]
    fn builds_are_valid() {
        let p = params();
        let eps = p.eps();
        for t in 1..5 {
            assert!(rep_check(&build_nil(t, &eps, &p), &p));
            let r = build_nonnil(t, &p.chi, &CycNum::from_int(6, 2), &p).unwrap();
            assert_eq!(r.dim, t * 6);
            assert!(rep_check(&r, &p));
        }
        let mut bad = build_nil(3, &eps, &p);
        bad.x = SparseMatrix::identity(3, 6);
        assert!(!rep_check(&bad, &p));
        let t = tensor_rep(&build_nil(2, &eps, &p), &build_nil(3, &eps, &p), &p);
        assert_eq!(t.dim, 6);
        assert!(rep_check(&t, &p));
    }

    #[test]
    fn label_ignores_eta() {
        let p = params();
        let a = NonNilLabel::new(2, &p.eps(), CycNum::from_int(6, 1), &p).unwrap();
        let b = NonNilLabel::new(2, &p.chi, CycNum::from_int(6, -1), &p).unwrap();
        // s' = 2 here, so η and -η give the same β
        assert_eq!(p.sprime, Some(2));
        assert_eq!(a, b);
        assert!(NonNilLabel::new(1, &p.eps(), CycNum::zero(6), &p).is_err());
    }
}
