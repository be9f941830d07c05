//! The Green ring r(𝒲).
//!
//! Elements live in the ℤ-basis of indecomposable classes ([`RingElem`]).
//! Generator polynomials ([`GenPoly`]) are written in characters λ,
//! y = [V₂(ε)], z = [V_{s+1}(ε)] and x_[α] = [V₁(ε, α^{s′})], in the
//! character-first normal form of the skew group ring; they are a view that is
//! always checked by expanding back into classes.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::envelope::{compare_pair, CheckOptions};
use crate::error::{Error, Result};
use crate::exactfield::CycNum;
use crate::hopfdata::{Case, Character, HopfParams};
use crate::linalg::det_int;
use crate::tensorrules::tensor_labels;
use crate::weightmods::{Decomposition, Label, NonNilLabel};

fn ck_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or_else(|| Error::Overflow("green ring coefficient".into()))
}

fn ck_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or_else(|| Error::Overflow("green ring coefficient".into()))
}

/// C(n, k), zero outside 0 ≤ k ≤ n.
pub fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// Exact quotient, or None when `den` does not divide `num`.
fn exact_div(num: i64, den: i64) -> Option<i64> {
    if den != 0 && num % den == 0 {
        Some(num / den)
    } else {
        None
    }
}

fn fmt_terms<I: Iterator<Item = (String, i64)>>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result {
    let mut first = true;
    for (s, k) in terms {
        let mag = k.unsigned_abs();
        if first {
            if k < 0 {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if k < 0 { '-' } else { '+' })?;
        }
        if mag != 1 {
            write!(f, "{mag}*")?;
        }
        write!(f, "{s}")?;
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Ring elements

/// Integer combination of indecomposable classes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingElem {
    terms: BTreeMap<Label, i64>,
}

impl RingElem {
    pub fn zero() -> RingElem {
        RingElem::default()
    }

    /// [V₁(ε)].
    pub fn one(p: &HopfParams) -> RingElem {
        RingElem::from_label(Label::nil(1, p.eps()))
    }

    pub fn from_label(l: Label) -> RingElem {
        let mut terms = BTreeMap::new();
        terms.insert(l, 1);
        RingElem { terms }
    }

    pub fn from_char(lambda: &Character) -> RingElem {
        RingElem::from_label(Label::nil(1, lambda.clone()))
    }

    pub fn from_decomposition(d: &Decomposition) -> Result<RingElem> {
        let mut e = RingElem::zero();
        for (l, k) in d.iter() {
            let k = i64::try_from(k).map_err(|_| Error::Overflow("multiplicity".into()))?;
            e.add_term(l.clone(), k)?;
        }
        Ok(e)
    }

    pub fn add_term(&mut self, l: Label, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let c = self.terms.get(&l).copied().unwrap_or(0);
        let c = ck_add(c, k)?;
        if c == 0 {
            self.terms.remove(&l);
        } else {
            self.terms.insert(l, c);
        }
        Ok(())
    }

    pub fn add(&self, o: &RingElem) -> Result<RingElem> {
        let mut e = self.clone();
        for (l, &k) in &o.terms {
            e.add_term(l.clone(), k)?;
        }
        Ok(e)
    }

    pub fn sub(&self, o: &RingElem) -> Result<RingElem> {
        self.add(&o.scale(-1)?)
    }

    pub fn scale(&self, k: i64) -> Result<RingElem> {
        let mut e = RingElem::zero();
        for (l, &c) in &self.terms {
            e.add_term(l.clone(), ck_mul(c, k)?)?;
        }
        Ok(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, l: &Label) -> i64 {
        self.terms.get(l).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, i64)> {
        self.terms.iter().map(|(l, &k)| (l, k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is nonnegative, i.e. the element is the
    /// class of an actual module.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&k| k > 0)
    }

    pub fn max_dim(&self, p: &HopfParams) -> usize {
        self.terms.keys().map(|l| l.dim(p)).max().unwrap_or(0)
    }

    pub fn to_decomposition(&self) -> Option<Decomposition> {
        if !self.is_effective() {
            return None;
        }
        Some(self.terms.iter().map(|(l, &k)| (l.clone(), k as u64)).collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(l, &k)| {
                    let mut v = l.to_json();
                    v["coeff"] = k.into();
                    v
                })
                .collect(),
        )
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(l, &k)| (l.to_string(), k)))
    }
}

// ---------------------------------------------------------------------------
// Generators and polynomials

/// x_[α]: indexed by β = α^{s′}, carrying the root α.
#[derive(Clone, Debug)]
pub struct XGen {
    pub root: CycNum,
    pub beta: CycNum,
}

impl XGen {
    pub fn new(root: CycNum, p: &HopfParams) -> Result<XGen> {
        let sp = p
            .sprime
            .ok_or_else(|| Error::UnsupportedCase("x generators need |chi| < infinity".into()))?;
        if root.is_zero() {
            return Err(Error::InvalidArgument("x[0] is not a generator".into()));
        }
        let beta = root.pow_u(sp);
        Ok(XGen { root, beta })
    }

    /// x_[α] ↦ x_[λ(a)^s α], the action of λ moving x past it.
    fn twisted(&self, lambda: &Character, p: &HopfParams) -> XGen {
        let s = p.s_finite().expect("x generators only exist when s is finite");
        let c = p.at_a(lambda).pow_u(s);
        if c.is_one() {
            return self.clone();
        }
        let root = &c * &self.root;
        let beta = root.pow_u(p.sprime.expect("finite sbar"));
        XGen { root, beta }
    }

    pub fn label(&self, p: &HopfParams) -> Result<Label> {
        Ok(Label::NonNil(NonNilLabel::new(1, &p.eps(), self.root.clone(), p)?))
    }
}

impl PartialEq for XGen {
    fn eq(&self, o: &Self) -> bool {
        self.beta == o.beta
    }
}

impl Eq for XGen {}

impl Hash for XGen {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.beta.hash(h)
    }
}

impl Ord for XGen {
    fn cmp(&self, o: &Self) -> Ordering {
        self.beta.cmp(&o.beta)
    }
}

impl PartialOrd for XGen {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for XGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{}]", self.root)
    }
}

/// One factor of a word in the generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Char(Character),
    Y,
    Z,
    X(XGen),
    /// An arbitrary class, for relations that mention one literally.
    Class(Label),
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Char(l) => write!(f, "{l}"),
            Factor::Y => write!(f, "y"),
            Factor::Z => write!(f, "z"),
            Factor::X(x) => write!(f, "{x}"),
            Factor::Class(l) => write!(f, "[{l}]"),
        }
    }
}

fn fmt_word(fs: &[Factor]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < fs.len() {
        let mut j = i + 1;
        while j < fs.len() && fs[j] == fs[i] && matches!(fs[i], Factor::Y | Factor::Z) {
            j += 1;
        }
        if j - i > 1 {
            parts.push(format!("{}^{}", fs[i], j - i));
        } else {
            parts.push(fs[i].to_string());
        }
        i = j;
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// λ · y^y · z^z · x_[α₁] ⋯ x_[α_k].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub lambda: Character,
    pub y: u32,
    pub z: u32,
    pub xs: Vec<XGen>,
}

impl Monomial {
    pub fn char(lambda: &Character) -> Monomial {
        Monomial { lambda: lambda.clone(), y: 0, z: 0, xs: Vec::new() }
    }

    pub fn factors(&self) -> Vec<Factor> {
        let mut out = vec![Factor::Char(self.lambda.clone())];
        out.extend(std::iter::repeat_n(Factor::Y, self.y as usize));
        out.extend(std::iter::repeat_n(Factor::Z, self.z as usize));
        out.extend(self.xs.iter().cloned().map(Factor::X));
        out
    }

    /// Product in the skew group ring: (λr)(μt) = (λμ)(r^μ t).
    pub fn mul(&self, o: &Monomial, p: &HopfParams) -> Monomial {
        let mut xs: Vec<XGen> = self.xs.iter().map(|x| x.twisted(&o.lambda, p)).collect();
        xs.extend(o.xs.iter().cloned());
        Monomial { lambda: self.lambda.mul(&o.lambda), y: self.y + o.y, z: self.z + o.z, xs }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "char": self.lambda.to_string(),
            "y": self.y,
            "z": self.z,
            "x": self.xs.iter().map(|x| x.root.to_json()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let bare = self.y == 0 && self.z == 0 && self.xs.is_empty();
        if !self.lambda.is_trivial() || bare {
            parts.push(self.lambda.to_string());
        }
        match self.y {
            0 => {}
            1 => parts.push("y".into()),
            k => parts.push(format!("y^{k}")),
        }
        match self.z {
            0 => {}
            1 => parts.push("z".into()),
            k => parts.push(format!("z^{k}")),
        }
        parts.extend(self.xs.iter().map(|x| x.to_string()));
        write!(f, "{}", parts.join("*"))
    }
}

/// Integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GenPoly {
    terms: BTreeMap<Monomial, i64>,
}

impl GenPoly {
    pub fn zero() -> GenPoly {
        GenPoly::default()
    }

    pub fn monomial(m: Monomial, k: i64) -> GenPoly {
        let mut g = GenPoly::zero();
        if k != 0 {
            g.terms.insert(m, k);
        }
        g
    }

    pub fn one(p: &HopfParams) -> GenPoly {
        GenPoly::char(&p.eps())
    }

    pub fn char(lambda: &Character) -> GenPoly {
        GenPoly::monomial(Monomial::char(lambda), 1)
    }

    pub fn y(p: &HopfParams) -> GenPoly {
        GenPoly::monomial(Monomial { y: 1, ..Monomial::char(&p.eps()) }, 1)
    }

    pub fn z(p: &HopfParams) -> GenPoly {
        GenPoly::monomial(Monomial { z: 1, ..Monomial::char(&p.eps()) }, 1)
    }

    pub fn x(root: CycNum, p: &HopfParams) -> Result<GenPoly> {
        let x = XGen::new(root, p)?;
        Ok(GenPoly::monomial(Monomial { xs: vec![x], ..Monomial::char(&p.eps()) }, 1))
    }

    pub fn add_term(&mut self, m: Monomial, k: i64) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let c = ck_add(self.terms.get(&m).copied().unwrap_or(0), k)?;
        if c == 0 {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, c);
        }
        Ok(())
    }

    pub fn add(&self, o: &GenPoly) -> Result<GenPoly> {
        let mut g = self.clone();
        for (m, &k) in &o.terms {
            g.add_term(m.clone(), k)?;
        }
        Ok(g)
    }

    pub fn sub(&self, o: &GenPoly) -> Result<GenPoly> {
        self.add(&o.scale(-1)?)
    }

    pub fn scale(&self, k: i64) -> Result<GenPoly> {
        let mut g = GenPoly::zero();
        for (m, &c) in &self.terms {
            g.add_term(m.clone(), ck_mul(c, k)?)?;
        }
        Ok(g)
    }

    pub fn mul(&self, o: &GenPoly, p: &HopfParams) -> Result<GenPoly> {
        let mut g = GenPoly::zero();
        for (a, &ka) in &self.terms {
            for (b, &kb) in &o.terms {
                g.add_term(a.mul(b, p), ck_mul(ka, kb)?)?;
            }
        }
        Ok(g)
    }

    pub fn pow(&self, e: u32, p: &HopfParams) -> Result<GenPoly> {
        let mut acc = GenPoly::one(p);
        for _ in 0..e {
            acc = acc.mul(self, p)?;
        }
        Ok(acc)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.terms.iter().map(|(m, &k)| (m, k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Rejects generators that do not exist in the parameters' case.
    pub fn check_alphabet(&self, p: &HopfParams) -> Result<()> {
        for m in self.terms.keys() {
            if m.z > 0 && p.s_finite().is_none() {
                return Err(Error::UnsupportedCase("z needs q of finite order".into()));
            }
            if !m.xs.is_empty() && p.sbar_finite().is_none() {
                return Err(Error::UnsupportedCase("x generators need |chi| < infinity".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(m, &k)| {
                    let mut v = m.to_json();
                    v["coeff"] = k.into();
                    v
                })
                .collect(),
        )
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms.iter().map(|(m, &k)| (m.to_string(), k)))
    }
}

/// Integer combination of words, multiplied out strictly left to right.
/// Used for relation sides, which need not be in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expr {
    pub words: Vec<(i64, Vec<Factor>)>,
}

impl Expr {
    pub fn word(fs: Vec<Factor>) -> Expr {
        Expr { words: vec![(1, fs)] }
    }

    pub fn poly(g: &GenPoly) -> Expr {
        Expr { words: g.iter().map(|(m, k)| (k, m.factors())).collect() }
    }

    pub fn class(e: &RingElem) -> Expr {
        Expr { words: e.iter().map(|(l, k)| (k, vec![Factor::Class(l.clone())])).collect() }
    }

    pub fn label(l: Label) -> Expr {
        Expr::word(vec![Factor::Class(l)])
    }

    pub fn plus(mut self, o: Expr) -> Expr {
        self.words.extend(o.words);
        self
    }

    pub fn scaled(mut self, k: i64) -> Expr {
        for w in &mut self.words {
            w.0 *= k;
        }
        self.words.retain(|w| w.0 != 0);
        self
    }

    pub fn times(&self, o: &Expr) -> Expr {
        let mut words = Vec::new();
        for (ka, a) in &self.words {
            for (kb, b) in &o.words {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                words.push((ka * kb, w));
            }
        }
        Expr { words }
    }

    pub fn power(&self, e: u32) -> Expr {
        let mut acc = Expr::word(Vec::new());
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.words.iter().map(|(k, w)| (fmt_word(w), *k)))
    }
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, Serialize)]
pub struct RelationResult {
    pub relation_id: String,
    pub status: String,
    pub lhs: String,
    pub rhs: String,
    pub diff: Vec<(String, i64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RelationResult {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    fn outcome(id: &str, lhs: String, rhs: String, diff: Result<RingElem>) -> RelationResult {
        match diff {
            Ok(d) => RelationResult {
                relation_id: id.into(),
                status: if d.is_zero() { "pass" } else { "fail" }.into(),
                lhs,
                rhs,
                diff: d.iter().map(|(l, k)| (l.to_string(), k)).collect(),
                error: None,
            },
            Err(e) => RelationResult {
                relation_id: id.into(),
                status: "error".into(),
                lhs,
                rhs,
                diff: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub case: String,
    pub results: Vec<RelationResult>,
    pub scope: String,
}

impl RelationReport {
    pub fn failures(&self) -> Vec<&RelationResult> {
        self.results.iter().filter(|r| !r.passed()).collect()
    }

    pub fn ok(&self) -> bool {
        self.results.iter().all(|r| r.passed())
    }

    /// Number of results per relation id.
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.results {
            *m.entry(r.relation_id.clone()).or_insert(0) += 1;
        }
        m
    }
}

const RELATION_SCOPE: &str = "identities are checked by exact expansion on finite samples of characters and roots; \
together with the truncated change-of-basis checks this supports, but does not prove, the ring presentations";

/// Characters and x-roots the sampled relations range over.
#[derive(Clone, Debug)]
pub struct RelationSample {
    pub chars: Vec<Character>,
    pub roots: Vec<CycNum>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisBlock {
    pub dim: usize,
    pub rows: usize,
    pub cols: usize,
    pub det: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub case: String,
    pub trunc: usize,
    pub monomials: usize,
    pub labels: usize,
    pub blocks: Vec<BasisBlock>,
    /// Entries strictly below the leading dimension of their row.
    pub lower_entries: usize,
    pub failures: Vec<String>,
    pub unimodular: bool,
    pub scope: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub lambda: String,
    pub root: String,
    /// λ·x_[α] and x_[α]·λ by the closed-form rules.
    pub left_rules: String,
    pub right_rules: String,
    /// The same two products by the matrix oracle.
    pub left_oracle: String,
    pub right_oracle: String,
    pub differs: bool,
    pub engines_agree: bool,
}

// ---------------------------------------------------------------------------
// The ring

/// Multiplication and expansion with memoized label products.
pub struct GreenRing {
    p: HopfParams,
    products: RefCell<HashMap<(Label, Label), Vec<(Label, i64)>>>,
    prefixes: RefCell<HashMap<Vec<Factor>, RingElem>>,
}

impl GreenRing {
    pub fn new(p: &HopfParams) -> GreenRing {
        GreenRing { p: p.clone(), products: RefCell::default(), prefixes: RefCell::default() }
    }

    pub fn params(&self) -> &HopfParams {
        &self.p
    }

    fn product(&self, a: &Label, b: &Label) -> Result<Vec<(Label, i64)>> {
        let key = (a.clone(), b.clone());
        if let Some(v) = self.products.borrow().get(&key) {
            return Ok(v.clone());
        }
        let d = tensor_labels(a, b, &self.p)?.decomposition;
        let v: Vec<(Label, i64)> = d.iter().map(|(l, k)| (l.clone(), k as i64)).collect();
        self.products.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    pub fn mul(&self, u: &RingElem, v: &RingElem) -> Result<RingElem> {
        let mut out = RingElem::zero();
        for (a, ka) in u.iter() {
            for (b, kb) in v.iter() {
                let k = ck_mul(ka, kb)?;
                for (l, m) in self.product(a, b)? {
                    out.add_term(l, ck_mul(k, m)?)?;
                }
            }
        }
        Ok(out)
    }

    /// uv − vu.
    pub fn commutator(&self, u: &RingElem, v: &RingElem) -> Result<RingElem> {
        self.mul(u, v)?.sub(&self.mul(v, u)?)
    }

    fn factor_class(&self, f: &Factor) -> Result<Label> {
        let p = &self.p;
        match f {
            Factor::Char(l) => Ok(Label::nil(1, l.clone())),
            Factor::Y => Ok(Label::nil(2, p.eps())),
            Factor::Z => {
                let s = p.s_finite().ok_or_else(|| Error::UnsupportedCase("z needs q of finite order".into()))?;
                Ok(Label::nil(s as usize + 1, p.eps()))
            }
            Factor::X(x) => x.label(p),
            Factor::Class(l) => Ok(l.clone()),
        }
    }

    pub fn expand_word(&self, fs: &[Factor]) -> Result<RingElem> {
        let mut start = 0;
        let mut acc = RingElem::one(&self.p);
        {
            let cache = self.prefixes.borrow();
            for k in (1..=fs.len()).rev() {
                if let Some(e) = cache.get(&fs[..k]) {
                    start = k;
                    acc = e.clone();
                    break;
                }
            }
        }
        for k in start..fs.len() {
            let g = RingElem::from_label(self.factor_class(&fs[k])?);
            acc = self.mul(&acc, &g)?;
            self.prefixes.borrow_mut().insert(fs[..=k].to_vec(), acc.clone());
        }
        Ok(acc)
    }

    pub fn expand_expr(&self, e: &Expr) -> Result<RingElem> {
        let mut out = RingElem::zero();
        for (k, w) in &e.words {
            out = out.add(&self.expand_word(w)?.scale(*k)?)?;
        }
        Ok(out)
    }

    pub fn expand(&self, g: &GenPoly) -> Result<RingElem> {
        g.check_alphabet(&self.p)?;
        self.expand_expr(&Expr::poly(g))
    }

    fn chi_pow(&self, k: i64) -> Character {
        self.p.chi.pow(k)
    }

    /// Σ_i (-1)^i C(m-1-i, i) χ^i y^{m-1-2i}; zero for m = 0.
    pub fn chebyshev(&self, m: usize) -> Result<GenPoly> {
        let m = m as i64;
        let mut g = GenPoly::zero();
        let mut i = 0;
        while 2 * i < m {
            let mon = Monomial { y: (m - 1 - 2 * i) as u32, ..Monomial::char(&self.chi_pow(i)) };
            let sign = if i % 2 == 0 { 1 } else { -1 };
            g.add_term(mon, sign * binom(m - 1 - i, i))?;
            i += 1;
        }
        Ok(g)
    }

    /// Expressions for [V_k(ε)], k = 0..=m (index 0 is zero).
    fn nil_eps_polys(&self, m: usize) -> Result<Vec<GenPoly>> {
        let p = &self.p;
        let mut out = vec![GenPoly::zero()];
        let s = match p.s_finite() {
            None => {
                for k in 1..=m {
                    out.push(self.chebyshev(k)?);
                }
                return Ok(out);
            }
            Some(s) => s as usize,
        };
        let z = GenPoly::z(p);
        let chi = GenPoly::char(&p.chi);
        for k in 1..=m {
            let g = if k <= s {
                self.chebyshev(k)?
            } else if k == s + 1 {
                z.clone()
            } else if k <= 2 * s {
                // [V_{s+j}] = cheb(j)·z − χ·cheb(j−1)·[V_s]
                let j = k - s;
                let a = self.chebyshev(j)?.mul(&z, p)?;
                let b = chi.mul(&self.chebyshev(j - 1)?, p)?.mul(&out[s], p)?;
                a.sub(&b)?
            } else if k % s == 0 {
                self.multiple_of_s(k / s, &out[2 * s], &out[s])?
            } else {
                // z·[V_{t−s}] with t − s = rs + l
                let (r, l) = ((k - s) / s, (k - s) % s);
                let mut g = z.mul(&out[k - s], p)?;
                for i in 1..s {
                    let idx = if i < l {
                        (r + 1) * s
                    } else if i == l {
                        k - 2 * l
                    } else {
                        r * s
                    };
                    g = g.sub(&GenPoly::char(&self.chi_pow(i as i64)).mul(&out[idx], p)?)?;
                }
                g.sub(&GenPoly::char(&self.chi_pow(s as i64)).mul(&out[k - 2 * s], p)?)?
            };
            out.push(g);
        }
        Ok(out)
    }

    /// [V_{ms}(ε)] for m ≥ 3 in terms of [V_{2s}(ε)] and [V_s(ε)], with
    /// w = z − Σ_{j=1}^{s−1} χ^j.
    fn multiple_of_s(&self, m: usize, v2s: &GenPoly, vs: &GenPoly) -> Result<GenPoly> {
        let p = &self.p;
        let s = p.s_finite().expect("finite s") as i64;
        let w = self.w_poly()?;
        let m = m as i64;
        let mut g = GenPoly::zero();
        let mut i = 0;
        while 2 * i <= m - 2 {
            let c = if i % 2 == 0 { 1 } else { -1 } * binom(m - 2 - i, i);
            let t = GenPoly::char(&self.chi_pow(s * i)).mul(&w.pow((m - 2 - 2 * i) as u32, p)?, p)?.mul(v2s, p)?;
            g = g.add(&t.scale(c)?)?;
            i += 1;
        }
        let mut i = 0;
        while 2 * i <= m - 3 {
            let c = if i % 2 == 0 { 1 } else { -1 } * binom(m - 3 - i, i);
            let t = GenPoly::char(&self.chi_pow(s * (i + 1))).mul(&w.pow((m - 3 - 2 * i) as u32, p)?, p)?.mul(vs, p)?;
            g = g.sub(&t.scale(c)?)?;
            i += 1;
        }
        Ok(g)
    }

    fn w_poly(&self) -> Result<GenPoly> {
        let p = &self.p;
        let s = p.s_finite().expect("finite s") as i64;
        let mut w = GenPoly::z(p);
        for j in 1..s {
            w = w.sub(&GenPoly::char(&self.chi_pow(j)))?;
        }
        Ok(w)
    }

    fn verified(&self, g: GenPoly, l: Label) -> Result<GenPoly> {
        let e = self.expand(&g)?;
        let want = RingElem::from_label(l.clone());
        if e != want {
            return Err(Error::Internal(format!("{g} expands to {e}, not [{l}]")));
        }
        Ok(g)
    }

    /// Generator polynomial for [V_m(λ)], checked by expansion.
    pub fn express_nil(&self, m: usize, lambda: &Character) -> Result<GenPoly> {
        if m == 0 {
            return Err(Error::InvalidArgument("module length must be positive".into()));
        }
        let polys = self.nil_eps_polys(m)?;
        let g = GenPoly::char(lambda).mul(&polys[m], &self.p)?;
        self.verified(g, Label::nil(m, lambda.clone()))
    }

    /// Generator polynomial for [V_t(σ, η^{s′})], checked by expansion.
    pub fn express_nonnil(&self, t: usize, sigma: &Character, eta: &CycNum) -> Result<GenPoly> {
        let p = &self.p;
        let label = NonNilLabel::new(t, sigma, eta.clone(), p)?;
        let s = p.s_finite().expect("finite s") as i64;
        let step = GenPoly::z(p).sub(&GenPoly::one(p).scale(s - 1)?)?;
        let first = GenPoly::char(&label.sigma).mul(&GenPoly::x(eta.clone(), p)?, p)?;
        let (mut prev, mut cur) = (GenPoly::zero(), first);
        for _ in 1..t {
            let next = step.mul(&cur, p)?.sub(&prev)?;
            prev = cur;
            cur = next;
        }
        self.verified(cur, Label::NonNil(label))
    }

    pub fn express(&self, l: &Label) -> Result<GenPoly> {
        match l {
            Label::Nil(n) => self.express_nil(n.t, &n.lambda),
            Label::NonNil(n) => self.express_nonnil(n.t, &n.sigma, &n.eta),
        }
    }

    /// lhs − rhs after expansion.
    pub fn relation_diff(&self, lhs: &Expr, rhs: &Expr) -> Result<RingElem> {
        self.expand_expr(lhs)?.sub(&self.expand_expr(rhs)?)
    }

    pub fn check_relation(&self, id: &str, lhs: &Expr, rhs: &Expr) -> RelationResult {
        RelationResult::outcome(id, lhs.to_string(), rhs.to_string(), self.relation_diff(lhs, rhs))
    }

    pub fn relation_suite(&self, sample: &RelationSample) -> RelationReport {
        let p = &self.p;
        let mut out = Vec::new();
        let eps = p.eps();
        let ys = |m: usize| Expr::word(vec![Factor::Y; m]);
        let q_order = p.s_finite().map(|s| s as usize).unwrap_or(usize::MAX);

        // V₂(ε)^{⊗m} for m < |q|
        for m in 1..=8usize.min(q_order.saturating_sub(1)) {
            let mi = m as i64;
            let mut rhs = RingElem::zero();
            let mut integral = true;
            for i in 0..=mi / 2 {
                match exact_div((mi - 2 * i + 1) * binom(mi, i), mi - i + 1) {
                    Some(c) => {
                        let _ = rhs.add_term(Label::nil((mi + 1 - 2 * i) as usize, self.chi_pow(i)), c);
                    }
                    None => integral = false,
                }
            }
            let mut r = self.check_relation("y_power", &ys(m), &Expr::class(&rhs));
            if !integral {
                r.status = "fail".into();
                r.error = Some("a coefficient is not an integer".into());
            }
            out.push(r);
        }

        // closed form of [V_m(λ)] below s (all m when s is infinite)
        let closed_max = 8usize.min(q_order);
        for lam in sample.chars.iter().take(2) {
            for m in 1..=closed_max {
                let rhs = self.chebyshev(m).and_then(|c| GenPoly::char(lam).mul(&c, p));
                out.push(match rhs {
                    Ok(rhs) => self.check_relation("nil_class_closed_form", &Expr::label(Label::nil(m, lam.clone())), &Expr::poly(&rhs)),
                    Err(e) => RelationResult::outcome("nil_class_closed_form", format!("V{m}"), String::new(), Err(e)),
                });
            }
        }

        if let Some(s) = p.s_finite() {
            let s = s as usize;
            let si = s as i64;
            let vs = Expr::label(Label::nil(s, eps.clone()));
            let v2s = Expr::label(Label::nil(2 * s, eps.clone()));
            let chr = |k: i64| Expr::word(vec![Factor::Char(self.chi_pow(k))]);
            let cheb_expr = |m: i64| {
                let mut e = Expr::default();
                let mut i = 0;
                while 2 * i < m {
                    let c = if i % 2 == 0 { 1 } else { -1 } * binom(m - 1 - i, i);
                    e = e.plus(chr(i).times(&ys((m - 1 - 2 * i) as usize)).scaled(c));
                    i += 1;
                }
                e
            };

            // [V_{s+m}(ε)], 2 ≤ m ≤ s
            for m in 2..=s.min(4) {
                let mi = m as i64;
                let rhs = cheb_expr(mi).times(&Expr::word(vec![Factor::Z])).plus(
                    chr(1).times(&cheb_expr(mi - 1)).times(&vs).scaled(-1),
                );
                out.push(self.check_relation("nil_class_above_s", &Expr::label(Label::nil(s + m, eps.clone())), &rhs));
            }

            // [V_{ms}(ε)], m ≥ 3
            let mut w = Expr::word(vec![Factor::Z]);
            for j in 1..si {
                w = w.plus(chr(j).scaled(-1));
            }
            for m in 3..=4i64 {
                let mut rhs = Expr::default();
                let mut i = 0;
                while 2 * i <= m - 2 {
                    let c = if i % 2 == 0 { 1 } else { -1 } * binom(m - 2 - i, i);
                    rhs = rhs.plus(chr(si * i).times(&w.power((m - 2 - 2 * i) as u32)).times(&v2s).scaled(c));
                    i += 1;
                }
                let mut i = 0;
                while 2 * i <= m - 3 {
                    let c = if i % 2 == 0 { 1 } else { -1 } * binom(m - 3 - i, i);
                    rhs = rhs.plus(chr(si * (i + 1)).times(&w.power((m - 3 - 2 * i) as u32)).times(&vs).scaled(-c));
                    i += 1;
                }
                out.push(self.check_relation(
                    "nil_class_multiple_of_s",
                    &Expr::label(Label::nil(m as usize * s, eps.clone())),
                    &rhs,
                ));
            }

            // y^s
            let mut rhs = Expr::word(vec![Factor::Char(eps.clone())]).plus(chr(1)).times(&cheb_expr(si));
            let mut integral = true;
            for i in 1..=(si - 1) / 2 {
                let Some(c0) = exact_div((si - 2 * i) * binom(si - 1, i), si - i) else {
                    integral = false;
                    continue;
                };
                let mut j = 0;
                while 2 * j < si - 2 * i {
                    let c = if j % 2 == 0 { 1 } else { -1 } * c0 * binom(si - 2 * i - 1 - j, j);
                    rhs = rhs.plus(chr(i + j).times(&ys((si - 2 * i - 2 * j) as usize)).scaled(c));
                    j += 1;
                }
            }
            let mut r = self.check_relation("y_power_s", &ys(s), &rhs);
            if !integral {
                r.status = "fail".into();
                r.error = Some("a coefficient is not an integer".into());
            }
            out.push(r);

            // z^m = [V_{ms+1}(ε)] + (nilpotent classes of dimension ≤ ms)
            for m in 0..=4usize {
                out.push(self.z_power_structure(m));
            }
        }

        if p.case == Case::III {
            self.x_relations(sample, &mut out);
        } else {
            // commutativity on small classes
            let mut labels = Vec::new();
            for lam in sample.chars.iter().take(2) {
                for t in 1..=3 {
                    labels.push(Label::nil(t, lam.clone()));
                }
            }
            for a in &labels {
                for b in &labels {
                    let (ea, eb) = (RingElem::from_label(a.clone()), RingElem::from_label(b.clone()));
                    out.push(RelationResult::outcome(
                        "commutative",
                        format!("[{a}]*[{b}]"),
                        format!("[{b}]*[{a}]"),
                        self.commutator(&ea, &eb),
                    ));
                }
            }
        }

        // expressions round-trip
        let max_m = match p.s_finite() {
            Some(s) => 2 * s as usize + 3,
            None => 10,
        };
        for lam in sample.chars.iter().take(2) {
            for m in 1..=max_m {
                let r = self.express_nil(m, lam).map(|g| (g.to_string(), RingElem::zero()));
                out.push(roundtrip_result(format!("V{m}({lam})"), r));
            }
        }
        if p.case == Case::III {
            for sigma in sample.chars.iter().take(2) {
                for eta in sample.roots.iter().take(2) {
                    for t in 1..=3 {
                        let r = self.express_nonnil(t, sigma, eta).map(|g| (g.to_string(), RingElem::zero()));
                        out.push(roundtrip_result(format!("W{t}({sigma}; eta={eta})"), r));
                    }
                }
            }
        }

        RelationReport { case: p.case.to_string(), results: out, scope: RELATION_SCOPE.into() }
    }

    fn z_power_structure(&self, m: usize) -> RelationResult {
        let p = &self.p;
        let s = p.s_finite().expect("finite s") as usize;
        let lead = Label::nil(m * s + 1, p.eps());
        let lhs = Expr::word(vec![Factor::Z; m]);
        let rhs_text = format!("[{lead}] + E with E nilpotent of dimension <= {}", m * s);
        match self.expand_expr(&lhs) {
            Ok(e) => {
                let mut bad = RingElem::zero();
                if e.coeff(&lead) != 1 {
                    let _ = bad.add_term(lead.clone(), e.coeff(&lead) - 1);
                }
                for (l, k) in e.iter() {
                    if *l != lead && (!l.is_nil() || l.t() > m * s || k < 0) {
                        let _ = bad.add_term(l.clone(), k);
                    }
                }
                RelationResult::outcome("z_power_structure", fmt_word(&vec![Factor::Z; m]), rhs_text, Ok(bad))
            }
            Err(e) => RelationResult::outcome("z_power_structure", fmt_word(&vec![Factor::Z; m]), rhs_text, Err(e)),
        }
    }

    fn x_relations(&self, sample: &RelationSample, out: &mut Vec<RelationResult>) {
        let p = &self.p;
        let s = p.s_finite().expect("finite s") as i64;
        let sb = p.sbar_finite().expect("finite sbar") as i64;
        let sp = p.sprime.expect("finite sbar");
        let xi = p.xi.clone().expect("finite sbar");
        let eps = p.eps();
        let x = |a: &CycNum| XGen::new(a.clone(), p).map(Factor::X);
        let chi_f = Factor::Char(p.chi.clone());
        let y_f = Factor::Y;

        // (x_[α]x_[−α]) right side
        let opposite_rhs = |a: &CycNum| -> Result<Expr> {
            let mut e = Expr::default();
            for i in 1..sp {
                let r = &(&CycNum::one(p.n) - &xi.pow_u(i)) * a;
                e = e.plus(Expr::word(vec![x(&r)?]).scaled(s));
            }
            for i in 0..sb {
                let mut j = 0;
                while 2 * j < s {
                    let c = if j % 2 == 0 { 1 } else { -1 } * binom(s - 1 - j, j);
                    let mut w = vec![Factor::Char(self.chi_pow(i))];
                    w.extend(std::iter::repeat_n(Factor::Y, (s - 1 - 2 * j) as usize));
                    e = e.plus(Expr::word(w).scaled(c));
                    j += 1;
                }
            }
            Ok(e)
        };
        let generic_rhs = |a: &CycNum, b: &CycNum| -> Result<Expr> {
            let mut e = Expr::default();
            for i in 0..sp {
                let r = a + &(b * &xi.pow_u(i));
                e = e.plus(Expr::word(vec![x(&r)?]).scaled(s));
            }
            Ok(e)
        };

        let mut push = |id: &str, lhs: Result<Expr>, rhs: Result<Expr>| {
            let r = match (lhs, rhs) {
                (Ok(l), Ok(r)) => self.check_relation(id, &l, &r),
                (Err(e), _) | (_, Err(e)) => RelationResult::outcome(id, String::new(), String::new(), Err(e)),
            };
            out.push(r);
        };

        let mut betas: Vec<CycNum> = Vec::new();
        for a in &sample.roots {
            betas.push(a.clone());
            betas.push(-a);
        }
        for lam in &sample.chars {
            for a in &sample.roots {
                let xa = x(a);
                push("x_chi_absorb", xa.clone().map(|f| Expr::word(vec![chi_f.clone(), f])), xa.clone().map(|f| Expr::word(vec![f])));
                push("x_chi_absorb", xa.clone().map(|f| Expr::word(vec![f, chi_f.clone()])), xa.clone().map(|f| Expr::word(vec![f])));
                let twisted = &p.at_a(lam).pow_u(s as u64) * a;
                push(
                    "x_char_skew",
                    xa.clone().map(|f| Expr::word(vec![f, Factor::Char(lam.clone())])),
                    x(&twisted).map(|f| Expr::word(vec![Factor::Char(lam.clone()), f])),
                );
                push("x_y_scalar", xa.clone().map(|f| Expr::word(vec![y_f.clone(), f])), xa.clone().map(|f| Expr::word(vec![f]).scaled(2)));
                push("x_y_scalar", xa.clone().map(|f| Expr::word(vec![f, y_f.clone()])), xa.clone().map(|f| Expr::word(vec![f]).scaled(2)));
                push(
                    "x_z_commute",
                    xa.clone().map(|f| Expr::word(vec![Factor::Z, f])),
                    xa.clone().map(|f| Expr::word(vec![f, Factor::Z])),
                );
                for b in &betas {
                    let xb = x(b);
                    let opposite = b.pow_u(sp) == (-a).pow_u(sp);
                    let rhs = if opposite { opposite_rhs(a) } else { generic_rhs(a, b) };
                    let id = if opposite { "x_x_opposite" } else { "x_x_generic" };
                    let ab = xa.clone().and_then(|fa| xb.clone().map(|fb| Expr::word(vec![fa, fb])));
                    let ba = xa.clone().and_then(|fa| xb.clone().map(|fb| Expr::word(vec![fb, fa])));
                    push(id, ab, rhs.clone());
                    push(id, ba, rhs);
                }
                // the class of −α is the class of −αξ^j
                if sp > 1 {
                    let b = -(a * &xi);
                    push(
                        "x_x_opposite",
                        xa.clone().and_then(|fa| x(&b).map(|fb| Expr::word(vec![fa, fb]))),
                        opposite_rhs(a),
                    );
                }
            }
        }
        let _ = eps;

        // a character that does not commute with x
        if let (Some(lam), Some(a)) = (
            sample.chars.iter().find(|l| !p.at_a(l).pow_u(sb as u64).is_one()),
            sample.roots.first(),
        ) {
            let r = x(a).and_then(|f| {
                let u = self.expand_word(&[Factor::Char(lam.clone()), f.clone()])?;
                let v = self.expand_word(&[f, Factor::Char(lam.clone())])?;
                Ok((u, v))
            });
            out.push(match r {
                Ok((u, v)) => RelationResult {
                    relation_id: "noncommutative_witness".into(),
                    status: if u != v { "pass" } else { "fail" }.into(),
                    lhs: format!("{lam}*x[{a}] = {u}"),
                    rhs: format!("x[{a}]*{lam} = {v}"),
                    diff: Vec::new(),
                    error: None,
                },
                Err(e) => RelationResult::outcome("noncommutative_witness", String::new(), String::new(), Err(e)),
            });
        }
    }

    /// Generator monomials and indecomposable labels of dimension ≤ `trunc`
    /// over the characters generated by `sample` under χ.
    fn basis_sets(&self, trunc: usize, sample: &RelationSample) -> (Vec<Monomial>, BTreeSet<Label>) {
        let p = &self.p;
        let mut chars = BTreeSet::new();
        let shifts = match p.sbar_finite() {
            Some(sb) => sb as i64,
            None => 3,
        };
        for c in &sample.chars {
            for i in 0..shifts {
                chars.insert(p.chi_shift(c, i));
            }
        }
        let mut monos = Vec::new();
        let mut labels = BTreeSet::new();
        for lam in &chars {
            for d in 1..=trunc {
                labels.insert(Label::nil(d, lam.clone()));
            }
            match p.s_finite() {
                None => {
                    for t in 0..trunc {
                        monos.push(Monomial { y: t as u32, ..Monomial::char(lam) });
                    }
                }
                Some(s) => {
                    let s = s as usize;
                    for t in 0..s {
                        let mut m = 0;
                        while m * s + t < trunc {
                            monos.push(Monomial { y: t as u32, z: m as u32, ..Monomial::char(lam) });
                            m += 1;
                        }
                    }
                }
            }
        }
        if let Some(sb) = p.sbar_finite() {
            let sb = sb as usize;
            let sigmas: BTreeSet<Character> = chars.iter().map(|c| p.coset_rep(c)).collect();
            let mut roots: Vec<XGen> = Vec::new();
            for r in &sample.roots {
                if let Ok(x) = XGen::new(r.clone(), p) {
                    if !roots.contains(&x) {
                        roots.push(x);
                    }
                }
            }
            for sigma in &sigmas {
                for x in &roots {
                    let mut m = 0;
                    while (m + 1) * sb <= trunc {
                        if let Ok(l) = NonNilLabel::new(m + 1, sigma, x.root.clone(), p) {
                            labels.insert(Label::NonNil(l));
                        }
                        monos.push(Monomial { z: m as u32, xs: vec![x.clone()], ..Monomial::char(sigma) });
                        m += 1;
                    }
                }
            }
        }
        (monos, labels)
    }

    /// Change of basis between generator monomials and indecomposable classes
    /// up to dimension `trunc`. Rows are grouped by the largest dimension in
    /// their expansion; the matrix is block triangular for that grading, so
    /// it is invertible over ℤ exactly when every diagonal block is square
    /// with determinant ±1.
    pub fn basis_change_check(&self, trunc: usize, sample: &RelationSample) -> Result<BasisReport> {
        let p = &self.p;
        let (monos, labels) = self.basis_sets(trunc, sample);
        let mut failures = Vec::new();
        let mut rows: BTreeMap<usize, Vec<(Monomial, RingElem)>> = BTreeMap::new();
        let mut lower = 0;
        for m in &monos {
            let e = self.expand(&GenPoly::monomial(m.clone(), 1))?;
            let d = e.max_dim(p);
            lower += e.iter().filter(|(l, _)| l.dim(p) < d).count();
            for (l, _) in e.iter().filter(|(l, _)| l.dim(p) == d) {
                if !labels.contains(l) {
                    failures.push(format!("{m}: leading class {l} lies outside the truncation"));
                }
            }
            rows.entry(d).or_default().push((m.clone(), e));
        }
        let mut cols: BTreeMap<usize, Vec<&Label>> = BTreeMap::new();
        for l in &labels {
            cols.entry(l.dim(p)).or_default().push(l);
        }
        let mut blocks = Vec::new();
        let dims: BTreeSet<usize> = rows.keys().chain(cols.keys()).copied().collect();
        for d in dims {
            let r = rows.get(&d).map(Vec::as_slice).unwrap_or(&[]);
            let c = cols.get(&d).map(Vec::as_slice).unwrap_or(&[]);
            if r.len() != c.len() {
                failures.push(format!("dimension {d}: {} monomials against {} classes", r.len(), c.len()));
                blocks.push(BasisBlock { dim: d, rows: r.len(), cols: c.len(), det: "n/a".into() });
                continue;
            }
            let mat: Vec<Vec<i64>> = r.iter().map(|(_, e)| c.iter().map(|l| e.coeff(l)).collect()).collect();
            let det = det_int(&mat);
            if det.abs() != num_bigint::BigInt::from(1) {
                let names: Vec<String> = r.iter().map(|(m, _)| m.to_string()).collect();
                failures.push(format!("dimension {d}: determinant {det} on rows {}", names.join(", ")));
            }
            blocks.push(BasisBlock { dim: d, rows: r.len(), cols: c.len(), det: det.to_string() });
        }
        Ok(BasisReport {
            case: p.case.to_string(),
            trunc,
            monomials: monos.len(),
            labels: labels.len(),
            blocks,
            lower_entries: lower,
            unimodular: failures.is_empty(),
            failures,
            scope: "finite truncation by module dimension; invertibility of every truncation is checked, \
                    not the infinite change of basis itself"
                .into(),
        })
    }
}

fn roundtrip_result(what: String, r: Result<(String, RingElem)>) -> RelationResult {
    match r {
        Ok((g, _)) => RelationResult {
            relation_id: "express_roundtrip".into(),
            status: "pass".into(),
            lhs: format!("[{what}]"),
            rhs: g,
            diff: Vec::new(),
            error: None,
        },
        Err(e) => RelationResult::outcome("express_roundtrip", format!("[{what}]"), String::new(), Err(e)),
    }
}

/// λ·x_[α] against x_[α]·λ, by both the rules and the oracle.
pub fn noncommutativity_witness(lambda: &Character, root: &CycNum, p: &HopfParams) -> Result<WitnessReport> {
    let l = Label::nil(1, lambda.clone());
    let x = XGen::new(root.clone(), p)?.label(p)?;
    let (lr, _, lo) = compare_pair(&l, &x, p, CheckOptions::default())?;
    let (rr, _, ro) = compare_pair(&x, &l, p, CheckOptions::default())?;
    Ok(WitnessReport {
        lambda: lambda.to_string(),
        root: root.to_string(),
        left_rules: lr.to_string(),
        right_rules: rr.to_string(),
        left_oracle: lo.to_string(),
        right_oracle: ro.to_string(),
        differs: lr != rr && lo != ro,
        engines_agree: lr == lo && rr == ro,
    })
}

/// A random element with up to `max_terms` classes drawn from `labels` and
/// coefficients in −3..=3.
pub fn random_elem<R: Rng>(rng: &mut R, labels: &[Label], max_terms: usize) -> RingElem {
    let mut e = RingElem::zero();
    let n = rng.gen_range(1..=max_terms.max(1));
    for _ in 0..n {
        let l = labels[rng.gen_range(0..labels.len())].clone();
        let k = rng.gen_range(-3..=3);
        let _ = e.add_term(l, k);
    }
    e
}

pub fn ring_mul(u: &RingElem, v: &RingElem, p: &HopfParams) -> Result<RingElem> {
    GreenRing::new(p).mul(u, v)
}

pub fn expand(g: &GenPoly, p: &HopfParams) -> Result<RingElem> {
    GreenRing::new(p).expand(g)
}

pub fn express_nil(m: usize, lambda: &Character, p: &HopfParams) -> Result<GenPoly> {
    GreenRing::new(p).express_nil(m, lambda)
}

pub fn express_nonnil(t: usize, sigma: &Character, eta: &CycNum, p: &HopfParams) -> Result<GenPoly> {
    GreenRing::new(p).express_nonnil(t, sigma, eta)
}

/// Whether both sides expand to the same element, with lhs − rhs.
pub fn check_relation(lhs: &Expr, rhs: &Expr, p: &HopfParams) -> Result<(bool, RingElem)> {
    let d = GreenRing::new(p).relation_diff(lhs, rhs)?;
    Ok((d.is_zero(), d))
}

pub fn relation_suite(p: &HopfParams, sample: &RelationSample) -> RelationReport {
    GreenRing::new(p).relation_suite(sample)
}

pub fn basis_change_check(p: &HopfParams, trunc: usize, sample: &RelationSample) -> Result<BasisReport> {
    GreenRing::new(p).basis_change_check(trunc, sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{case_one_config, standard_configs};

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(-1, 0), 0);
    }

    #[test]
    fn case_one_v5() {
        let cfg = case_one_config();
        let p = &cfg.params;
        let g = express_nil(5, &p.eps(), p).unwrap();
        let mut want = GenPoly::zero();
        want.add_term(Monomial { y: 4, ..Monomial::char(&p.eps()) }, 1).unwrap();
        want.add_term(Monomial { y: 2, ..Monomial::char(&p.chi) }, -3).unwrap();
        want.add_term(Monomial::char(&p.chi.pow(2)), 1).unwrap();
        assert_eq!(g, want);
    }

    #[test]
    fn y_squared() {
        let cfg = &standard_configs()[1];
        let p = &cfg.params;
        let r = GreenRing::new(p);
        let y = RingElem::from_label(Label::nil(2, p.eps()));
        let want = RingElem::from_label(Label::nil(3, p.eps())).add(&RingElem::from_char(&p.chi)).unwrap();
        assert_eq!(r.mul(&y, &y).unwrap(), want);
    }
}
