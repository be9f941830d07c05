//! Closed-form tensor product decompositions.
//!
//! Every function returns the decomposition together with a [`RuleTrace`]
//! naming the formula branch and its parameters. Where several formulas apply
//! to the same product they are all evaluated and must agree.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::CycNum;
use crate::hopfdata::{Character, HopfParams};
use crate::weightmods::{Decomposition, Label, NonNilLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub rule_id: String,
    pub params: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<RuleTrace>,
}

impl RuleTrace {
    fn new(rule_id: &str, params: &[(&str, i64)]) -> RuleTrace {
        RuleTrace {
            rule_id: rule_id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            children: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RuleOutput {
    pub decomposition: Decomposition,
    pub trace: RuleTrace,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// V_n(λ) ⊗ V_t(σ,β)
    Left,
    /// V_t(σ,β) ⊗ V_n(λ)
    Right,
}

fn push_nil(d: &mut Decomposition, len: i64, k: i64, base: &Character, p: &HopfParams) {
    if len > 0 {
        d.add_label(Label::nil(len as usize, p.chi_shift(base, k)), 1);
    }
}

/// Σ_{i=1}^{min(n,t)} V_{n+t+1-2i}(χ^{i-1}λσ), the rule when q has infinite order.
fn nil_nil_classical(n: i64, t: i64, ls: &Character, p: &HopfParams) -> Decomposition {
    let mut d = Decomposition::new();
    for i in 1..=n.min(t) {
        push_nil(&mut d, n + t + 1 - 2 * i, i - 1, ls, p);
    }
    d
}

/// The general rule for n ≥ t, n = r′s + l′, t = rs + l. `prefer_le` picks
/// the l ≤ l′ form when l = l′ (both forms are valid there).
fn nil_nil_general(n: i64, t: i64, s: i64, ls: &Character, p: &HopfParams, prefer_le: bool) -> (Decomposition, RuleTrace) {
    debug_assert!(n >= t);
    let (rp, lp) = (n / s, n % s);
    let (r, l) = (t / s, t % s);
    let mut d = Decomposition::new();
    // term(i, j, len) adds V_len(χ^{j+is}λσ)
    let mut add = |i0: i64, i1: i64, j0: i64, j1: i64, len: &dyn Fn(i64, i64) -> i64| {
        for i in i0..=i1 {
            for j in j0..=j1 {
                push_nil(&mut d, len(i, j), j + i * s, ls, p);
            }
        }
    };
    let long = |i: i64, j: i64| n + t - 1 - 2 * i * s - 2 * j;
    let even = |k: i64| move |i: i64, _j: i64| (r + rp + k - 2 * i) * s;
    let le = l < lp || (l == lp && prefer_le);
    let id;
    if l + lp <= s {
        if le {
            id = "nil_nil.no_carry.l_le";
            add(0, r, 0, l - 1, &long);
            add(0, r - 1, l, lp - 1, &even(0));
            add(0, r - 1, lp, l + lp - 1, &long);
            add(0, r - 1, l + lp, s - 1, &even(-1));
        } else {
            id = "nil_nil.no_carry.l_ge";
            add(0, r, 0, lp - 1, &long);
            add(0, r, lp, l - 1, &even(0));
            add(0, r - 1, l, l + lp - 1, &long);
            add(0, r - 1, l + lp, s - 1, &even(-1));
        }
    } else {
        let m = l + lp - s - 1;
        if le {
            id = "nil_nil.carry.l_le";
            add(0, r, 0, m, &even(1));
            add(0, r, m + 1, l - 1, &long);
            add(0, r - 1, l, lp - 1, &even(0));
            add(0, r - 1, lp, s - 1, &long);
        } else {
            id = "nil_nil.carry.l_ge";
            add(0, r, 0, m, &even(1));
            add(0, r, m + 1, lp - 1, &long);
            add(0, r, lp, l - 1, &even(0));
            add(0, r - 1, l, s - 1, &long);
        }
    }
    let mut params = vec![("n", n), ("t", t), ("s", s), ("r", r), ("r_prime", rp), ("l", l), ("l_prime", lp)];
    if l + lp > s {
        params.push(("m", l + lp - s - 1));
    }
    (d, RuleTrace::new(id, &params))
}

/// V_{s+1}(λ) ⊗ V_t(σ).
fn nil_nil_step(t: i64, s: i64, ls: &Character, p: &HopfParams) -> Decomposition {
    let mut d = Decomposition::new();
    let (r, l) = (t / s, t % s);
    if l == 0 {
        push_nil(&mut d, t - s, s, ls, p);
        push_nil(&mut d, t + s, 0, ls, p);
        for i in 1..s {
            push_nil(&mut d, t, i, ls, p);
        }
    } else if r == 0 {
        push_nil(&mut d, s + l, 0, ls, p);
        for i in 1..l {
            push_nil(&mut d, s, i, ls, p);
        }
    } else {
        push_nil(&mut d, t + s, 0, ls, p);
        for i in 1..l {
            push_nil(&mut d, (r + 1) * s, i, ls, p);
        }
        push_nil(&mut d, t + s - 2 * l, l, ls, p);
        for i in l + 1..s {
            push_nil(&mut d, r * s, i, ls, p);
        }
        push_nil(&mut d, t - s, s, ls, p);
    }
    d
}

/// V_n(λ) ⊗ V_{rs}(σ) with n = r′s + l.
fn nil_nil_multiple(n: i64, t: i64, s: i64, ls: &Character, p: &HopfParams) -> Decomposition {
    let mut d = Decomposition::new();
    let (rp, l) = (n / s, n % s);
    let r = t / s;
    for i in 0..=rp.min(r - 1) {
        for j in 0..l {
            push_nil(&mut d, (r + rp - 2 * i) * s, j + i * s, ls, p);
        }
    }
    for i in 0..rp.min(r) {
        for j in l..s {
            push_nil(&mut d, (r + rp - 1 - 2 * i) * s, j + i * s, ls, p);
        }
    }
    d
}

/// V_n(λ) ⊗ V_{rs+1}(σ) with n = r′s + l, 1 ≤ l ≤ s-1.
fn nil_nil_one_mod(n: i64, t: i64, s: i64, ls: &Character, p: &HopfParams) -> Decomposition {
    let mut d = Decomposition::new();
    let (rp, l) = (n / s, n % s);
    let r = t / s;
    for i in 0..=rp.min(r) {
        push_nil(&mut d, (r + rp - 2 * i) * s + l, i * s, ls, p);
    }
    for i in 0..=rp.min(r - 1) {
        for j in 1..l {
            push_nil(&mut d, (r + rp - 2 * i) * s, j + i * s, ls, p);
        }
    }
    for i in 0..rp.min(r) {
        push_nil(&mut d, (r + rp - 2 * i) * s - l, l + i * s, ls, p);
        for j in l + 1..s {
            push_nil(&mut d, (r + rp - 1 - 2 * i) * s, j + i * s, ls, p);
        }
    }
    d
}

fn check_dim(d: &Decomposition, want: usize, what: &str, p: &HopfParams) -> Result<()> {
    if d.dim(p) != want {
        return Err(Error::Internal(format!(
            "{what}: rule output has dimension {}, expected {want}",
            d.dim(p)
        )));
    }
    Ok(())
}

fn agree(a: &Decomposition, b: &Decomposition, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Internal(format!("{what} disagrees with the general rule: {a} vs {b}")));
    }
    Ok(())
}

/// V_n(λ) ⊗ V_t(σ).
pub fn tensor_nil_nil(n: usize, lambda: &Character, t: usize, sigma: &Character, p: &HopfParams) -> Result<RuleOutput> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidArgument("module length must be positive".into()));
    }
    let ls = lambda.mul(sigma);
    let (n, t) = (n as i64, t as i64);
    let Some(s) = p.s_finite() else {
        let d = nil_nil_classical(n, t, &ls, p);
        check_dim(&d, (n * t) as usize, "nil x nil", p)?;
        return Ok(RuleOutput { decomposition: d, trace: RuleTrace::new("nil_nil.classical", &[("n", n), ("t", t)]) });
    };
    let s = s as i64;
    let (hi, lo) = if n >= t { (n, t) } else { (t, n) };
    let (d, mut trace) = nil_nil_general(hi, lo, s, &ls, p, true);
    check_dim(&d, (n * t) as usize, "nil x nil", p)?;
    if hi % s == lo % s {
        let (alt, alt_trace) = nil_nil_general(hi, lo, s, &ls, p, false);
        agree(&alt, &d, "the l >= l' form at l = l'")?;
        trace.children.push(RuleTrace::new(&alt_trace.rule_id, &[]));
    }
    let mut fast = Vec::new();
    if hi == s + 1 || lo == s + 1 {
        let other = if hi == s + 1 { lo } else { hi };
        agree(&nil_nil_step(other, s, &ls, p), &d, "the V_{s+1} rule")?;
        fast.push("step_s_plus_1");
    }
    for (a, b) in [(hi, lo), (lo, hi)] {
        if b % s == 0 {
            agree(&nil_nil_multiple(a, b, s, &ls, p), &d, "the multiple-of-s rule")?;
            fast.push("multiple_of_s");
        }
        if b % s == 1 && a % s != 0 {
            agree(&nil_nil_one_mod(a, b, s, &ls, p), &d, "the one-mod-s rule")?;
            fast.push("one_mod_s");
        }
    }
    fast.sort_unstable();
    fast.dedup();
    for f in fast {
        trace.children.push(RuleTrace::new(&format!("nil_nil.{f}"), &[]));
    }
    Ok(RuleOutput { decomposition: d, trace })
}

fn need_case_three(p: &HopfParams) -> Result<(i64, u64, u64)> {
    match (p.s_finite(), p.sbar_finite(), p.sprime) {
        (Some(s), Some(sb), Some(sp)) => Ok((s as i64, sb, sp)),
        _ => Err(Error::UnsupportedCase("non-nilpotent modules need |chi| < infinity".into())),
    }
}

/// V_n(λ) ⊗ V_t(σ,β) (`Left`) or V_t(σ,β) ⊗ V_n(λ) (`Right`).
pub fn tensor_nil_nonnil(n: usize, lambda: &Character, lab: &NonNilLabel, side: Side, p: &HopfParams) -> Result<RuleOutput> {
    let (s, sb, _) = need_case_three(p)?;
    if n == 0 {
        return Err(Error::InvalidArgument("module length must be positive".into()));
    }
    let (n, t) = (n as i64, lab.t as i64);
    let (u, r) = (n / s, n % s);
    let sl = lab.sigma.mul(lambda);
    let eta = match side {
        Side::Left => lab.eta.clone(),
        Side::Right => &p.at_a(lambda).pow_u(s as u64) * &lab.eta,
    };
    let mut d = Decomposition::new();
    let mut put = |len: i64, k: i64| -> Result<()> {
        if len > 0 && k > 0 {
            d.add_label(Label::NonNil(NonNilLabel::new(len as usize, &sl, eta.clone(), p)?), k as u64);
        }
        Ok(())
    };
    for i in 1..=t.min(u) {
        put(2 * i - 1 + (t - u).abs(), s - r)?;
    }
    for i in 1..=t.min(u + 1) {
        put(2 * i - 1 + (t - u - 1).abs(), r)?;
    }
    check_dim(&d, (n * t) as usize * sb as usize, "nil x non-nil", p)?;
    let id = match side {
        Side::Left => "nil_nonnil.left",
        Side::Right => "nil_nonnil.right",
    };
    Ok(RuleOutput { decomposition: d, trace: RuleTrace::new(id, &[("n", n), ("t", t), ("u", u), ("r", r)]) })
}

/// (α_j, α_{1j}) for j = 1..s′ with α_{1j} = θλ(a)^s + ηξ^{j-1}, α_j = α_{1j}^{s′};
/// θ is the left root, η and λ the right root and character.
pub fn alpha_grid(left: &NonNilLabel, right: &NonNilLabel, p: &HopfParams) -> Result<Vec<(CycNum, CycNum)>> {
    let (s, _, sp) = need_case_three(p)?;
    let xi = p.xi.clone().expect("finite sbar");
    let base = &left.eta * &p.at_a(&right.sigma).pow_u(s as u64);
    let mut out = Vec::with_capacity(sp as usize);
    let mut xp = CycNum::one(p.n);
    for _ in 0..sp {
        let root = &base + &(&right.eta * &xp);
        out.push((root.pow_u(sp), root));
        xp = &xp * &xi;
    }
    Ok(out)
}

/// V_n(σ,α) ⊗ V_t(λ,β).
pub fn tensor_nonnil_nonnil(a: &NonNilLabel, b: &NonNilLabel, p: &HopfParams) -> Result<RuleOutput> {
    let (s, sb, sp) = need_case_three(p)?;
    let grid = alpha_grid(a, b, p)?;
    let sign = if sp % 2 == 1 { 1 } else { -1 };
    let test = &b.beta + &(&a.beta * &p.at_a(&b.sigma).pow_u(sb)).mul_int(sign);
    let zeros: Vec<usize> = grid.iter().enumerate().filter(|(_, g)| g.1.is_zero()).map(|(j, _)| j).collect();
    if test.is_zero() != !zeros.is_empty() {
        return Err(Error::Internal("degeneracy tests disagree".into()));
    }
    if zeros.len() > 1 {
        return Err(Error::Internal("more than one vanishing grid entry".into()));
    }
    let j0 = zeros.first().copied();
    let sl = a.sigma.mul(&b.sigma);
    let (n, t) = (a.t as i64, b.t as i64);
    let mut d = Decomposition::new();
    for i in 1..=n.min(t) {
        let len = (2 * i - 1 + (n - t).abs()) as usize;
        for (j, (_, root)) in grid.iter().enumerate() {
            if Some(j) == j0 {
                continue;
            }
            d.add_label(Label::NonNil(NonNilLabel::new(len, &sl, root.clone(), p)?), s as u64);
        }
        if j0.is_some() {
            for j in 0..sb as i64 {
                d.add_label(Label::nil(len * s as usize, p.chi_shift(&sl, j)), 1);
            }
        }
    }
    check_dim(&d, (n * t) as usize * (sb * sb) as usize, "non-nil x non-nil", p)?;
    let trace = match j0 {
        None => RuleTrace::new("nonnil_nonnil.generic", &[("n", n), ("t", t)]),
        Some(j) => RuleTrace::new("nonnil_nonnil.degenerate", &[("n", n), ("t", t), ("j0", j as i64 + 1)]),
    };
    Ok(RuleOutput { decomposition: d, trace })
}

pub fn tensor_labels(a: &Label, b: &Label, p: &HopfParams) -> Result<RuleOutput> {
    match (a, b) {
        (Label::Nil(x), Label::Nil(y)) => tensor_nil_nil(x.t, &x.lambda, y.t, &y.lambda, p),
        (Label::Nil(x), Label::NonNil(y)) => tensor_nil_nonnil(x.t, &x.lambda, y, Side::Left, p),
        (Label::NonNil(x), Label::Nil(y)) => tensor_nil_nonnil(y.t, &y.lambda, x, Side::Right, p),
        (Label::NonNil(x), Label::NonNil(y)) => tensor_nonnil_nonnil(x, y, p),
    }
}

/// Bilinear extension to direct sums.
pub fn tensor_decomp(a: &Decomposition, b: &Decomposition, p: &HopfParams) -> Result<RuleOutput> {
    let mut d = Decomposition::new();
    let mut trace = RuleTrace::new("decomposition.bilinear", &[("left_terms", a.len() as i64), ("right_terms", b.len() as i64)]);
    for (la, ka) in a.iter() {
        for (lb, kb) in b.iter() {
            let o = tensor_labels(la, lb, p)?;
            d = d.add(&o.decomposition.scale(ka * kb));
            trace.children.push(o.trace);
        }
    }
    check_dim(&d, a.dim(p) * b.dim(p), "direct sum product", p)?;
    Ok(RuleOutput { decomposition: d, trace })
}
