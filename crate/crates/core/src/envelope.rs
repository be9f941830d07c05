//! Standard parameter sets and the rules-versus-oracle cross-check over all
//! label pairs up to a dimension bound.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::exactfield::CycNum;
use crate::hopfdata::{Character, GroupSpec, HopfParams};
use crate::oracle::{candidate_pool, decompose};
use crate::tensorrules::{tensor_labels, RuleTrace};
use crate::weightmods::{build_label, tensor_rep, Decomposition, Label, NonNilLabel};

/// A parameter set with the characters and roots used to generate labels.
#[derive(Clone, Debug)]
pub struct EnvelopeConfig {
    pub name: String,
    pub params: HopfParams,
    pub nil_chars: Vec<Character>,
    pub nonnil_chars: Vec<Character>,
    pub etas: Vec<CycNum>,
    pub max_nil_t: usize,
    pub max_nonnil_t: usize,
    pub max_dim: usize,
}

pub fn make_params(n: u32, free_rank: usize, torsion: Vec<u64>, a: Vec<i64>, chi_free: Vec<CycNum>, chi_tor: Vec<i64>) -> Result<HopfParams> {
    let g = GroupSpec::new(free_rank, torsion)?;
    let chi = Character::new(&g, n, chi_free, chi_tor)?;
    HopfParams::new(n, g, a, chi)
}

fn chr(p: &HopfParams, free: Vec<CycNum>, tor: Vec<i64>) -> Character {
    Character::new(&p.group, p.n, free, tor).expect("valid character")
}

fn z(n: u32, k: i64) -> CycNum {
    CycNum::root_of_unity(n, k)
}

fn int(n: u32, v: i64) -> CycNum {
    CycNum::from_int(n, v)
}

/// G = ℤ × ℤ/m with a = (1, k) and χ = (1, ζ_m); the free generator carries
/// the twisting characters.
fn finite_chi_config(name: &str, n: u32, m: u64, k: i64, twist: CycNum, max_nil_t: usize, max_nonnil_t: usize) -> EnvelopeConfig {
    let p = make_params(n, 1, vec![m], vec![1, k], vec![int(n, 1)], vec![1]).expect("valid parameters");
    let eps = p.eps();
    let tw = chr(&p, vec![twist.clone()], vec![0]);
    let mixed = chr(&p, vec![twist], vec![1]);
    EnvelopeConfig {
        name: name.to_string(),
        nil_chars: vec![eps.clone(), tw.clone(), mixed],
        nonnil_chars: vec![eps, tw],
        etas: vec![int(n, 1), &int(n, 2) + &z(n, 1)],
        params: p,
        max_nil_t,
        max_nonnil_t,
        max_dim: 400,
    }
}

/// The parameter sets of the acceptance run.
pub fn standard_configs() -> Vec<EnvelopeConfig> {
    let mut out = vec![
        // s = 2, s̄ = 4, s′ = 2
        finite_chi_config("s2_sbar4_N8", 8, 4, 2, z(8, 1), 14, 4),
        // s = 3, s̄ = 6, s′ = 2
        finite_chi_config("s3_sbar6_N12", 12, 6, 2, z(12, 1), 14, 4),
        // s = 3, s̄ = 12, s′ = 4
        finite_chi_config("s3_sbar12_N12", 12, 12, 4, int(12, 2), 10, 2),
        // s = s̄ = 3, s′ = 1
        finite_chi_config("s3_sbar3_N3", 3, 3, 1, int(3, -1), 14, 5),
        // s = 4, s̄ = 8, s′ = 2: reaches every nil x nil branch strictly
        finite_chi_config("s4_sbar8_N8", 8, 8, 2, z(8, 1), 12, 3),
    ];
    let n = 3;
    let p = make_params(n, 2, vec![], vec![0, 1], vec![int(n, 2), z(n, 1)], vec![]).expect("valid parameters");
    let chars = vec![p.eps(), chr(&p, vec![int(n, 3), int(n, 1)], vec![]), chr(&p, vec![int(n, 1), z(n, 2)], vec![])];
    out.push(EnvelopeConfig {
        name: "caseII_s3_N3".into(),
        nil_chars: chars,
        nonnil_chars: Vec::new(),
        etas: Vec::new(),
        params: p,
        max_nil_t: 14,
        max_nonnil_t: 0,
        max_dim: 400,
    });
    out
}

/// Case I: G = ℤ, a = g, χ(g) = 2.
pub fn case_one_config() -> EnvelopeConfig {
    let p = make_params(1, 1, vec![], vec![1], vec![int(1, 2)], vec![]).expect("valid parameters");
    let chars = vec![p.eps(), chr(&p, vec![int(1, 3)], vec![]), chr(&p, vec![int(1, -1)], vec![])];
    EnvelopeConfig {
        name: "caseI_N1".into(),
        nil_chars: chars,
        nonnil_chars: Vec::new(),
        etas: Vec::new(),
        params: p,
        max_nil_t: 12,
        max_nonnil_t: 0,
        max_dim: 400,
    }
}

/// G = ℤ/24, a = g, χ(g) = ζ₁₂ (s = s̄ = 12); λ(g) = ζ₂₄ twists by -1.
pub fn witness_config() -> (HopfParams, Character) {
    let p = make_params(24, 0, vec![24], vec![1], vec![], vec![2]).expect("valid parameters");
    let lam = chr(&p, vec![], vec![1]);
    (p, lam)
}

pub fn envelope_labels(cfg: &EnvelopeConfig) -> Vec<Label> {
    let p = &cfg.params;
    let mut out = Vec::new();
    for lam in &cfg.nil_chars {
        for t in 1..=cfg.max_nil_t {
            out.push(Label::nil(t, lam.clone()));
        }
    }
    if p.sprime.is_some() {
        for sigma in &cfg.nonnil_chars {
            for eta in &cfg.etas {
                for t in 1..=cfg.max_nonnil_t {
                    out.push(Label::NonNil(NonNilLabel::new(t, sigma, eta.clone(), p).expect("valid label")));
                }
            }
        }
    }
    out
}

/// All ordered pairs within the dimension bound, followed by pairs forced into
/// the degenerate non-nil branch: η = -θλ(a)^s ξ^j for every j.
pub fn envelope_pairs(cfg: &EnvelopeConfig) -> Vec<(Label, Label)> {
    let p = &cfg.params;
    let labels = envelope_labels(cfg);
    let mut out = Vec::new();
    for a in &labels {
        for b in &labels {
            if a.dim(p) * b.dim(p) <= cfg.max_dim {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    if let (Some(s), Some(sp), Some(sb)) = (p.s_finite(), p.sprime, p.sbar_finite()) {
        let xi = p.xi.clone().expect("finite sbar");
        for sigma in &cfg.nonnil_chars {
            for lam in &cfg.nonnil_chars {
                for theta in &cfg.etas {
                    for j in 0..sp {
                        let eta = -(&(theta * &p.at_a(lam).pow_u(s)) * &xi.pow_u(j));
                        for (n, t) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                            if n * t * (sb * sb) as usize > cfg.max_dim {
                                continue;
                            }
                            let a = NonNilLabel::new(n, sigma, theta.clone(), p).expect("valid label");
                            let b = NonNilLabel::new(t, lam, eta.clone(), p).expect("valid label");
                            out.push((Label::NonNil(a), Label::NonNil(b)));
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub left: String,
    pub right: String,
    pub rules: String,
    pub oracle: String,
    pub diff: Vec<(String, i64)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EnvelopeReport {
    pub config: String,
    pub pairs: usize,
    pub matched: usize,
    pub mismatches: Vec<Mismatch>,
    pub errors: Vec<String>,
    pub rule_hits: BTreeMap<String, usize>,
}

impl EnvelopeReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty() && self.matched == self.pairs
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CheckOptions {
    /// Corrupt every rules output by one extra V₁(ε); used to prove the
    /// comparison detects disagreements.
    pub tamper: bool,
}

fn count_hits(t: &RuleTrace, hits: &mut BTreeMap<String, usize>) {
    *hits.entry(t.rule_id.clone()).or_insert(0) += 1;
    for c in &t.children {
        count_hits(c, hits);
    }
}

/// Rules and oracle on one pair; returns (rules, oracle).
pub fn compare_pair(a: &Label, b: &Label, p: &HopfParams, opts: CheckOptions) -> Result<(Decomposition, RuleTrace, Decomposition)> {
    let rules = tensor_labels(a, b, p)?;
    let mut rd = rules.decomposition;
    if opts.tamper {
        rd.add_label(Label::nil(1, p.eps()), 1);
    }
    let rep = tensor_rep(&build_label(a, p)?, &build_label(b, p)?, p);
    let pool = candidate_pool(&Decomposition::single(a.clone()), &Decomposition::single(b.clone()), p);
    let od = decompose(&rep, p, Some(&pool))?;
    Ok((rd, rules.trace, od))
}

pub fn cross_check_pairs(name: &str, pairs: &[(Label, Label)], p: &HopfParams, opts: CheckOptions) -> EnvelopeReport {
    let mut rep = EnvelopeReport { config: name.to_string(), pairs: pairs.len(), ..Default::default() };
    for (a, b) in pairs {
        match compare_pair(a, b, p, opts) {
            Ok((rd, trace, od)) => {
                count_hits(&trace, &mut rep.rule_hits);
                if rd == od {
                    rep.matched += 1;
                } else {
                    rep.mismatches.push(Mismatch {
                        left: a.to_string(),
                        right: b.to_string(),
                        rules: rd.to_string(),
                        oracle: od.to_string(),
                        diff: rd.diff(&od).into_iter().map(|(l, k)| (l.to_string(), k)).collect(),
                    });
                }
            }
            Err(e) => rep.errors.push(format!("{a} (x) {b}: {e}")),
        }
    }
    rep
}

pub fn cross_check(cfg: &EnvelopeConfig, opts: CheckOptions) -> EnvelopeReport {
    cross_check_pairs(&cfg.name, &envelope_pairs(cfg), &cfg.params, opts)
}
