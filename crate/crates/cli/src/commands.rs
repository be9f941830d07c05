use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use hopfore::envelope::{
    case_one_config, cross_check_pairs, envelope_labels, envelope_pairs, standard_configs, CheckOptions,
    EnvelopeConfig,
};
use hopfore::greenring::{GenPoly, GreenRing, RelationReport, RelationSample, RingElem};
use hopfore::hopfdata::{Case, Character, HopfParams};
use hopfore::oracle::{decompose, oracle_tensor, EigenPool};
use hopfore::tensorrules::tensor_decomp;
use hopfore::weightmods::{build_label, Decomposition};
use hopfore::CycNum;

use crate::parse::{parse_module_expr, parse_ring_expr};
use crate::{exit, CliError, Format, Engine, Outcome};

fn pretty(v: &serde_json::Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize"))
}

/// ε, χ, and one character per generator of G (image 2 on a free generator,
/// exponent 1 on a torsion generator); roots 1 and 2 + ζ_N.
pub fn default_sample(p: &HopfParams) -> RelationSample {
    let mut chars = vec![p.eps(), p.chi.clone()];
    let g = &p.group;
    for i in 0..g.free_rank {
        let mut free = vec![CycNum::one(p.n); g.free_rank];
        free[i] = CycNum::from_int(p.n, 2);
        if let Ok(c) = Character::new(g, p.n, free, vec![0; g.torsion.len()]) {
            chars.push(c);
        }
    }
    for i in 0..g.torsion.len() {
        let mut tor = vec![0; g.torsion.len()];
        tor[i] = 1;
        if let Ok(c) = Character::new(g, p.n, vec![CycNum::one(p.n); g.free_rank], tor) {
            chars.push(c);
        }
    }
    let mut uniq: Vec<Character> = Vec::new();
    for c in chars {
        if !uniq.contains(&c) {
            uniq.push(c);
        }
    }
    let second = if p.n > 2 { &CycNum::from_int(p.n, 2) + &CycNum::root_of_unity(p.n, 1) } else { CycNum::from_int(p.n, 3) };
    RelationSample { chars: uniq, roots: vec![CycNum::one(p.n), second] }
}

pub fn config_validate(p: &HopfParams, format: Format) -> Outcome {
    match format {
        Format::Json => Outcome::ok(pretty(&json!({"valid": true, "params": p.to_json()}))),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "valid: {}", p.case);
            let _ = writeln!(s, "N = {}, a = {:?}, chi = {}", p.n, p.a, p.chi);
            let _ = writeln!(s, "q = {}, s = {}, sbar = {}", p.q, p.s, p.sbar);
            if let (Some(sp), Some(xi)) = (p.sprime, &p.xi) {
                let _ = writeln!(s, "s' = {sp}, xi = {xi}");
            }
            Outcome::ok(s)
        }
    }
}

fn diff_json(d: &[(hopfore::weightmods::Label, i64)]) -> serde_json::Value {
    serde_json::Value::Array(
        d.iter()
            .map(|(l, k)| {
                let mut v = l.to_json();
                v["diff"] = (*k).into();
                v
            })
            .collect(),
    )
}

pub fn tensor(p: &HopfParams, left: &str, right: &str, engine: Engine, format: Format) -> Result<Outcome, CliError> {
    let a = parse_module_expr(left, p)?;
    let b = parse_module_expr(right, p)?;
    let rules = match engine {
        Engine::Rules | Engine::Both => Some(tensor_decomp(&a, &b, p)?),
        Engine::Oracle => None,
    };
    let oracle = match engine {
        Engine::Oracle | Engine::Both => Some(oracle_tensor(&a, &b, p, None)?),
        Engine::Rules => None,
    };
    let mut code = exit::OK;
    let verdict = match (&rules, &oracle) {
        (Some(r), Some(o)) => {
            let same = r.decomposition == *o;
            if !same {
                code = exit::MISMATCH;
            }
            Some((same, r.decomposition.diff(o)))
        }
        _ => None,
    };
    let out = match format {
        Format::Json => {
            let mut v = json!({"left": a.to_json(), "right": b.to_json()});
            if let Some(r) = &rules {
                v["rules"] = r.decomposition.to_json();
                v["trace"] = serde_json::to_value(&r.trace).expect("trace serializes");
            }
            if let Some(o) = &oracle {
                v["oracle"] = o.to_json();
            }
            if let Some((same, d)) = &verdict {
                v["verdict"] = if *same { "MATCH" } else { "MISMATCH" }.into();
                v["diff"] = diff_json(d);
            }
            pretty(&v)
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(r) = &rules {
                let _ = writeln!(s, "rules:  {}", r.decomposition);
                if engine == Engine::Rules {
                    let _ = writeln!(s, "trace:  {}", serde_json::to_string(&r.trace).expect("trace serializes"));
                }
            }
            if let Some(o) = &oracle {
                let _ = writeln!(s, "oracle: {o}");
            }
            if let Some((same, d)) = &verdict {
                let _ = writeln!(s, "{}", if *same { "MATCH" } else { "MISMATCH" });
                for (l, k) in d {
                    let _ = writeln!(s, "  {k:+} {l}");
                }
            }
            s
        }
    };
    Ok(Outcome { code, out })
}

fn elem_out(label: &str, e: &RingElem, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({ label: e.to_json(), "text": e.to_string() })),
        Format::Text => format!("{e}\n"),
    }
}

pub fn green_mul(p: &HopfParams, left: &str, right: &str, format: Format) -> Result<Outcome, CliError> {
    let ring = GreenRing::new(p);
    let u = ring.expand_expr(&parse_ring_expr(left, p)?)?;
    let v = ring.expand_expr(&parse_ring_expr(right, p)?)?;
    let w = ring.mul(&u, &v)?;
    Ok(Outcome::ok(elem_out("product", &w, format)))
}

pub fn green_express(p: &HopfParams, module: &str, format: Format) -> Result<Outcome, CliError> {
    let d = parse_module_expr(module, p)?;
    let ring = GreenRing::new(p);
    let mut g = GenPoly::zero();
    for (l, k) in d.iter() {
        g = g.add(&ring.express(l)?.scale(k as i64)?)?;
    }
    let out = match format {
        Format::Json => pretty(&json!({"module": d.to_json(), "polynomial": g.to_json(), "text": g.to_string()})),
        Format::Text => format!("{g}\n"),
    };
    Ok(Outcome::ok(out))
}

fn relations_text(r: &RelationReport) -> String {
    let mut s = String::new();
    let mut per: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for x in &r.results {
        let e = per.entry(&x.relation_id).or_default();
        e.1 += 1;
        if x.passed() {
            e.0 += 1;
        }
    }
    let _ = writeln!(s, "{} relations ({})", r.results.len(), r.case);
    for (id, (ok, n)) in &per {
        let _ = writeln!(s, "  {id}: {ok}/{n}");
    }
    for f in r.failures() {
        let _ = writeln!(s, "FAIL {}: {} = {} ; diff {:?}", f.relation_id, f.lhs, f.rhs, f.diff);
        if let Some(e) = &f.error {
            let _ = writeln!(s, "  {e}");
        }
    }
    let _ = writeln!(s, "scope: {}", r.scope);
    s
}

pub fn green_relations(p: &HopfParams, sample: &RelationSample, format: Format) -> Outcome {
    let r = GreenRing::new(p).relation_suite(sample);
    let code = if r.ok() { exit::OK } else { exit::FAILURE };
    let out = match format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        Format::Text => relations_text(&r),
    };
    Outcome { code, out }
}

pub fn green_basis(p: &HopfParams, trunc: usize, sample: &RelationSample, format: Format) -> Result<Outcome, CliError> {
    let r = GreenRing::new(p).basis_change_check(trunc, sample)?;
    let code = if r.unimodular { exit::OK } else { exit::FAILURE };
    let out = match format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("report serializes")),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{}: {} monomials, {} classes, {} graded blocks up to dimension {}",
                r.case,
                r.monomials,
                r.labels,
                r.blocks.len(),
                r.trunc
            );
            let dets: Vec<&str> = r.blocks.iter().map(|b| b.det.as_str()).collect();
            let _ = writeln!(s, "block determinants: {}", dets.join(" "));
            for f in &r.failures {
                let _ = writeln!(s, "FAIL {f}");
            }
            let _ = writeln!(s, "{}", if r.unimodular { "unimodular" } else { "NOT unimodular" });
            let _ = writeln!(s, "scope: {}", r.scope);
            s
        }
    };
    Ok(Outcome { code, out })
}

/// Envelope for a user-supplied datum: sample characters and roots, short
/// modules.
pub fn session_envelope(p: &HopfParams) -> EnvelopeConfig {
    let s = default_sample(p);
    let finite = p.case == Case::III;
    EnvelopeConfig {
        name: "session".into(),
        params: p.clone(),
        nil_chars: s.chars.clone(),
        nonnil_chars: if finite { s.chars.clone() } else { Vec::new() },
        etas: if finite { s.roots } else { Vec::new() },
        max_nil_t: 8,
        max_nonnil_t: 2,
        max_dim: 100,
    }
}

fn seed_for(seed: u64, name: &str) -> u64 {
    name.bytes().fold(seed, |h, b| h.wrapping_mul(0x100000001b3).wrapping_add(b as u64))
}

/// Rules against oracle on (a seeded sample of) the envelope, oracle
/// round-trips, and the relation suite, for each configuration.
pub fn selftest(p: Option<&HopfParams>, seed: u64, budget: usize, tamper: bool, format: Format) -> Outcome {
    let configs = match p {
        Some(p) => vec![session_envelope(p)],
        None => {
            let mut v = vec![case_one_config()];
            v.extend(standard_configs());
            v
        }
    };
    let mut code = exit::OK;
    let mut rows = Vec::new();
    for cfg in &configs {
        let p = &cfg.params;
        let mut pairs = envelope_pairs(cfg);
        let total = pairs.len();
        if budget > 0 && pairs.len() > budget {
            let mut rng = ChaCha8Rng::seed_from_u64(seed_for(seed, &cfg.name));
            let mut idx = sample_indices(&mut rng, pairs.len(), budget).into_vec();
            idx.sort_unstable();
            pairs = idx.into_iter().map(|i| pairs[i].clone()).collect();
        }
        let rep = cross_check_pairs(&cfg.name, &pairs, p, CheckOptions { tamper });
        if !rep.mismatches.is_empty() {
            code = exit::MISMATCH;
        } else if !rep.errors.is_empty() && code == exit::OK {
            code = exit::FAILURE;
        }

        let mut roundtrip = (0, 0);
        for l in envelope_labels(cfg).iter().filter(|l| l.dim(p) <= 40) {
            roundtrip.1 += 1;
            let mut pool = EigenPool::new(p.n);
            let single = Decomposition::single(l.clone());
            pool.insert_labels(&single);
            if build_label(l, p).and_then(|r| decompose(&r, p, Some(&pool))).is_ok_and(|d| d == single) {
                roundtrip.0 += 1;
            }
        }
        if roundtrip.0 != roundtrip.1 && code == exit::OK {
            code = exit::FAILURE;
        }

        let sample = RelationSample { chars: cfg.nil_chars.clone(), roots: cfg.etas.clone() };
        let sample = if sample.roots.is_empty() && p.case == Case::III { default_sample(p) } else { sample };
        let rel = GreenRing::new(p).relation_suite(&sample);
        let rel_ok = rel.results.iter().filter(|r| r.passed()).count();
        if !rel.ok() && code == exit::OK {
            code = exit::FAILURE;
        }
        rows.push(json!({
            "config": cfg.name,
            "case": p.case.to_string(),
            "envelope_pairs": total,
            "checked": pairs.len(),
            "matched": rep.matched,
            "mismatches": rep.mismatches,
            "errors": rep.errors,
            "roundtrip": {"ok": roundtrip.0, "total": roundtrip.1},
            "relations": {"ok": rel_ok, "total": rel.results.len()},
        }));
    }
    let out = match format {
        Format::Json => pretty(&json!({"seed": seed, "budget": budget, "configs": rows, "exit_code": code})),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "selftest seed={seed} budget={budget}");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{} ({}): {}/{} pairs matched (of {}), {} mismatches, {} errors; roundtrip {}/{}; relations {}/{}",
                    r["config"].as_str().unwrap_or(""),
                    r["case"].as_str().unwrap_or(""),
                    r["matched"],
                    r["checked"],
                    r["envelope_pairs"],
                    r["mismatches"].as_array().map_or(0, |a| a.len()),
                    r["errors"].as_array().map_or(0, |a| a.len()),
                    r["roundtrip"]["ok"],
                    r["roundtrip"]["total"],
                    r["relations"]["ok"],
                    r["relations"]["total"],
                );
                for m in r["mismatches"].as_array().into_iter().flatten().take(3) {
                    let _ = writeln!(s, "  MISMATCH {} (x) {}: rules {} / oracle {}", m["left"], m["right"], m["rules"], m["oracle"]);
                }
                for e in r["errors"].as_array().into_iter().flatten().take(3) {
                    let _ = writeln!(s, "  ERROR {e}");
                }
            }
            let _ = writeln!(s, "{}", if code == exit::OK { "PASS" } else { "FAIL" });
            s
        }
    };
    Outcome { code, out }
}
