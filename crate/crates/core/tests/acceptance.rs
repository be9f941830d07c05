//! Acceptance run: one [PASS]/[FAIL] line per criterion, exact comparisons
//! throughout. Exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hopfore::envelope::{
    case_one_config, compare_pair, cross_check_pairs, envelope_labels, envelope_pairs, standard_configs, witness_config,
    CheckOptions, EnvelopeConfig,
};
use hopfore::greenring::{noncommutativity_witness, random_elem, GreenRing, RelationSample};
use hopfore::hopfdata::{Case, Character, HopfParams};
use hopfore::oracle::{candidate_pool, decompose, slice_jordan, EigenPool};
use hopfore::tensorrules::{alpha_grid, tensor_labels, RuleTrace};
use hopfore::weightmods::{build_label, direct_sum, tensor_rep, Decomposition, Label, NonNilLabel};
use hopfore::CycNum;

struct Run {
    passed: usize,
    failed: usize,
}

impl Run {
    fn report(&mut self, ok: bool, id: &str, detail: impl AsRef<str>) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id}: {}", detail.as_ref());
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }
}

fn both_engines(a: &Label, b: &Label, p: &HopfParams) -> Result<(Decomposition, Decomposition), String> {
    compare_pair(a, b, p, CheckOptions::default()).map(|(r, _, o)| (r, o)).map_err(|e| e.to_string())
}

fn find_traces<'a>(t: &'a RuleTrace, id: &str, out: &mut Vec<&'a RuleTrace>) {
    if t.rule_id == id {
        out.push(t);
    }
    for c in &t.children {
        find_traces(c, id, out);
    }
}

// -- 1. engine equivalence

const NIL_BRANCHES: [&str; 4] = ["nil_nil.no_carry.l_le", "nil_nil.no_carry.l_ge", "nil_nil.carry.l_le", "nil_nil.carry.l_ge"];
const MIXED_BRANCHES: [&str; 4] = ["nil_nonnil.left", "nil_nonnil.right", "nonnil_nonnil.generic", "nonnil_nonnil.degenerate"];

fn engine_equivalence(run: &mut Run, cfgs: &[EnvelopeConfig]) {
    let mut hits: BTreeMap<String, usize> = BTreeMap::new();
    let mut case_two_hits: BTreeSet<String> = BTreeSet::new();
    for cfg in cfgs {
        let t0 = Instant::now();
        let pairs = envelope_pairs(cfg);
        let rep = cross_check_pairs(&cfg.name, &pairs, &cfg.params, CheckOptions::default());
        for (k, v) in &rep.rule_hits {
            *hits.entry(k.clone()).or_default() += v;
            if cfg.params.case == Case::II {
                case_two_hits.insert(k.clone());
            }
        }
        let mut detail = format!(
            "{} pairs (tensor dim <= {}), {} matched, {} mismatches, {} errors, {:.1}s",
            rep.pairs,
            cfg.max_dim,
            rep.matched,
            rep.mismatches.len(),
            rep.errors.len(),
            t0.elapsed().as_secs_f64()
        );
        if let Some(m) = rep.mismatches.first() {
            detail += &format!("; first mismatch {} (x) {}: rules {} / oracle {}", m.left, m.right, m.rules, m.oracle);
        }
        if let Some(e) = rep.errors.first() {
            detail += &format!("; first error {e}");
        }
        run.report(rep.ok(), &format!("engine_equivalence.{}", cfg.name), detail);
    }

    let missing: Vec<&str> = NIL_BRANCHES.iter().chain(&MIXED_BRANCHES).copied().filter(|b| !hits.contains_key(*b)).collect();
    let summary: Vec<String> = NIL_BRANCHES.iter().chain(&MIXED_BRANCHES).map(|b| format!("{b}={}", hits.get(*b).copied().unwrap_or(0))).collect();
    run.report(missing.is_empty(), "engine_equivalence.branch_coverage", format!("{}; missing {:?}", summary.join(" "), missing));
    let case_two_missing: Vec<&str> = NIL_BRANCHES.iter().copied().filter(|b| !case_two_hits.contains(*b)).collect();
    run.report(case_two_missing.is_empty(), "engine_equivalence.case_two_branch_coverage", format!("missing {case_two_missing:?}"));

    // degenerate branch forced for several j₀ in each config with s′ > 1
    for cfg in cfgs.iter().filter(|c| c.params.sprime.is_some_and(|sp| sp > 1)) {
        let p = &cfg.params;
        let mut j0s = BTreeSet::new();
        for (a, b) in envelope_pairs(cfg) {
            if let (Label::NonNil(_), Label::NonNil(_)) = (&a, &b) {
                if let Ok(out) = tensor_labels(&a, &b, p) {
                    let mut ts = Vec::new();
                    find_traces(&out.trace, "nonnil_nonnil.degenerate", &mut ts);
                    j0s.extend(ts.iter().filter_map(|t| t.params.get("j0").copied()));
                }
            }
        }
        let sp = p.sprime.unwrap() as usize;
        run.report(j0s.len() == sp, &format!("engine_equivalence.degenerate_j0.{}", cfg.name), format!("j0 values {j0s:?} of {sp}"));
    }

    // the nil ⊗ non-nil twist is non-trivial somewhere and still matches
    let mut twisted = 0;
    let mut agree = true;
    for cfg in cfgs.iter().filter(|c| c.params.case == Case::III) {
        let p = &cfg.params;
        let s = p.s_finite().unwrap();
        for lam in &cfg.nil_chars {
            if p.at_a(lam).pow_u(p.sbar_finite().unwrap()).is_one() && p.at_a(lam).pow_u(s).is_one() {
                continue;
            }
            for sigma in &cfg.nonnil_chars {
                for eta in &cfg.etas {
                    let v = Label::nil(2, lam.clone());
                    let w = Label::NonNil(NonNilLabel::new(1, sigma, eta.clone(), p).unwrap());
                    match (both_engines(&v, &w, p), both_engines(&w, &v, p)) {
                        (Ok((lr, lo)), Ok((rr, ro))) => {
                            agree &= lr == lo && rr == ro;
                            if lr != rr {
                                twisted += 1;
                            }
                        }
                        _ => agree = false,
                    }
                }
            }
        }
    }
    run.report(agree && twisted > 0, "engine_equivalence.nil_nonnil_twist", format!("{twisted} pairs where the two orders differ, engines agree: {agree}"));
}

// -- 2. named instances

fn cfg_named<'a>(cfgs: &'a [EnvelopeConfig], name: &str) -> &'a EnvelopeConfig {
    cfgs.iter().find(|c| c.name == name).expect("standard config")
}

fn named_instances(run: &mut Run, cfgs: &[EnvelopeConfig]) {
    // s = 2: V₃(λ) ⊗ V₂(σ) = V₄(λσ) ⊕ V₂(χλσ)
    let cfg = cfg_named(cfgs, "s2_sbar4_N8");
    let p = &cfg.params;
    let mut ok = true;
    let mut n = 0;
    for lam in &cfg.nil_chars {
        for sigma in &cfg.nil_chars {
            let ls = lam.mul(sigma);
            let mut want = Decomposition::single(Label::nil(4, ls.clone()));
            want.add_label(Label::nil(2, p.chi_shift(&ls, 1)), 1);
            match both_engines(&Label::nil(3, lam.clone()), &Label::nil(2, sigma.clone()), p) {
                Ok((r, o)) => ok &= r == want && o == want,
                Err(_) => ok = false,
            }
            n += 1;
        }
    }
    run.report(ok, "named.step_rule_s2_t2", format!("V3(l) (x) V2(s) = V4(ls) + V2(chi ls) for {n} character pairs, both engines"));

    // V_{2s}(ε) ⊗ V_t(σ,β) = s·V_{t−1}(σ,β) ⊕ s·V_{t+1}(σ,β)
    for name in ["s3_sbar6_N12", "s2_sbar4_N8"] {
        let cfg = cfg_named(cfgs, name);
        let p = &cfg.params;
        let s = p.s_finite().unwrap() as usize;
        let mut ok = true;
        let mut n = 0;
        for sigma in &cfg.nonnil_chars {
            for eta in &cfg.etas {
                for t in 1..=4 {
                    let w = |k: usize| Label::NonNil(NonNilLabel::new(k, sigma, eta.clone(), p).unwrap());
                    let mut want = Decomposition::new();
                    if t > 1 {
                        want.add_label(w(t - 1), s as u64);
                    }
                    want.add_label(w(t + 1), s as u64);
                    match both_engines(&Label::nil(2 * s, p.eps()), &w(t), p) {
                        Ok((r, o)) => ok &= r == want && o == want,
                        Err(_) => ok = false,
                    }
                    n += 1;
                }
            }
        }
        run.report(ok, &format!("named.v2s_times_nonnil.{name}"), format!("s V_(t-1) + s V_(t+1) for t in 1..=4, {n} instances, both engines"));
    }

    // degenerate n = t = 1: the s̄ copies of V_s
    for cfg in cfgs.iter().filter(|c| c.params.case == Case::III) {
        let p = &cfg.params;
        let (s, sb) = (p.s_finite().unwrap(), p.sbar_finite().unwrap());
        let xi = p.xi.clone().unwrap();
        let mut ok = true;
        let mut n = 0;
        for sigma in &cfg.nonnil_chars {
            for lam in &cfg.nonnil_chars {
                for theta in &cfg.etas {
                    for j in 0..p.sprime.unwrap() {
                        let eta = -(&(theta * &p.at_a(lam).pow_u(s)) * &xi.pow_u(j));
                        let a = NonNilLabel::new(1, sigma, theta.clone(), p).unwrap();
                        let b = NonNilLabel::new(1, lam, eta, p).unwrap();
                        let sl = sigma.mul(lam);
                        let mut want = Decomposition::new();
                        let mut zeros = 0;
                        for (alpha, root) in alpha_grid(&a, &b, p).unwrap() {
                            if alpha.is_zero() {
                                zeros += 1;
                            } else {
                                want.add_label(Label::NonNil(NonNilLabel::new(1, &sl, root, p).unwrap()), s);
                            }
                        }
                        for k in 0..sb as i64 {
                            want.add_label(Label::nil(s as usize, p.chi_shift(&sl, k)), 1);
                        }
                        let block: u64 = want.iter().filter(|(l, _)| l.is_nil()).map(|(_, k)| k).sum();
                        ok &= zeros == 1 && block == sb;
                        match both_engines(&Label::NonNil(a), &Label::NonNil(b), p) {
                            Ok((r, o)) => ok &= r == want && o == want,
                            Err(_) => ok = false,
                        }
                        n += 1;
                    }
                }
            }
        }
        run.report(ok, &format!("named.degenerate_block.{}", cfg.name), format!("{sb} copies of V_{s} plus the generic part, {n} instances, both engines"));
    }
}

// -- 3, 4. Green ring relations and truncated bases

fn sample_for(cfg: &EnvelopeConfig) -> RelationSample {
    RelationSample { chars: cfg.nil_chars.clone(), roots: cfg.etas.clone() }
}

fn relation_suites(run: &mut Run, all: &[EnvelopeConfig]) {
    for cfg in all {
        let rep = GreenRing::new(&cfg.params).relation_suite(&sample_for(cfg));
        let counts = rep.counts();
        let mut ok = rep.ok();
        let mut detail = format!("{} {} identities, {} failures", cfg.params.case, rep.results.len(), rep.failures().len());
        if cfg.params.case == Case::III {
            let generic = counts.get("x_x_generic").copied().unwrap_or(0);
            let opposite = counts.get("x_x_opposite").copied().unwrap_or(0);
            ok &= generic > 0 && opposite > 0 && generic + opposite >= 10;
            detail += &format!("; x products: {generic} generic and {opposite} opposite-class samples");
        }
        if let Some(f) = rep.failures().first() {
            detail += &format!("; first failure {}: {} vs {}", f.relation_id, f.lhs, f.rhs);
        }
        run.report(ok, &format!("green_relations.{}", cfg.name), detail);
    }
}

fn basis_truncations(run: &mut Run, all: &[EnvelopeConfig]) {
    for cfg in all {
        let t0 = Instant::now();
        match GreenRing::new(&cfg.params).basis_change_check(30, &sample_for(cfg)) {
            Ok(b) => {
                let mut detail = format!(
                    "{} dim <= 30: {} monomials, {} classes, {} square blocks, {:.1}s",
                    cfg.params.case,
                    b.monomials,
                    b.labels,
                    b.blocks.len(),
                    t0.elapsed().as_secs_f64()
                );
                if let Some(f) = b.failures.first() {
                    detail += &format!("; {f}");
                }
                run.report(b.unimodular && b.failures.is_empty(), &format!("basis_truncation.{}", cfg.name), detail);
            }
            Err(e) => run.report(false, &format!("basis_truncation.{}", cfg.name), e.to_string()),
        }
    }
}

// -- 5. commutativity

fn commutativity(run: &mut Run, all: &[EnvelopeConfig]) {
    for cfg in all.iter().filter(|c| c.params.case != Case::III) {
        let r = GreenRing::new(&cfg.params);
        let labels: Vec<Label> = envelope_labels(cfg).into_iter().filter(|l| l.dim(&cfg.params) <= 10).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut bad = 0;
        for _ in 0..100 {
            let u = random_elem(&mut rng, &labels, 4);
            let v = random_elem(&mut rng, &labels, 4);
            if !r.commutator(&u, &v).map(|c| c.is_zero()).unwrap_or(false) {
                bad += 1;
            }
        }
        run.report(bad == 0, &format!("commutativity.{}", cfg.name), format!("{} 100 random pairs, {bad} non-commuting", cfg.params.case));
    }
    let (p, lam) = witness_config();
    match noncommutativity_witness(&lam, &p.num(1), &p) {
        Ok(w) => run.report(
            w.differs && w.engines_agree,
            "commutativity.case_three_witness",
            format!("lambda*x = {} / x*lambda = {} (oracle {} / {})", w.left_rules, w.right_rules, w.left_oracle, w.right_oracle),
        ),
        Err(e) => run.report(false, "commutativity.case_three_witness", e.to_string()),
    }
}

// -- 6. oracle self-consistency

fn pool_of(d: &Decomposition, n: u32) -> EigenPool {
    let mut pool = EigenPool::new(n);
    pool.insert_labels(d);
    pool
}

fn oracle_consistency(run: &mut Run, all: &[EnvelopeConfig]) {
    let mut total = 0;
    let mut bad = Vec::new();
    for cfg in all {
        let p = &cfg.params;
        for l in envelope_labels(cfg) {
            let d = Decomposition::single(l.clone());
            let got = build_label(&l, p).and_then(|rep| decompose(&rep, p, Some(&pool_of(&d, p.n))));
            if got.as_ref().ok() != Some(&d) {
                bad.push(format!("{}: {l}", cfg.name));
            }
            total += 1;
        }
    }
    run.report(bad.is_empty(), "oracle.round_trip", format!("{total} envelope labels, {} failures {:?}", bad.len(), bad.first()));

    let mut rng = ChaCha8Rng::seed_from_u64(0xadd);
    let mut bad = 0;
    for _ in 0..50 {
        let cfg = &all[rng.gen_range(0..all.len())];
        let p = &cfg.params;
        let labels: Vec<Label> = envelope_labels(cfg).into_iter().filter(|l| l.dim(p) <= 30).collect();
        let k = rng.gen_range(2..=3);
        let parts: Vec<Label> = (0..k).map(|_| labels[rng.gen_range(0..labels.len())].clone()).collect();
        let mut want = Decomposition::new();
        let mut rep = None;
        for l in &parts {
            want.add_label(l.clone(), 1);
            let r = build_label(l, p).unwrap();
            rep = Some(match rep {
                None => r,
                Some(acc) => direct_sum(&acc, &r),
            });
        }
        if decompose(&rep.unwrap(), p, Some(&pool_of(&want, p.n))).ok() != Some(want) {
            bad += 1;
        }
    }
    run.report(bad == 0, "oracle.additivity", format!("50 random direct sums, {bad} failures"));

    let mut rng = ChaCha8Rng::seed_from_u64(0x51ce);
    let case_three: Vec<&EnvelopeConfig> = all.iter().filter(|c| c.params.case == Case::III).collect();
    let (mut checked, mut bad) = (0, Vec::new());
    while checked < 50 {
        let cfg = case_three[rng.gen_range(0..case_three.len())];
        let p = &cfg.params;
        let labels: Vec<Label> = envelope_labels(cfg).into_iter().filter(|l| l.dim(p) <= 24).collect();
        let a = labels[rng.gen_range(0..labels.len())].clone();
        let b = labels[rng.gen_range(0..labels.len())].clone();
        if a.is_nil() && b.is_nil() || a.dim(p) * b.dim(p) > 200 {
            continue;
        }
        let rep = tensor_rep(&build_label(&a, p).unwrap(), &build_label(&b, p).unwrap(), p);
        let pool = candidate_pool(&Decomposition::single(a.clone()), &Decomposition::single(b.clone()), p);
        let d = match decompose(&rep, p, Some(&pool)) {
            Ok(d) => d,
            Err(e) => {
                bad.push(format!("{a} (x) {b}: {e}"));
                checked += 1;
                continue;
            }
        };
        let mu = rep.weights[rng.gen_range(0..rep.dim)].clone();
        if let Err(msg) = slice_consistent(&rep, &mu, &d, &pool, p) {
            bad.push(format!("{a} (x) {b} at {mu}: {msg}"));
        }
        checked += 1;
    }
    run.report(bad.is_empty(), "oracle.coset_slice_jordan", format!("50 random invertible-part slices, {} failures {:?}", bad.len(), bad.first()));
}

/// Jordan data of Y = x^{s̄} on the invertible part of slice μ equals the data
/// on slice χμ and the data predicted by the decomposition: one block of size
/// t with eigenvalue β for each V_t(σ,β) with σ in the coset of μ.
fn slice_consistent(
    rep: &hopfore::weightmods::MatrixRep,
    mu: &Character,
    d: &Decomposition,
    pool: &EigenPool,
    p: &HopfParams,
) -> Result<(), String> {
    let invertible = |m: &Character| -> Result<BTreeMap<CycNum, Vec<usize>>, String> {
        let j = slice_jordan(rep, m, pool, p).map_err(|e| e.to_string())?;
        Ok(j.blocks
            .into_iter()
            .filter(|(b, _)| !b.is_zero())
            .map(|(b, mut s)| {
                s.sort_unstable();
                (b, s)
            })
            .collect())
    };
    let here = invertible(mu)?;
    let next = invertible(&p.chi_shift(mu, 1))?;
    let mut want: BTreeMap<CycNum, Vec<usize>> = BTreeMap::new();
    for (l, k) in d.iter() {
        if let Label::NonNil(w) = l {
            if p.same_coset(&w.sigma, mu) {
                want.entry(w.beta.clone()).or_default().extend(std::iter::repeat_n(w.t, k as usize));
            }
        }
    }
    want.values_mut().for_each(|v| v.sort_unstable());
    if here != next {
        return Err("slices mu and chi*mu differ".into());
    }
    if here != want {
        return Err(format!("slice has {} eigenvalues, decomposition predicts {}", here.len(), want.len()));
    }
    Ok(())
}

fn main() {
    let t0 = Instant::now();
    let mut run = Run { passed: 0, failed: 0 };
    let cfgs = standard_configs();
    let mut all = vec![case_one_config()];
    all.extend(cfgs.iter().cloned());

    engine_equivalence(&mut run, &cfgs);
    // Case I is outside the named envelope but cheap to include.
    engine_equivalence_case_one(&mut run);
    named_instances(&mut run, &cfgs);
    relation_suites(&mut run, &all);
    basis_truncations(&mut run, &all);
    commutativity(&mut run, &all);
    oracle_consistency(&mut run, &all);

    println!("{} passed, {} failed, {:.1}s", run.passed, run.failed, t0.elapsed().as_secs_f64());
    if run.failed > 0 {
        std::process::exit(1);
    }
}

fn engine_equivalence_case_one(run: &mut Run) {
    let cfg = case_one_config();
    let rep = cross_check_pairs(&cfg.name, &envelope_pairs(&cfg), &cfg.params, CheckOptions::default());
    run.report(
        rep.ok(),
        "engine_equivalence.caseI_N1",
        format!("{} pairs, {} matched, {} mismatches, {} errors", rep.pairs, rep.matched, rep.mismatches.len(), rep.errors.len()),
    );
}
