use hopfore::envelope::{compare_pair, envelope_labels, standard_configs, CheckOptions, EnvelopeConfig};
use hopfore::oracle::{decompose, EigenPool};
use hopfore::tensorrules::{alpha_grid, tensor_decomp, tensor_labels};
use hopfore::weightmods::{build_label, direct_sum, rep_check, tensor_rep, Decomposition, Label, NonNilLabel};
use hopfore::Error;
use proptest::prelude::*;
use std::sync::OnceLock;

fn configs() -> &'static [EnvelopeConfig] {
    static C: OnceLock<Vec<EnvelopeConfig>> = OnceLock::new();
    C.get_or_init(standard_configs)
}

/// Envelope labels of dimension at most `max_dim`.
fn small_labels(cfg: &EnvelopeConfig, max_dim: usize) -> Vec<Label> {
    envelope_labels(cfg).into_iter().filter(|l| l.dim(&cfg.params) <= max_dim).collect()
}

fn pick(ci: usize, i: usize, max_dim: usize) -> (&'static EnvelopeConfig, Label) {
    let cfg = &configs()[ci % configs().len()];
    let ls = small_labels(cfg, max_dim);
    (cfg, ls[i % ls.len()].clone())
}

fn pool_for(d: &Decomposition, n: u32) -> EigenPool {
    let mut pool = EigenPool::new(n);
    pool.insert_labels(d);
    pool
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_modules_are_representations(ci in 0usize..6, i in 0usize..200) {
        let (cfg, l) = pick(ci, i, 40);
        let rep = build_label(&l, &cfg.params).unwrap();
        prop_assert_eq!(rep.dim, l.dim(&cfg.params));
        prop_assert!(rep_check(&rep, &cfg.params));
    }

    #[test]
    fn oracle_round_trip(ci in 0usize..6, i in 0usize..200) {
        let (cfg, l) = pick(ci, i, 40);
        let d = Decomposition::single(l.clone());
        let rep = build_label(&l, &cfg.params).unwrap();
        prop_assert_eq!(decompose(&rep, &cfg.params, Some(&pool_for(&d, cfg.params.n))).unwrap(), d);
    }

    #[test]
    fn oracle_is_additive(ci in 0usize..6, i in 0usize..200, j in 0usize..200) {
        let (cfg, a) = pick(ci, i, 30);
        let (_, b) = pick(ci, j, 30);
        let p = &cfg.params;
        let d = Decomposition::single(a.clone()).add(&Decomposition::single(b.clone()));
        let rep = direct_sum(&build_label(&a, p).unwrap(), &build_label(&b, p).unwrap());
        prop_assert_eq!(decompose(&rep, p, Some(&pool_for(&d, p.n))).unwrap(), d);
    }

    #[test]
    fn tensor_rep_is_a_representation(ci in 0usize..6, i in 0usize..200, j in 0usize..200) {
        let (cfg, a) = pick(ci, i, 12);
        let (_, b) = pick(ci, j, 12);
        let p = &cfg.params;
        let rep = tensor_rep(&build_label(&a, p).unwrap(), &build_label(&b, p).unwrap(), p);
        prop_assert!(rep_check(&rep, p));
    }

    #[test]
    fn rules_conserve_dimension(ci in 0usize..6, i in 0usize..200, j in 0usize..200) {
        let (cfg, a) = pick(ci, i, 60);
        let (_, b) = pick(ci, j, 60);
        let p = &cfg.params;
        let out = tensor_labels(&a, &b, p).unwrap();
        prop_assert_eq!(out.decomposition.dim(p), a.dim(p) * b.dim(p));
    }

    #[test]
    fn nilpotent_products_commute(ci in 0usize..6, n in 1usize..12, t in 1usize..12, i in 0usize..3, j in 0usize..3) {
        let cfg = &configs()[ci];
        let p = &cfg.params;
        let a = Label::nil(n, cfg.nil_chars[i].clone());
        let b = Label::nil(t, cfg.nil_chars[j].clone());
        prop_assert_eq!(tensor_labels(&a, &b, p).unwrap().decomposition, tensor_labels(&b, &a, p).unwrap().decomposition);
    }

    #[test]
    fn rules_are_bilinear(ci in 0usize..6, i in 0usize..200, j in 0usize..200, k in 0usize..200) {
        let (cfg, a) = pick(ci, i, 30);
        let (_, b) = pick(ci, j, 30);
        let (_, c) = pick(ci, k, 30);
        let p = &cfg.params;
        let ab = Decomposition::single(a.clone()).add(&Decomposition::single(b.clone()));
        let lhs = tensor_decomp(&ab, &Decomposition::single(c.clone()), p).unwrap().decomposition;
        let rhs = tensor_labels(&a, &c, p).unwrap().decomposition.add(&tensor_labels(&b, &c, p).unwrap().decomposition);
        prop_assert_eq!(lhs, rhs);
    }

    /// Replacing the carried root η by another s′-th root of the same β
    /// changes neither the label nor any product.
    #[test]
    fn root_choice_is_irrelevant(ci in 0usize..5, i in 0usize..200, t in 1usize..3, si in 0usize..2, ei in 0usize..2, k in 0u64..4) {
        let cfg = &configs()[ci];
        let p = &cfg.params;
        let xi = p.xi.clone().unwrap();
        let (sigma, eta) = (&cfg.nonnil_chars[si], &cfg.etas[ei]);
        let w = NonNilLabel::new(t, sigma, eta.clone(), p).unwrap();
        let w2 = NonNilLabel::new(t, sigma, eta * &xi.pow_u(k), p).unwrap();
        prop_assert_eq!(Label::NonNil(w.clone()), Label::NonNil(w2.clone()));
        let (_, other) = pick(ci, i, 24);
        let (a, b) = (Label::NonNil(w), Label::NonNil(w2));
        prop_assert_eq!(tensor_labels(&a, &other, p).unwrap().decomposition, tensor_labels(&b, &other, p).unwrap().decomposition);
        prop_assert_eq!(tensor_labels(&other, &a, p).unwrap().decomposition, tensor_labels(&other, &b, p).unwrap().decomposition);
        if let (Label::NonNil(x), Label::NonNil(y)) = (&other, &a) {
            let g1: Vec<_> = alpha_grid(x, y, p).unwrap().into_iter().map(|(b, _)| b).collect();
            let mut g1s = g1.clone();
            g1s.sort();
            if let Label::NonNil(y2) = &b {
                let mut g2: Vec<_> = alpha_grid(x, y2, p).unwrap().into_iter().map(|(b, _)| b).collect();
                g2.sort();
                prop_assert_eq!(g1s, g2);
            }
        }
    }

    #[test]
    fn engines_agree_on_random_pairs(ci in 0usize..6, i in 0usize..200, j in 0usize..200) {
        let (cfg, a) = pick(ci, i, 24);
        let (_, b) = pick(ci, j, 24);
        let (rules, _, oracle) = compare_pair(&a, &b, &cfg.params, CheckOptions::default()).unwrap();
        prop_assert_eq!(rules, oracle);
    }
}

#[test]
fn tamper_is_visible() {
    let cfg = &configs()[1];
    let a = Label::nil(2, cfg.params.eps());
    let (rules, _, oracle) = compare_pair(&a, &a, &cfg.params, CheckOptions { tamper: true }).unwrap();
    assert_ne!(rules, oracle);
}

#[test]
fn non_nilpotent_labels_need_finite_chi() {
    let cfg = &configs()[5];
    let p = &cfg.params;
    let err = NonNilLabel::new(1, &p.eps(), p.num(1), p).unwrap_err();
    assert!(matches!(err, Error::UnsupportedCase(_)));
}

#[test]
fn missing_roots_are_reported() {
    // The pool is empty, so the oracle cannot name the eigenvalue of the
    // invertible part.
    let cfg = &configs()[0];
    let p = &cfg.params;
    let w = Label::NonNil(NonNilLabel::new(1, &p.eps(), &p.num(2) + &p.num(1), p).unwrap());
    let rep = build_label(&w, p).unwrap();
    let err = decompose(&rep, p, Some(&EigenPool::new(p.n))).unwrap_err();
    assert!(matches!(err, Error::IncompleteEigenPool { .. }), "{err}");
}
