use hopfore::envelope::{case_one_config, envelope_labels, standard_configs, witness_config, EnvelopeConfig};
use hopfore::greenring::{binom, noncommutativity_witness, random_elem, GenPoly, GreenRing, RingElem};
use hopfore::hopfdata::Case;
use hopfore::weightmods::Label;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn configs() -> &'static [EnvelopeConfig] {
    static C: OnceLock<Vec<EnvelopeConfig>> = OnceLock::new();
    C.get_or_init(|| {
        let mut v = vec![case_one_config()];
        v.extend(standard_configs());
        v
    })
}

fn labels(cfg: &EnvelopeConfig, max_dim: usize) -> Vec<Label> {
    envelope_labels(cfg).into_iter().filter(|l| l.dim(&cfg.params) <= max_dim).collect()
}

fn elems(ci: usize, seed: u64, n: usize) -> (&'static EnvelopeConfig, Vec<RingElem>) {
    let cfg = &configs()[ci % configs().len()];
    let ls = labels(cfg, 8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (cfg, (0..n).map(|_| random_elem(&mut rng, &ls, 3)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative(ci in 0usize..7, seed in any::<u64>()) {
        let (cfg, e) = elems(ci, seed, 3);
        let r = GreenRing::new(&cfg.params);
        let lhs = r.mul(&r.mul(&e[0], &e[1]).unwrap(), &e[2]).unwrap();
        let rhs = r.mul(&e[0], &r.mul(&e[1], &e[2]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_and_distributivity(ci in 0usize..7, seed in any::<u64>()) {
        let (cfg, e) = elems(ci, seed, 3);
        let p = &cfg.params;
        let r = GreenRing::new(p);
        let one = RingElem::one(p);
        prop_assert_eq!(r.mul(&one, &e[0]).unwrap(), e[0].clone());
        prop_assert_eq!(r.mul(&e[0], &one).unwrap(), e[0].clone());
        let lhs = r.mul(&e[0], &e[1].add(&e[2]).unwrap()).unwrap();
        let rhs = r.mul(&e[0], &e[1]).unwrap().add(&r.mul(&e[0], &e[2]).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutative_outside_case_three(ci in 0usize..7, seed in any::<u64>()) {
        let (cfg, e) = elems(ci, seed, 2);
        prop_assume!(cfg.params.case != Case::III);
        let r = GreenRing::new(&cfg.params);
        prop_assert!(r.commutator(&e[0], &e[1]).unwrap().is_zero());
    }

    #[test]
    fn express_round_trip(ci in 0usize..7, i in 0usize..500) {
        let cfg = &configs()[ci];
        let ls = labels(cfg, 30);
        let l = &ls[i % ls.len()];
        let r = GreenRing::new(&cfg.params);
        let g = r.express(l).unwrap();
        g.check_alphabet(&cfg.params).unwrap();
        prop_assert_eq!(r.expand(&g).unwrap(), RingElem::from_label(l.clone()));
    }

    #[test]
    fn generator_products_expand_multiplicatively(ci in 0usize..7, a in 0u32..4, b in 0u32..4) {
        let cfg = &configs()[ci];
        let p = &cfg.params;
        let r = GreenRing::new(p);
        let y = GenPoly::y(p);
        let lhs = r.expand(&y.pow(a + b, p).unwrap()).unwrap();
        let rhs = r.mul(&r.expand(&y.pow(a, p).unwrap()).unwrap(), &r.expand(&y.pow(b, p).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn case_one_fifth_class() {
    let cfg = case_one_config();
    let r = GreenRing::new(&cfg.params);
    let g = r.express_nil(5, &cfg.params.eps()).unwrap();
    assert_eq!(g.to_string(), "y^4 - 3*chr(free=[2], tor=[])*y^2 + chr(free=[4], tor=[])");
}

#[test]
fn binomials() {
    assert_eq!(binom(5, 2), 10);
    assert_eq!(binom(3, 5), 0);
    assert_eq!(binom(0, 0), 1);
}

#[test]
fn case_three_is_not_commutative() {
    let (p, lam) = witness_config();
    let w = noncommutativity_witness(&lam, &p.num(1), &p).unwrap();
    assert!(w.differs, "{w:?}");
    assert!(w.engines_agree, "{w:?}");
}

#[test]
fn relation_suites_pass() {
    for cfg in configs() {
        let sample = hopfore::greenring::RelationSample { chars: cfg.nil_chars.clone(), roots: cfg.etas.clone() };
        let rep = GreenRing::new(&cfg.params).relation_suite(&sample);
        assert!(rep.ok(), "{}: {:?}", cfg.name, rep.failures().first());
    }
}
