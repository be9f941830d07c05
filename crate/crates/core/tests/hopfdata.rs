use hopfore::envelope::{case_one_config, make_params, standard_configs, witness_config};
use hopfore::hopfdata::{classify, Case};
use hopfore::{CycNum, Order};
use proptest::prelude::*;

#[test]
fn standard_parameters() {
    let want: &[(&str, Option<u64>, Option<u64>, Option<u64>)] = &[
        ("s2_sbar4_N8", Some(2), Some(4), Some(2)),
        ("s3_sbar6_N12", Some(3), Some(6), Some(2)),
        ("s3_sbar12_N12", Some(3), Some(12), Some(4)),
        ("s3_sbar3_N3", Some(3), Some(3), Some(1)),
        ("s4_sbar8_N8", Some(4), Some(8), Some(2)),
        ("caseII_s3_N3", Some(3), None, None),
    ];
    let cfgs = standard_configs();
    assert_eq!(cfgs.len(), want.len());
    for (cfg, (name, s, sb, sp)) in cfgs.iter().zip(want) {
        assert_eq!(cfg.name, *name);
        let p = &cfg.params;
        assert_eq!((p.s_finite(), p.sbar_finite(), p.sprime), (*s, *sb, *sp), "{name}");
        let expect = if sb.is_some() { Case::III } else { Case::II };
        assert_eq!(p.case, expect);
    }
    assert_eq!(case_one_config().params.case, Case::I);
    let (w, _) = witness_config();
    assert_eq!((w.s_finite(), w.sbar_finite(), w.sprime), (Some(12), Some(12), Some(1)));
}

#[test]
fn classification() {
    assert_eq!(classify(Order::Infinite, Order::Infinite).unwrap(), Case::I);
    assert_eq!(classify(Order::Finite(3), Order::Infinite).unwrap(), Case::II);
    assert_eq!(classify(Order::Finite(3), Order::Finite(6)).unwrap(), Case::III);
    assert!(classify(Order::Infinite, Order::Finite(6)).is_err());
    assert!(classify(Order::Finite(1), Order::Finite(6)).is_err());
}

#[test]
fn invalid_data_is_rejected() {
    // χ(a) = 1
    assert!(make_params(2, 0, vec![2], vec![0], vec![], vec![1]).is_err());
    // torsion order must divide N
    assert!(make_params(4, 0, vec![3], vec![1], vec![], vec![1]).is_err());
    // free image must be nonzero
    assert!(make_params(1, 1, vec![], vec![1], vec![CycNum::zero(1)], vec![]).is_err());
}

proptest! {
    #[test]
    fn coset_rep_is_constant_on_orbits(ci in 0usize..5, k in -12i64..12, j in 0usize..3) {
        let cfg = &standard_configs()[ci];
        let p = &cfg.params;
        let lam = &cfg.nil_chars[j];
        let rep = p.coset_rep(lam);
        prop_assert_eq!(p.coset_rep(&p.chi_shift(lam, k)), rep.clone());
        prop_assert_eq!(p.coset_rep(&rep), rep.clone());
        prop_assert!(p.same_coset(&rep, lam));
        prop_assert!(rep <= *lam);
    }

    #[test]
    fn characters_form_a_group(ci in 0usize..6, i in 0usize..3, j in 0usize..3, e in -5i64..5) {
        let cfg = &standard_configs()[ci];
        let p = &cfg.params;
        let (a, b) = (&cfg.nil_chars[i], &cfg.nil_chars[j]);
        prop_assert_eq!(a.mul(b), b.mul(a));
        prop_assert!(a.mul(&a.inv()).is_trivial());
        prop_assert_eq!(a.pow(e).mul(&a.pow(-e)), p.eps());
        let g: Vec<i64> = p.a.clone();
        prop_assert_eq!(a.mul(b).eval(&g), &a.eval(&g) * &b.eval(&g));
    }
}
