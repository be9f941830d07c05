use hopfore::exactfield::{q_binom, q_factorial, q_number};
use hopfore::{CycNum, Order};
use proptest::prelude::*;

const NS: [u32; 5] = [1, 3, 8, 12, 24];

/// A random element of ℚ(ζ_n) as a small integer combination of roots of unity
/// divided by a small denominator.
fn cyc(n: u32) -> impl Strategy<Value = CycNum> {
    (prop::collection::vec((-4i64..=4, 0i64..n as i64), 0..4), 1i64..=3).prop_map(move |(terms, den)| {
        let mut acc = CycNum::zero(n);
        for (c, k) in terms {
            acc = &acc + &CycNum::root_of_unity(n, k).mul_int(c);
        }
        acc.div(&CycNum::from_int(n, den)).unwrap()
    })
}

fn field_triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
    prop::sample::select(NS.to_vec()).prop_flat_map(|n| (cyc(n), cyc(n), cyc(n)))
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in field_triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&b), &a - &b);
    }

    #[test]
    fn inverses((a, b, _) in field_triple()) {
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!(&b.div(&a).unwrap() * &a, b);
        }
    }

    #[test]
    fn json_round_trip((a, _, _) in field_triple()) {
        prop_assert_eq!(CycNum::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn pow_is_additive((a, _, _) in field_triple(), i in -3i64..=3, j in -3i64..=3) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(a.pow(i + j).unwrap(), &a.pow(i).unwrap() * &a.pow(j).unwrap());
    }

    #[test]
    fn galois_is_a_ring_map((a, b, _) in field_triple(), k in 1u64..30) {
        let n = a.order_n() as u64;
        prop_assume!(num_integer::Integer::gcd(&k, &n) == 1);
        prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
        prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
    }

    #[test]
    fn q_binomial_matches_factorials(n in 0u64..8, i in 0u64..8, k in 0i64..24) {
        prop_assume!(i <= n);
        let q = CycNum::root_of_unity(24, k);
        let lhs = &q_binom(n, i, &q).unwrap() * &(&q_factorial(i, &q) * &q_factorial(n - i, &q));
        prop_assert_eq!(lhs, q_factorial(n, &q));
    }

    #[test]
    fn q_numbers_telescope(n in 1u64..12, k in 0i64..12) {
        // (1 - q)(n)_q = 1 - q^n
        let q = CycNum::root_of_unity(12, k);
        let one = CycNum::one(12);
        prop_assert_eq!(&(&one - &q) * &q_number(n, &q), &one - &q.pow_u(n));
    }
}

#[test]
fn roots_of_unity_have_their_order() {
    for n in NS {
        for k in 0..n as i64 {
            let z = CycNum::root_of_unity(n, k);
            let expected = n as u64 / num_integer::Integer::gcd(&(k as u64), &(n as u64));
            assert_eq!(z.mult_order().unwrap(), Order::Finite(expected), "zeta_{n}^{k}");
            assert_eq!(z.pow_u(expected), CycNum::one(n));
        }
    }
}

#[test]
fn non_roots_have_infinite_order() {
    for v in [2, -2, 3] {
        assert_eq!(CycNum::from_int(12, v).mult_order().unwrap(), Order::Infinite);
    }
    let w = &CycNum::from_int(8, 2) + &CycNum::root_of_unity(8, 1);
    assert_eq!(w.mult_order().unwrap(), Order::Infinite);
    assert_eq!(CycNum::from_int(6, -1).mult_order().unwrap(), Order::Finite(2));
    assert!(CycNum::zero(6).mult_order().is_err());
}

#[test]
fn cyclotomic_relation_reduces() {
    // 1 + ζ + ζ² = 0 in ℚ(ζ₃); ζ₁₂³ = ζ₄
    let z3 = CycNum::root_of_unity(3, 1);
    assert!((&(&CycNum::one(3) + &z3) + &z3.pow_u(2)).is_zero());
    assert_eq!(CycNum::root_of_unity(12, 3).pow_u(2), CycNum::from_int(12, -1));
    assert_eq!(CycNum::root_of_unity_of_order(12, 4, 1).unwrap(), CycNum::root_of_unity(12, 3));
    assert!(CycNum::root_of_unity_of_order(12, 5, 1).is_err());
}

#[test]
fn q_binom_rejects_out_of_range() {
    assert!(q_binom(2, 3, &CycNum::one(1)).is_err());
}
