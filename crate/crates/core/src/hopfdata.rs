//! The datum (G, a, χ): a finitely generated abelian group, a group element
//! and a character, together with the derived parameters q, s, s̄, s′, ξ.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactfield::{gcd_u64, lcm_u64, CycNum, Order};

/// G = ℤ^r × ℤ/n₁ × … × ℤ/n_k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GroupSpec {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<GroupSpec> {
        if let Some(&n) = torsion.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidParams(format!("torsion order {n} must be at least 2")));
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    pub fn ngens(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Reduce torsion coordinates into [0, nᵢ).
    pub fn normalize_elem(&self, g: &[i64]) -> Result<Vec<i64>> {
        if g.len() != self.ngens() {
            return Err(Error::InvalidParams(format!(
                "group element has {} coordinates, expected {}",
                g.len(),
                self.ngens()
            )));
        }
        let mut out = g.to_vec();
        for (i, &m) in self.torsion.iter().enumerate() {
            out[self.free_rank + i] = g[self.free_rank + i].rem_euclid(m as i64);
        }
        Ok(out)
    }

    /// The i-th generator as a coordinate vector.
    pub fn generator(&self, i: usize) -> Vec<i64> {
        let mut g = vec![0; self.ngens()];
        g[i] = 1;
        g
    }
}

/// A character of G, given by the images of the generators. Torsion images
/// are ζ_{nᵢ}^{eᵢ}; pairs store (eᵢ mod nᵢ, nᵢ).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    n: u32,
    free: Vec<CycNum>,
    tor: Vec<(u64, u64)>,
}

impl Character {
    pub fn trivial(group: &GroupSpec, n: u32) -> Character {
        Character {
            n,
            free: vec![CycNum::one(n); group.free_rank],
            tor: group.torsion.iter().map(|&m| (0, m)).collect(),
        }
    }

    pub fn new(group: &GroupSpec, n: u32, free: Vec<CycNum>, tor_exp: Vec<i64>) -> Result<Character> {
        if free.len() != group.free_rank || tor_exp.len() != group.torsion.len() {
            return Err(Error::InvalidArgument(format!(
                "character arity ({} free, {} torsion) does not match the group ({}, {})",
                free.len(),
                tor_exp.len(),
                group.free_rank,
                group.torsion.len()
            )));
        }
        if free.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidArgument("character images must be nonzero".into()));
        }
        if free.iter().any(|x| x.order_n() != n) {
            return Err(Error::InvalidArgument("character image from a different field".into()));
        }
        let tor = tor_exp
            .iter()
            .zip(&group.torsion)
            .map(|(&e, &m)| (e.rem_euclid(m as i64) as u64, m))
            .collect();
        Ok(Character { n, free, tor })
    }

    pub fn field_n(&self) -> u32 {
        self.n
    }

    pub fn free_images(&self) -> &[CycNum] {
        &self.free
    }

    pub fn torsion_exponents(&self) -> Vec<u64> {
        self.tor.iter().map(|t| t.0).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.free.iter().all(|x| x.is_one()) && self.tor.iter().all(|t| t.0 == 0)
    }

    pub fn mul(&self, o: &Character) -> Character {
        Character {
            n: self.n,
            free: self.free.iter().zip(&o.free).map(|(a, b)| a * b).collect(),
            tor: self.tor.iter().zip(&o.tor).map(|(a, b)| ((a.0 + b.0) % a.1, a.1)).collect(),
        }
    }

    pub fn inv(&self) -> Character {
        Character {
            n: self.n,
            free: self.free.iter().map(|a| a.inv().expect("character images are nonzero")).collect(),
            tor: self.tor.iter().map(|a| ((a.1 - a.0) % a.1, a.1)).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Character {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let k = e.unsigned_abs();
        Character {
            n: self.n,
            free: base.free.iter().map(|a| a.pow_u(k)).collect(),
            tor: base.tor.iter().map(|a| (((a.0 as u128 * k as u128) % a.1 as u128) as u64, a.1)).collect(),
        }
    }

    /// λ(g) for a coordinate vector g.
    pub fn eval(&self, g: &[i64]) -> CycNum {
        let r = self.free.len();
        let mut acc = CycNum::one(self.n);
        for (i, x) in self.free.iter().enumerate() {
            acc = &acc * &x.pow(g[i]).expect("character images are nonzero");
        }
        for (i, &(e, m)) in self.tor.iter().enumerate() {
            let k = (e as i128 * g[r + i] as i128).rem_euclid(m as i128) as i64;
            if k != 0 {
                let z = CycNum::root_of_unity_of_order(self.n, m, k)
                    .expect("torsion orders are validated against N");
                acc = &acc * &z;
            }
        }
        acc
    }

    pub fn order(&self) -> Order {
        let mut l = 1u64;
        for x in &self.free {
            match x.mult_order().expect("nonzero") {
                Order::Finite(k) => l = lcm_u64(l, k),
                Order::Infinite => return Order::Infinite,
            }
        }
        for &(e, m) in &self.tor {
            l = lcm_u64(l, m / gcd_u64(m, e));
        }
        Order::Finite(l)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "free": self.free.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "tor": self.torsion_exponents(),
        })
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "eps");
        }
        let free: Vec<String> = self.free.iter().map(|x| x.to_string()).collect();
        let tor: Vec<String> = self.tor.iter().map(|t| t.0.to_string()).collect();
        write!(f, "chr(free=[{}], tor=[{}])", free.join(", "), tor.join(", "))
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    /// s = s̄ = ∞
    I,
    /// s < s̄ = ∞
    II,
    /// s̄ < ∞
    III,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::I => write!(f, "CaseI"),
            Case::II => write!(f, "CaseII"),
            Case::III => write!(f, "CaseIII"),
        }
    }
}

/// A validated datum with its derived parameters.
#[derive(Clone, Debug)]
pub struct HopfParams {
    pub n: u32,
    pub group: GroupSpec,
    pub a: Vec<i64>,
    pub chi: Character,
    /// q = χ(a)⁻¹
    pub q: CycNum,
    pub s: Order,
    pub sbar: Order,
    pub sprime: Option<u64>,
    pub xi: Option<CycNum>,
    pub case: Case,
}

impl HopfParams {
    pub fn new(n: u32, group: GroupSpec, a: Vec<i64>, chi: Character) -> Result<HopfParams> {
        if n == 0 {
            return Err(Error::InvalidParams("N must be positive".into()));
        }
        let l = lcm_u64(2, n as u64);
        if let Some(&m) = group.torsion.iter().find(|&&m| !l.is_multiple_of(m)) {
            return Err(Error::InvalidParams(format!(
                "torsion order {m} does not divide lcm(2, N) = {l}; characters cannot be evaluated"
            )));
        }
        let a = group.normalize_elem(&a)?;
        if chi.field_n() != n || chi.free.len() != group.free_rank || chi.tor.len() != group.torsion.len() {
            return Err(Error::InvalidParams("chi does not match the group or field".into()));
        }
        let chi_a = chi.eval(&a);
        if chi_a.is_one() {
            return Err(Error::InvalidParams("chi(a) = 1".into()));
        }
        let q = chi_a.inv()?;
        let s = q.mult_order()?;
        let sbar = chi.order();
        let case = classify(s, sbar)?;
        let (sprime, xi) = match (s, sbar) {
            (Order::Finite(s), Order::Finite(sb)) => {
                if sb % s != 0 {
                    return Err(Error::Internal(format!("s = {s} does not divide sbar = {sb}")));
                }
                let sp = sb / s;
                if !l.is_multiple_of(sp) {
                    return Err(Error::InvalidParams(format!(
                        "s' = {sp} does not divide lcm(2, N) = {l}"
                    )));
                }
                (Some(sp), Some(CycNum::root_of_unity_of_order(n, sp, 1)?))
            }
            _ => (None, None),
        };
        Ok(HopfParams { n, group, a, chi, q, s, sbar, sprime, xi, case })
    }

    pub fn eps(&self) -> Character {
        Character::trivial(&self.group, self.n)
    }

    pub fn s_finite(&self) -> Option<u64> {
        self.s.finite()
    }

    pub fn sbar_finite(&self) -> Option<u64> {
        self.sbar.finite()
    }

    /// λ(a).
    pub fn at_a(&self, lambda: &Character) -> CycNum {
        lambda.eval(&self.a)
    }

    pub fn num(&self, v: i64) -> CycNum {
        CycNum::from_int(self.n, v)
    }

    /// χ^k λ.
    pub fn chi_shift(&self, lambda: &Character, k: i64) -> Character {
        lambda.mul(&self.chi.pow(k))
    }

    /// Canonical member of the orbit λ⟨χ⟩: the minimum in the total order on
    /// characters. The identity when s̄ = ∞.
    pub fn coset_rep(&self, lambda: &Character) -> Character {
        match self.sbar {
            Order::Infinite => lambda.clone(),
            Order::Finite(sb) => {
                let mut best = lambda.clone();
                let mut cur = lambda.clone();
                for _ in 1..sb {
                    cur = cur.mul(&self.chi);
                    if cur < best {
                        best = cur.clone();
                    }
                }
                best
            }
        }
    }

    pub fn same_coset(&self, a: &Character, b: &Character) -> bool {
        self.coset_rep(a) == self.coset_rep(b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n,
            "group": {"free_rank": self.group.free_rank, "torsion": self.group.torsion},
            "a": self.a,
            "chi": self.chi.to_json(),
            "q": self.q.to_json(),
            "s": self.s,
            "sbar": self.sbar,
            "sprime": self.sprime,
            "case": self.case.to_string(),
        })
    }
}

pub fn classify(s: Order, sbar: Order) -> Result<Case> {
    match (s, sbar) {
        (Order::Finite(1), _) => Err(Error::InvalidParams("chi(a) = 1".into())),
        (Order::Infinite, Order::Infinite) => Ok(Case::I),
        (Order::Finite(_), Order::Infinite) => Ok(Case::II),
        (Order::Finite(_), Order::Finite(_)) => Ok(Case::III),
        (Order::Infinite, Order::Finite(_)) => Err(Error::InvalidParams("|chi| finite forces chi(a) to be a root of unity".into())),
    }
}

pub fn classify_case(p: &HopfParams) -> Result<Case> {
    classify(p.s, p.sbar)
}
