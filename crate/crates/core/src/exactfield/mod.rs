//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! An element is stored as `(a_0 + a_1 ζ + … + a_{φ-1} ζ^{φ-1}) / d` with
//! integer numerators, a positive common denominator and `gcd(a_0, …, d) = 1`.
//! The power basis is reduced modulo the N-th cyclotomic polynomial, so two
//! elements are equal exactly when their stored forms are equal.

mod int;

pub use int::Int;

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Multiplicative order of a field element or character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u64(a, b) * b
    }
}

pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    d.sort_unstable();
    d
}

/// Per-N tables: φ(N) and the reduction of ζ^k into the power basis.
struct Ctx {
    phi: usize,
    /// `red[k]` is ζ^k in the power basis, for k < max(N, 2φ - 1).
    red: Vec<Vec<i64>>,
    units: Vec<u64>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // both ascending, den monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut q = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (i, &dv) in den.iter().enumerate() {
                rem[k + i] -= c * dv;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            let f = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &f);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl Ctx {
    fn new(n: u32) -> Ctx {
        let n64 = n as u64;
        let mut memo = HashMap::new();
        let phi_poly = cyclotomic_poly(n64, &mut memo);
        let phi = phi_poly.len() - 1;
        let len = (n as usize).max(2 * phi);
        let mut red = Vec::with_capacity(len);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        if phi == 1 {
            // Q itself: ζ = -phi_poly[0]
            let z = -phi_poly[0];
            let mut v = 1i64;
            for _ in 0..len {
                red.push(vec![v]);
                v *= z;
            }
        } else {
            for _ in 0..len {
                red.push(cur.clone());
                let top = cur[phi - 1];
                let mut next = vec![0i64; phi];
                next[1..phi].copy_from_slice(&cur[..(phi - 1)]);
                if top != 0 {
                    for i in 0..phi {
                        next[i] -= top * phi_poly[i];
                    }
                }
                cur = next;
            }
        }
        let units = (1..n64.max(2)).filter(|k| gcd_u64(*k, n64) == 1).collect();
        Ctx { phi, red, units }
    }
}

thread_local! {
    static CTX: RefCell<HashMap<u32, Rc<Ctx>>> = RefCell::new(HashMap::new());
}

fn ctx(n: u32) -> Rc<Ctx> {
    CTX.with(|c| {
        let mut map = c.borrow_mut();
        map.entry(n).or_insert_with(|| Rc::new(Ctx::new(n))).clone()
    })
}

/// Number of basis coefficients for ℚ(ζ_N).
pub fn field_degree(n: u32) -> usize {
    ctx(n).phi
}

type Coeffs = SmallVec<[Int; 8]>;

/// An exact element of ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u32,
    num: Coeffs,
    den: Int,
}

impl CycNum {
    fn raw(n: u32, num: Coeffs, den: Int) -> CycNum {
        let mut c = CycNum { n, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.signum() < 0 {
            for a in self.num.iter_mut() {
                *a = a.neg();
            }
            self.den = self.den.neg();
        }
        if self.num.iter().all(|a| a.is_zero()) {
            self.den = Int::ONE;
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for a in self.num.iter() {
            if g.is_one() {
                return;
            }
            if !a.is_zero() {
                g = g.gcd(a);
            }
        }
        if !g.is_one() {
            for a in self.num.iter_mut() {
                *a = a.div_exact(&g);
            }
            self.den = self.den.div_exact(&g);
        }
    }

    pub fn zero(n: u32) -> CycNum {
        assert!(n >= 1, "cyclotomic order must be positive");
        let phi = ctx(n).phi;
        CycNum { n, num: smallvec::smallvec![Int::ZERO; phi], den: Int::ONE }
    }

    pub fn one(n: u32) -> CycNum {
        CycNum::from_int(n, 1)
    }

    pub fn from_int(n: u32, v: i64) -> CycNum {
        let mut z = CycNum::zero(n);
        z.num[0] = Int::Small(v);
        z
    }

    pub fn from_bigint(n: u32, v: BigInt) -> CycNum {
        let mut z = CycNum::zero(n);
        z.num[0] = Int::from_big(v);
        z
    }

    pub fn from_ratio(n: u32, p: i64, q: i64) -> Result<CycNum> {
        if q == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut z = CycNum::zero(n);
        z.num[0] = Int::Small(p);
        z.den = Int::Small(q);
        z.normalize();
        Ok(z)
    }

    /// Element with the given rational coefficients on ζ^0, ζ^1, … (any length;
    /// higher powers are reduced).
    pub fn from_poly(n: u32, coeffs: &[(Int, Int)]) -> Result<CycNum> {
        let mut acc = CycNum::zero(n);
        let zeta = CycNum::root_of_unity(n, 1);
        let mut pw = CycNum::one(n);
        for (p, q) in coeffs {
            if q.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let mut c = CycNum::zero(n);
            c.num[0] = p.clone();
            c.den = q.clone();
            c.normalize();
            acc = &acc + &(&c * &pw);
            pw = &pw * &zeta;
        }
        Ok(acc)
    }

    /// ζ_N^k.
    pub fn root_of_unity(n: u32, k: i64) -> CycNum {
        assert!(n >= 1, "cyclotomic order must be positive");
        let c = ctx(n);
        let e = k.rem_euclid(n as i64) as usize;
        let num = c.red[e].iter().map(|&v| Int::Small(v)).collect();
        CycNum { n, num, den: Int::ONE }
    }

    /// ζ_m^k embedded in ℚ(ζ_N); needs m | lcm(2, N).
    pub fn root_of_unity_of_order(n: u32, m: u64, k: i64) -> Result<CycNum> {
        let n64 = n as u64;
        if m == 0 || !lcm_u64(2, n64).is_multiple_of(m) {
            return Err(Error::InvalidArgument(format!(
                "no primitive {m}-th root of unity in Q(zeta_{n})"
            )));
        }
        if n64.is_multiple_of(m) {
            return Ok(CycNum::root_of_unity(n, k * (n64 / m) as i64));
        }
        // N odd, ζ_{2N} = -ζ_N^{(N+1)/2}
        let e = (k * (2 * n64 / m) as i64).rem_euclid(2 * n64 as i64);
        let base = CycNum::root_of_unity(n, e * ((n64 as i64 + 1) / 2));
        Ok(if e % 2 == 1 { -base } else { base })
    }

    pub fn order_n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|a| a.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|a| a.is_zero())
    }

    /// `Some((p, q))` if the element is the rational p/q.
    pub fn as_rational(&self) -> Option<(Int, Int)> {
        if self.num[1..].iter().all(|a| a.is_zero()) {
            Some((self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        match self.as_rational() {
            Some((p, q)) if q.is_one() => p.to_i64(),
            _ => None,
        }
    }

    /// Numerators in the power basis and the common denominator.
    pub fn parts(&self) -> (&[Int], &Int) {
        (&self.num, &self.den)
    }

    /// Reduced fraction of each basis coefficient.
    pub fn coefficient_fractions(&self) -> Vec<(Int, Int)> {
        self.num
            .iter()
            .map(|a| {
                if a.is_zero() {
                    return (Int::ZERO, Int::ONE);
                }
                let g = a.gcd(&self.den);
                (a.div_exact(&g), self.den.div_exact(&g))
            })
            .collect()
    }

    fn check_same(&self, o: &CycNum) {
        assert_eq!(self.n, o.n, "mixing elements of different cyclotomic fields");
    }

    fn add_signed(&self, o: &CycNum, negate: bool) -> CycNum {
        self.check_same(o);
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { o.neg_ref() } else { o.clone() };
        }
        let num: Coeffs;
        let den;
        if self.den == o.den {
            num = self
                .num
                .iter()
                .zip(o.num.iter())
                .map(|(a, b)| if negate { a.sub(b) } else { a.add(b) })
                .collect();
            den = self.den.clone();
        } else {
            let g = self.den.gcd(&o.den);
            let fa = o.den.div_exact(&g);
            let fb = self.den.div_exact(&g);
            num = self
                .num
                .iter()
                .zip(o.num.iter())
                .map(|(a, b)| {
                    let x = a.mul(&fa);
                    let y = b.mul(&fb);
                    if negate {
                        x.sub(&y)
                    } else {
                        x.add(&y)
                    }
                })
                .collect();
            den = self.den.mul(&fa);
        }
        CycNum::raw(self.n, num, den)
    }

    fn neg_ref(&self) -> CycNum {
        CycNum { n: self.n, num: self.num.iter().map(|a| a.neg()).collect(), den: self.den.clone() }
    }

    fn mul_ref(&self, o: &CycNum) -> CycNum {
        self.check_same(o);
        if self.is_zero() || o.is_zero() {
            return CycNum::zero(self.n);
        }
        if let Some((p, q)) = self.as_rational() {
            return o.scale(&p, &q);
        }
        if let Some((p, q)) = o.as_rational() {
            return self.scale(&p, &q);
        }
        let c = ctx(self.n);
        let phi = c.phi;
        let mut prod: SmallVec<[Int; 16]> = smallvec::smallvec![Int::ZERO; 2 * phi - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        let mut num: Coeffs = prod[..phi].iter().cloned().collect();
        for (k, ck) in prod.iter().enumerate().skip(phi) {
            if ck.is_zero() {
                continue;
            }
            for (i, &r) in c.red[k].iter().enumerate() {
                if r != 0 {
                    num[i] = num[i].add(&ck.mul_i64(r));
                }
            }
        }
        CycNum::raw(self.n, num, self.den.mul(&o.den))
    }

    fn scale(&self, p: &Int, q: &Int) -> CycNum {
        CycNum::raw(self.n, self.num.iter().map(|a| a.mul(p)).collect(), self.den.mul(q))
    }

    pub fn mul_int(&self, k: i64) -> CycNum {
        self.scale(&Int::Small(k), &Int::ONE)
    }

    /// Image under the Galois automorphism ζ ↦ ζ^k (gcd(k, N) = 1).
    pub fn galois(&self, k: u64) -> CycNum {
        let c = ctx(self.n);
        let nn = self.n as u64;
        let mut num: Coeffs = smallvec::smallvec![Int::ZERO; c.phi];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let e = ((i as u64) * k % nn.max(1)) as usize;
            for (j, &r) in c.red[e].iter().enumerate() {
                if r != 0 {
                    num[j] = num[j].add(&a.mul_i64(r));
                }
            }
        }
        CycNum::raw(self.n, num, self.den.clone())
    }

    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some((p, q)) = self.as_rational() {
            return Ok(CycNum::raw(self.n, {
                let mut v: Coeffs = smallvec::smallvec![Int::ZERO; self.num.len()];
                v[0] = q;
                v
            }, p));
        }
        // x^{-1} = (product of the other conjugates) / norm
        let c = ctx(self.n);
        let mut prod = CycNum::one(self.n);
        for &k in c.units.iter().filter(|&&k| k != 1) {
            prod = &prod * &self.galois(k);
        }
        let norm = self * &prod;
        let (p, q) = norm
            .as_rational()
            .ok_or_else(|| Error::Internal("field norm is not rational".into()))?;
        Ok(prod.scale(&q, &p))
    }

    pub fn div(&self, o: &CycNum) -> Result<CycNum> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<CycNum> {
        if e < 0 {
            return Ok(self.inv()?.pow_u(e.unsigned_abs()));
        }
        Ok(self.pow_u(e as u64))
    }

    pub fn pow_u(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Smallest n ≥ 1 with x^n = 1, or `Infinite`.
    pub fn mult_order(&self) -> Result<Order> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("order of zero".into()));
        }
        let l = lcm_u64(2, self.n as u64);
        if !self.pow_u(l).is_one() {
            return Ok(Order::Infinite);
        }
        for d in divisors(l) {
            if self.pow_u(d).is_one() {
                return Ok(Order::Finite(d));
            }
        }
        unreachable!("x^L = 1 but no divisor works")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fr = self.coefficient_fractions();
        let num: Vec<serde_json::Value> = fr.iter().map(|(p, _)| int_json(p)).collect();
        let den: Vec<serde_json::Value> = fr.iter().map(|(_, q)| int_json(q)).collect();
        serde_json::json!({"num": num, "den": den, "N": self.n})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<CycNum> {
        let bad = |m: &str| Error::InvalidArgument(format!("cyclotomic json: {m}"));
        let n = v.get("N").and_then(|x| x.as_u64()).ok_or_else(|| bad("missing N"))? as u32;
        if n == 0 {
            return Err(bad("N must be positive"));
        }
        let num = v.get("num").and_then(|x| x.as_array()).ok_or_else(|| bad("missing num"))?;
        let den = v.get("den").and_then(|x| x.as_array()).ok_or_else(|| bad("missing den"))?;
        if num.len() != den.len() || num.len() != field_degree(n) {
            return Err(bad("coefficient arrays have the wrong length"));
        }
        let parse = |x: &serde_json::Value| -> Result<Int> {
            let s = x.to_string();
            s.parse::<BigInt>().map(Int::from_big).map_err(|_| bad("non-integer coefficient"))
        };
        let mut coeffs = Vec::new();
        for (p, q) in num.iter().zip(den) {
            coeffs.push((parse(p)?, parse(q)?));
        }
        CycNum::from_poly(n, &coeffs)
    }
}

fn int_json(v: &Int) -> serde_json::Value {
    let s = v.to_string();
    serde_json::Value::Number(s.parse().expect("integer literal is a valid JSON number"))
}

impl Serialize for CycNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl Ord for CycNum {
    fn cmp(&self, o: &Self) -> Ordering {
        self.n.cmp(&o.n).then_with(|| {
            if self.den == o.den {
                return self.num.cmp(&o.num);
            }
            for (a, b) in self.num.iter().zip(o.num.iter()) {
                let c = a.mul(&o.den).cmp(&b.mul(&self.den));
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, (p, q)) in self.coefficient_fractions().into_iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let neg = p.signum() < 0;
            let ap = p.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if q.is_one() { format!("{ap}") } else { format!("{ap}/{q}") };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !(ap.is_one() && q.is_one()) {
                        write!(f, "{coef}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                $body(self, o)
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                $body(&self, &o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &'a CycNum) -> CycNum {
                $body(&self, o)
            }
        }
    };
}

binop!(Add, add, |a: &CycNum, b: &CycNum| a.add_signed(b, false));
binop!(Sub, sub, |a: &CycNum, b: &CycNum| a.add_signed(b, true));
binop!(Mul, mul, |a: &CycNum, b: &CycNum| a.mul_ref(b));

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

/// (n)_q = 1 + q + … + q^{n-1}.
pub fn q_number(n: u64, q: &CycNum) -> CycNum {
    let mut acc = CycNum::zero(q.n);
    let mut pw = CycNum::one(q.n);
    for _ in 0..n {
        acc = &acc + &pw;
        pw = &pw * q;
    }
    acc
}

pub fn q_factorial(n: u64, q: &CycNum) -> CycNum {
    let mut acc = CycNum::one(q.n);
    for k in 1..=n {
        acc = &acc * &q_number(k, q);
    }
    acc
}

/// q-binomial via the Pascal rule C(n,i) = q^i C(n-1,i) + C(n-1,i-1).
pub fn q_binom(n: u64, i: u64, q: &CycNum) -> Result<CycNum> {
    if i > n {
        return Err(Error::InvalidArgument(format!("q_binom({n}, {i}): i > n")));
    }
    let mut row = vec![CycNum::one(q.n)];
    let mut qpow = vec![CycNum::one(q.n)];
    for k in 1..=i as usize {
        qpow.push(&qpow[k - 1] * q);
    }
    for m in 1..=n as usize {
        let mut next = Vec::with_capacity(m + 1);
        for k in 0..=m.min(i as usize) {
            let keep = if k < m { &qpow[k] * &row[k] } else { CycNum::zero(q.n) };
            let shift = if k >= 1 { row[k - 1].clone() } else { CycNum::zero(q.n) };
            next.push(&keep + &shift);
        }
        row = next;
    }
    Ok(row[i as usize].clone())
}
