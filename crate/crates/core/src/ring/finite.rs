use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{is_prime, Ring};
use crate::{Error, Result};

/// Largest field order for which multiplication tables are built.
const MAX_ORDER: u64 = 1 << 20;
/// Largest order for which the addition table is built (odd `p` only).
const MAX_ADD_TABLE: u64 = 256;

/// An element of `F_q`, stored as the packed base-`p` digits of its
/// polynomial representative: `sum d_i p^i` stands for `sum d_i x^i`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq(pub u32);

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
}

struct FieldData {
    p: u64,
    f: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// The finite field `F_p[x]/(M)` with `M` monic irreducible of degree `f`.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl FiniteField {
    /// `F_p`, with modulus `x`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, vec![0, 1])
    }

    /// `F_{p^f}` with the first irreducible monic modulus in the order of
    /// packed lower coefficients.
    pub fn gf(p: u64, f: u32) -> Result<Self> {
        if f == 1 {
            return Self::prime(p);
        }
        check_prime(p)?;
        let q = order(p, f)?;
        for k in 0..q {
            let mut modulus = unpack(k, p, f);
            modulus.push(1);
            if fp_poly::is_irreducible(&modulus, p) {
                return Self::new(p, modulus);
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    /// `F_p[x]/(modulus)`; coefficients are listed from the constant term up.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::InvalidRing("modulus must be monic of degree at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidRing(format!("modulus coefficients must lie in [0, {p})")));
        }
        let f = (modulus.len() - 1) as u32;
        let q = order(p, f)?;
        if f > 1 && !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidRing(format!("{modulus:?} is reducible over F_{p}")));
        }
        let tables = (f > 1).then(|| build_tables(p, f, q, &modulus));
        Ok(FiniteField(Arc::new(FieldData { p, f, q, modulus, tables })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.f
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.f == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q as u32).map(Fq)
    }

    pub fn element(&self, index: u64) -> Option<Fq> {
        (index < self.0.q).then_some(Fq(index as u32))
    }

    /// The class of `x`.
    pub fn generator(&self) -> Fq {
        self.from_digits(&[0, 1])
    }

    /// Reduces an integer polynomial (constant term first) into the field.
    pub fn from_digits(&self, digits: &[i64]) -> Fq {
        let p = self.0.p;
        let mut d: Vec<u64> = digits.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        if d.len() > self.0.f as usize {
            d = fp_poly::rem(&d, &self.0.modulus, p);
        }
        Fq(pack(&d, p) as u32)
    }

    /// The `f` base-`p` digits of `x`, constant term first.
    pub fn digits(&self, x: Fq) -> Vec<u64> {
        unpack(x.0 as u64, self.0.p, self.0.f)
    }

    /// The value of `x` when it lies in the prime field.
    pub fn to_prime(&self, x: Fq) -> Option<u64> {
        ((x.0 as u64) < self.0.p).then_some(x.0 as u64)
    }

    pub fn frobenius_power(&self, x: Fq, k: u32) -> Fq {
        (0..k % self.0.f).fold(x, |y, _| self.frobenius(&y))
    }

    /// `sum_{i<f} x^{p^i}`, as an element of `Z/p`.
    pub fn trace_to_prime(&self, x: Fq) -> u64 {
        let mut acc = Fq(0);
        let mut y = x;
        for _ in 0..self.0.f {
            acc = self.add(&acc, &y);
            y = self.frobenius(&y);
        }
        self.to_prime(acc).expect("trace lands in the prime field")
    }

    fn digitwise(&self, a: u32, b: u32, op: impl Fn(u64, u64) -> u64) -> u32 {
        let p = self.0.p;
        let (mut x, mut y) = (a as u64, b as u64);
        let (mut r, mut place) = (0u64, 1u64);
        for _ in 0..self.0.f {
            r += op(x % p, y % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        r as u32
    }
}

impl Ring for FiniteField {
    type Elem = Fq;

    fn zero(&self) -> Fq {
        Fq(0)
    }

    fn one(&self) -> Fq {
        Fq(1)
    }

    fn is_zero(&self, x: &Fq) -> bool {
        x.0 == 0
    }

    #[inline]
    fn add(&self, x: &Fq, y: &Fq) -> Fq {
        let d = &*self.0;
        if d.p == 2 {
            return Fq(x.0 ^ y.0);
        }
        if d.f == 1 {
            let s = x.0 as u64 + y.0 as u64;
            return Fq(if s >= d.p { s - d.p } else { s } as u32);
        }
        if let Some(add) = d.tables.as_ref().and_then(|t| t.add.as_ref()) {
            return Fq(add[(x.0 as usize) * d.q as usize + y.0 as usize]);
        }
        let p = d.p;
        Fq(self.digitwise(x.0, y.0, |a, b| (a + b) % p))
    }

    #[inline]
    fn neg(&self, x: &Fq) -> Fq {
        let d = &*self.0;
        if d.p == 2 || x.0 == 0 {
            return *x;
        }
        if d.f == 1 {
            return Fq((d.p - x.0 as u64) as u32);
        }
        let p = d.p;
        Fq(self.digitwise(x.0, 0, |a, _| (p - a) % p))
    }

    #[inline]
    fn mul(&self, x: &Fq, y: &Fq) -> Fq {
        if x.0 == 0 || y.0 == 0 {
            return Fq(0);
        }
        let d = &*self.0;
        match &d.tables {
            None => Fq(((x.0 as u64 * y.0 as u64) % d.p) as u32),
            Some(t) => {
                let s = t.log[x.0 as usize] as u64 + t.log[y.0 as usize] as u64;
                let s = if s >= d.q - 1 { s - (d.q - 1) } else { s };
                Fq(t.exp[s as usize])
            }
        }
    }

    fn from_bigint(&self, c: &BigInt) -> Fq {
        let r = c.mod_floor(&BigInt::from(self.0.p));
        Fq(r.to_u32().expect("residue fits"))
    }

    fn from_i64(&self, c: i64) -> Fq {
        Fq(c.rem_euclid(self.0.p as i64) as u32)
    }

    fn char_p(&self) -> Option<u64> {
        Some(self.0.p)
    }

    fn inverse(&self, x: &Fq) -> Option<Fq> {
        if x.0 == 0 {
            return None;
        }
        let d = &*self.0;
        Some(match &d.tables {
            None => Fq(mod_pow(x.0 as u64, d.p - 2, d.p) as u32),
            Some(t) => {
                let l = t.log[x.0 as usize] as u64;
                Fq(t.exp[((d.q - 1 - l) % (d.q - 1)) as usize])
            }
        })
    }

    fn pow(&self, x: &Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq(1);
        }
        if x.0 == 0 {
            return Fq(0);
        }
        let d = &*self.0;
        match &d.tables {
            None => Fq(mod_pow(x.0 as u64, e, d.p) as u32),
            Some(t) => {
                let l = t.log[x.0 as usize] as u128 * e as u128 % (d.q - 1) as u128;
                Fq(t.exp[l as usize])
            }
        }
    }

    #[inline]
    fn frobenius(&self, x: &Fq) -> Fq {
        if self.0.f == 1 {
            *x
        } else {
            self.pow(x, self.0.p)
        }
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.f, self.0.modulus)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    if p >= 1 << 31 {
        return Err(Error::InvalidRing(format!("prime {p} is too large")));
    }
    Ok(())
}

fn order(p: u64, f: u32) -> Result<u64> {
    match p.checked_pow(f) {
        Some(q) if f == 1 || q <= MAX_ORDER => Ok(q),
        _ => Err(Error::InvalidRing(format!("F_{p}^{f} is larger than supported"))),
    }
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn pack(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn unpack(mut x: u64, p: u64, f: u32) -> Vec<u64> {
    (0..f)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn build_tables(p: u64, f: u32, q: u64, modulus: &[u64]) -> Tables {
    let mulmod = |a: u64, b: u64| -> u64 {
        let prod = fp_poly::mul(&unpack(a, p, f), &unpack(b, p, f), p);
        pack(&fp_poly::rem(&prod, modulus, p), p)
    };
    let powmod = |a: u64, mut e: u64| -> u64 {
        let (mut acc, mut b) = (1u64, a);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let factors = prime_factors(q - 1);
    let g = (2..q)
        .find(|&g| factors.iter().all(|&r| powmod(g, (q - 1) / r) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; (q - 1) as usize];
    let mut log = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x as u32;
        log[x as usize] = i as u32;
        x = mulmod(x, g);
    }
    let add = (p != 2 && q <= MAX_ADD_TABLE).then(|| {
        let mut t = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            let da = unpack(a, p, f);
            for b in 0..q {
                let s: Vec<u64> = da.iter().zip(unpack(b, p, f)).map(|(x, y)| (x + y) % p).collect();
                t.push(pack(&s, p) as u32);
            }
        }
        t
    });
    Tables { exp, log, add }
}

/// Dense polynomials over `F_p`, constant term first.
mod fp_poly {
    use super::mod_pow;

    fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = mod_pow(m[dm], p - 2, p);
        let mut r = trim(a.to_vec());
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            for (k, &mk) in m.iter().enumerate() {
                let idx = top - dm + k;
                r[idx] = (r[idx] + p * p - c * mk % p) % p;
            }
            r = trim(r);
        }
        r
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or: `m` of degree `f` is irreducible iff `gcd(x^{p^i} - x, m) = 1`
    /// for all `i <= f/2`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let f = m.len() - 1;
        let x = vec![0, 1];
        let mut h = rem(&x, m, p);
        for _ in 1..=f / 2 {
            let mut hp = vec![1u64];
            for _ in 0..p {
                hp = rem(&mul(&hp, &h, p), m, p);
            }
            h = hp;
            if gcd(&sub(&h, &x, p), m, p).len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f4() -> FiniteField {
        FiniteField::gf(2, 2).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(f4().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::gf(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteField::gf(3, 2).unwrap().modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(FiniteField::prime(4).is_err());
        assert!(FiniteField::new(2, vec![1, 0, 1]).is_err());
        assert!(FiniteField::new(2, vec![1, 1, 2]).is_err());
    }

    #[test]
    fn char_two_addition() {
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(f2.add(&Fq(1), &Fq(1)), Fq(0));
    }

    #[test]
    fn f4_square_of_generator() {
        let k = f4();
        let x = k.generator();
        assert_eq!(k.mul(&x, &x), k.from_digits(&[1, 1]));
        assert_eq!(k.frobenius_power(x, 1), k.from_digits(&[1, 1]));
    }

    #[test]
    fn prime_field_inverse() {
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(f5.inverse(&Fq(2)), Some(Fq(3)));
        assert_eq!(f5.inverse(&Fq(0)), None);
    }

    #[test]
    fn traces() {
        let k = f4();
        assert_eq!(k.trace_to_prime(k.generator()), 1);
        assert_eq!(k.trace_to_prime(Fq(1)), 0);
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(f7.trace_to_prime(Fq(5)), 5);
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for k in [f4(), FiniteField::gf(2, 3).unwrap(), FiniteField::gf(3, 2).unwrap()] {
            for x in k.elements().skip(1) {
                let y = k.inverse(&x).unwrap();
                assert_eq!(k.mul(&x, &y), Fq(1));
            }
        }
    }

    fn field_and_triple() -> impl Strategy<Value = (FiniteField, Fq, Fq, Fq)> {
        prop_oneof![
            Just(FiniteField::prime(3).unwrap()),
            Just(f4()),
            Just(FiniteField::gf(2, 3).unwrap()),
            Just(FiniteField::gf(3, 2).unwrap()),
            Just(FiniteField::gf(5, 2).unwrap()),
        ]
        .prop_flat_map(|k| {
            let q = k.order() as u32;
            (Just(k), 0..q, 0..q, 0..q)
        })
        .prop_map(|(k, a, b, c)| (k, Fq(a), Fq(b), Fq(c)))
    }

    proptest! {
        #[test]
        fn field_axioms((k, a, b, c) in field_and_triple()) {
            prop_assert_eq!(k.add(&k.add(&a, &b), &c), k.add(&a, &k.add(&b, &c)));
            prop_assert_eq!(k.mul(&k.mul(&a, &b), &c), k.mul(&a, &k.mul(&b, &c)));
            prop_assert_eq!(k.mul(&a, &b), k.mul(&b, &a));
            prop_assert_eq!(k.mul(&a, &k.add(&b, &c)), k.add(&k.mul(&a, &b), &k.mul(&a, &c)));
            prop_assert_eq!(k.add(&a, &k.neg(&a)), Fq(0));
        }

        #[test]
        fn frobenius_is_a_ring_map((k, a, b, _c) in field_and_triple()) {
            let fr = |x: Fq| k.frobenius(&x);
            prop_assert_eq!(fr(k.add(&a, &b)), k.add(&fr(a), &fr(b)));
            prop_assert_eq!(fr(k.mul(&a, &b)), k.mul(&fr(a), &fr(b)));
        }

        #[test]
        fn trace_is_additive_and_frobenius_invariant((k, a, b, _c) in field_and_triple()) {
            let p = k.p();
            prop_assert_eq!(k.trace_to_prime(k.add(&a, &b)), (k.trace_to_prime(a) + k.trace_to_prime(b)) % p);
            prop_assert_eq!(k.trace_to_prime(k.frobenius(&a)), k.trace_to_prime(a));
        }
    }
}
