use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{FiniteField, Fq, Ring, TorsionFree};
use crate::{Error, Result};

/// Largest residue degree `f` a lift ring supports.
pub const MAX_LIFT_DEGREE: usize = 4;
/// Largest residue field for which the Teichmüller table is precomputed.
const MAX_TEICH_TABLE: u64 = 1 << 12;

/// An element of `Z/p^N[x]/(M)`: coefficients of `1, x, ..., x^{f-1}` in
/// `[0, p^N)`; unused slots are zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LiftElem(pub [u64; MAX_LIFT_DEGREE]);

struct LiftData {
    field: FiniteField,
    p: u64,
    f: usize,
    precision: u32,
    m: u64,
    /// Lower coefficients of the monic modulus lift, reduced mod `p^N`.
    modulus: [u64; MAX_LIFT_DEGREE],
    teich: OnceLock<Result<Vec<LiftElem>>>,
}

/// The unramified lift `Z/p^N[x]/(M)` of a finite field `F_p[x]/(M mod p)`.
#[derive(Clone)]
pub struct LiftRing(Arc<LiftData>);

impl LiftRing {
    /// Lift ring over `field` using the field's own modulus digits as the
    /// integer lift.
    pub fn new(field: &FiniteField, precision: u32) -> Result<Self> {
        let lift: Vec<BigInt> = field.modulus().iter().map(|&c| BigInt::from(c)).collect();
        Self::with_modulus(field, &lift, precision)
    }

    /// Lift ring with an explicit integer modulus lift (constant term first).
    pub fn with_modulus(field: &FiniteField, modulus: &[BigInt], precision: u32) -> Result<Self> {
        let p = field.p();
        let f = field.degree() as usize;
        if f > MAX_LIFT_DEGREE {
            return Err(Error::InvalidRing(format!(
                "lift rings support residue degree at most {MAX_LIFT_DEGREE}"
            )));
        }
        if precision == 0 {
            return Err(Error::InvalidRing("lift precision must be at least 1".into()));
        }
        let m = match p.checked_pow(precision) {
            Some(m) if m < 1 << 62 => m,
            _ => return Err(Error::InvalidRing(format!("{p}^{precision} exceeds 62 bits"))),
        };
        if modulus.len() != f + 1 || modulus[f] != BigInt::from(1) {
            return Err(Error::InvalidRing("modulus lift must be monic of degree f".into()));
        }
        let bp = BigInt::from(p);
        let reduces = modulus
            .iter()
            .zip(field.modulus())
            .all(|(c, &d)| c.mod_floor(&bp) == BigInt::from(d));
        if !reduces {
            return Err(Error::InvalidRing("modulus lift does not reduce to the field modulus".into()));
        }
        let bm = BigInt::from(m);
        let mut low = [0u64; MAX_LIFT_DEGREE];
        for (slot, c) in low.iter_mut().zip(&modulus[..f]) {
            *slot = c.mod_floor(&bm).to_u64().expect("reduced");
        }
        Ok(LiftRing(Arc::new(LiftData {
            field: field.clone(),
            p,
            f,
            precision,
            m,
            modulus: low,
            teich: OnceLock::new(),
        })))
    }

    pub fn field(&self) -> &FiniteField {
        &self.0.field
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn precision(&self) -> u32 {
        self.0.precision
    }

    /// `p^N`.
    pub fn characteristic(&self) -> u64 {
        self.0.m
    }

    /// Integer modulus lift, constant term first.
    pub fn modulus(&self) -> Vec<u64> {
        let mut out = self.0.modulus[..self.0.f].to_vec();
        out.push(1);
        out
    }

    pub fn coeffs<'a>(&self, x: &'a LiftElem) -> &'a [u64] {
        &x.0[..self.0.f]
    }

    /// Builds an element from integer coefficients, reducing mod `p^N` and `M`.
    pub fn from_coeffs(&self, cs: &[BigInt]) -> LiftElem {
        let bm = BigInt::from(self.0.m);
        let mut acc = self.zero();
        let mut xpow = self.one();
        let x = self.x();
        for c in cs {
            let r = c.mod_floor(&bm).to_u64().expect("reduced");
            let term = self.scale(&xpow, r);
            acc = self.add(&acc, &term);
            xpow = self.mul(&xpow, &x);
        }
        acc
    }

    fn x(&self) -> LiftElem {
        let mut e = LiftElem::default();
        if self.0.f > 1 {
            e.0[1] = 1;
        } else {
            e.0[0] = (self.0.m - self.0.modulus[0]) % self.0.m;
        }
        e
    }

    fn scale(&self, x: &LiftElem, c: u64) -> LiftElem {
        let mut out = LiftElem::default();
        for i in 0..self.0.f {
            out.0[i] = self.mulmod(x.0[i], c);
        }
        out
    }

    /// Reduction mod `p`.
    pub fn reduce(&self, x: &LiftElem) -> Fq {
        let p = self.0.p;
        let digits: Vec<i64> = x.0[..self.0.f].iter().map(|&c| (c % p) as i64).collect();
        self.0.field.from_digits(&digits)
    }

    /// The lift of `c` with digits in `[0, p)`.
    pub fn standard_lift(&self, c: Fq) -> LiftElem {
        let mut out = LiftElem::default();
        for (slot, d) in out.0.iter_mut().zip(self.0.field.digits(c)) {
            *slot = d;
        }
        out
    }

    /// The Teichmüller representative: the unique `w ≡ c (mod p)` with
    /// `w^q = w`.
    pub fn teichmuller(&self, c: Fq) -> Result<LiftElem> {
        if self.0.field.order() <= MAX_TEICH_TABLE {
            let table = self.0.teich.get_or_init(|| {
                self.0
                    .field
                    .elements()
                    .map(|c| self.teich_iterate(c))
                    .collect()
            });
            return match table {
                Ok(t) => Ok(t[c.0 as usize]),
                Err(e) => Err(e.clone()),
            };
        }
        self.teich_iterate(c)
    }

    fn teich_iterate(&self, c: Fq) -> Result<LiftElem> {
        let q = self.0.field.order();
        let steps = self.0.precision + 2;
        let mut z = self.standard_lift(c);
        for _ in 0..steps {
            let next = self.pow(&z, q);
            if next == z {
                return Ok(z);
            }
            z = next;
        }
        Err(Error::TeichmullerUnstable { steps })
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        let m = self.0.m;
        if m <= u32::MAX as u64 {
            a * b % m
        } else {
            (a as u128 * b as u128 % m as u128) as u64
        }
    }

    #[inline]
    fn addmod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0.m {
            s - self.0.m
        } else {
            s
        }
    }
}

impl Ring for LiftRing {
    type Elem = LiftElem;

    fn zero(&self) -> LiftElem {
        LiftElem::default()
    }

    fn one(&self) -> LiftElem {
        let mut e = LiftElem::default();
        e.0[0] = 1 % self.0.m;
        e
    }

    fn is_zero(&self, x: &LiftElem) -> bool {
        x.0 == [0; MAX_LIFT_DEGREE]
    }

    #[inline]
    fn add(&self, x: &LiftElem, y: &LiftElem) -> LiftElem {
        let mut out = LiftElem::default();
        for i in 0..self.0.f {
            out.0[i] = self.addmod(x.0[i], y.0[i]);
        }
        out
    }

    fn neg(&self, x: &LiftElem) -> LiftElem {
        let mut out = LiftElem::default();
        for i in 0..self.0.f {
            out.0[i] = if x.0[i] == 0 { 0 } else { self.0.m - x.0[i] };
        }
        out
    }

    #[inline]
    fn mul(&self, x: &LiftElem, y: &LiftElem) -> LiftElem {
        let f = self.0.f;
        let mut out = LiftElem::default();
        if f == 1 {
            out.0[0] = self.mulmod(x.0[0], y.0[0]);
            return out;
        }
        let m = self.0.m;
        let mut prod = [0u64; 2 * MAX_LIFT_DEGREE - 1];
        for i in 0..f {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..f {
                prod[i + j] = self.addmod(prod[i + j], self.mulmod(x.0[i], y.0[j]));
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for k in 0..f {
                let t = self.mulmod(c, self.0.modulus[k]);
                prod[d - f + k] = (prod[d - f + k] + m - t) % m;
            }
        }
        out.0[..f].copy_from_slice(&prod[..f]);
        out
    }

    fn from_bigint(&self, c: &BigInt) -> LiftElem {
        let mut e = LiftElem::default();
        e.0[0] = c.mod_floor(&BigInt::from(self.0.m)).to_u64().expect("reduced");
        e
    }

    fn from_i64(&self, c: i64) -> LiftElem {
        let mut e = LiftElem::default();
        e.0[0] = (c as i128).rem_euclid(self.0.m as i128) as u64;
        e
    }

    fn char_p(&self) -> Option<u64> {
        (self.0.precision == 1).then_some(self.0.p)
    }

    fn inverse(&self, x: &LiftElem) -> Option<LiftElem> {
        let field = &self.0.field;
        let r = field.inverse(&self.reduce(x))?;
        let one = self.one();
        let two = self.from_i64(2);
        let mut y = self.standard_lift(r);
        for _ in 0..=(u32::BITS - self.0.precision.leading_zeros()) {
            if self.mul(x, &y) == one {
                break;
            }
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
        }
        debug_assert_eq!(self.mul(x, &y), one);
        Some(y)
    }
}

impl TorsionFree for LiftRing {
    fn div_p_pow(&self, x: &LiftElem, p: u64, k: u32) -> Option<LiftElem> {
        if p != self.0.p {
            return None;
        }
        let d = p.checked_pow(k)?;
        if d >= self.0.m {
            return self.is_zero(x).then(LiftElem::default);
        }
        let mut out = LiftElem::default();
        for i in 0..self.0.f {
            if x.0[i] % d != 0 {
                return None;
            }
            out.0[i] = x.0[i] / d;
        }
        Some(out)
    }
}

impl PartialEq for LiftRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.precision == other.0.precision
                && self.0.modulus == other.0.modulus)
    }
}

impl fmt::Debug for LiftRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Z/{}^{}[x]/{:?}",
            self.0.p,
            self.0.precision,
            self.modulus()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn teichmuller_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        let l = LiftRing::new(&f3, 2).unwrap();
        assert_eq!(l.coeffs(&l.teichmuller(Fq(2)).unwrap()), &[8]);
        assert_eq!(l.teichmuller(Fq(0)).unwrap(), l.zero());
        let f2 = FiniteField::prime(2).unwrap();
        let l2 = LiftRing::new(&f2, 5).unwrap();
        assert_eq!(l2.teichmuller(Fq(1)).unwrap(), l2.one());
    }

    #[test]
    fn rejects_inconsistent_modulus_lift() {
        let f4 = FiniteField::gf(2, 2).unwrap();
        let bad = [BigInt::from(1), BigInt::from(2), BigInt::from(1)];
        assert!(LiftRing::with_modulus(&f4, &bad, 3).is_err());
        let ok = [BigInt::from(3), BigInt::from(-1), BigInt::from(1)];
        assert!(LiftRing::with_modulus(&f4, &ok, 3).is_ok());
    }

    #[test]
    fn teichmuller_in_extension_has_order_dividing_q_minus_one() {
        let f4 = FiniteField::gf(2, 2).unwrap();
        let l = LiftRing::new(&f4, 6).unwrap();
        for c in f4.elements().skip(1) {
            let w = l.teichmuller(c).unwrap();
            assert_eq!(l.reduce(&w), c);
            assert_eq!(l.pow(&w, 3), l.one());
        }
    }

    #[test]
    fn division_by_p_powers() {
        let f3 = FiniteField::prime(3).unwrap();
        let l = LiftRing::new(&f3, 3).unwrap();
        let x = l.from_i64(18);
        assert_eq!(l.div_p_pow(&x, 3, 2), Some(l.from_i64(2)));
        assert_eq!(l.div_p_pow(&x, 3, 3), None);
    }

    fn lift_and_pair() -> impl Strategy<Value = (LiftRing, Fq, Fq, u64)> {
        prop_oneof![
            Just(FiniteField::prime(2).unwrap()),
            Just(FiniteField::prime(5).unwrap()),
            Just(FiniteField::gf(2, 2).unwrap()),
            Just(FiniteField::gf(3, 2).unwrap()),
        ]
        .prop_flat_map(|k| {
            let q = k.order() as u32;
            (Just(k), 1u32..7, 0..q, 0..q, any::<u64>())
        })
        .prop_map(|(k, n, a, b, s)| (LiftRing::new(&k, n).unwrap(), Fq(a), Fq(b), s))
    }

    proptest! {
        #[test]
        fn teichmuller_is_multiplicative((l, a, b, _s) in lift_and_pair()) {
            let k = l.field().clone();
            let lhs = l.teichmuller(k.mul(&a, &b)).unwrap();
            let rhs = l.mul(&l.teichmuller(a).unwrap(), &l.teichmuller(b).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_of_units((l, a, b, s) in lift_and_pair()) {
            prop_assume!(a.0 != 0);
            let x = l.add(&l.standard_lift(a), &l.scale(&l.standard_lift(b), l.p() * (s % 7)));
            let y = l.inverse(&x).unwrap();
            prop_assert_eq!(l.mul(&x, &y), l.one());
        }

        #[test]
        fn ring_axioms((l, a, b, s) in lift_and_pair()) {
            let x = l.teichmuller(a).unwrap();
            let y = l.add(&l.standard_lift(b), &l.from_i64(s as i64 % 1000));
            let z = l.mul(&x, &y);
            prop_assert_eq!(l.mul(&x, &l.add(&y, &z)), l.add(&l.mul(&x, &y), &l.mul(&x, &z)));
            prop_assert_eq!(l.mul(&l.mul(&x, &y), &z), l.mul(&x, &l.mul(&y, &z)));
            prop_assert_eq!(l.add(&x, &l.neg(&x)), l.zero());
        }
    }
}
