//! Coefficient rings underneath the Witt functor.

mod descriptor;
mod finite;
mod laurent;
mod lift;
mod num;

use std::fmt::Debug;

use num_bigint::BigInt;

pub use descriptor::{
    invert, ring_arith, AnyRing, ArithOp, Codec, Coeff, Payload, RingDescriptor, RingElement, RingKind,
};
pub use finite::{FiniteField, Fq};
pub use laurent::{Laurent, LaurentPoly, LaurentSeries};
pub use lift::{LiftElem, LiftRing, MAX_LIFT_DEGREE};
pub use num::{NumRing, Scalar};

/// A commutative ring with an explicit element type.
///
/// Ring values are cheap handles; elements carry no reference to their ring,
/// so every operation goes through the ring.
pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.add(x, &self.neg(y))
    }

    /// Image of an integer under the structure map `Z -> R`.
    fn from_bigint(&self, c: &BigInt) -> Self::Elem;

    fn from_i64(&self, c: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(c))
    }

    /// `Some(p)` when the ring has prime characteristic `p`.
    fn char_p(&self) -> Option<u64>;

    fn inverse(&self, x: &Self::Elem) -> Option<Self::Elem>;

    fn pow(&self, x: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `x^p` for rings of characteristic `p`.
    ///
    /// Callers must check [`Ring::char_p`] first; the default panics on
    /// rings without prime characteristic.
    fn frobenius(&self, x: &Self::Elem) -> Self::Elem {
        let p = self
            .char_p()
            .expect("frobenius requires a ring of characteristic p");
        self.pow(x, p)
    }

    fn mul_int(&self, x: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(x, &self.from_i64(k))
    }

    fn sum<'a, I>(&self, xs: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Rings in which division by powers of `p` can be attempted exactly.
pub trait TorsionFree: Ring {
    /// Exact quotient `x / p^k`, or `None` when `x` is not divisible.
    fn div_p_pow(&self, x: &Self::Elem, p: u64, k: u32) -> Option<Self::Elem>;
}

/// `c^{p^k}` in a ring of characteristic `p`.
pub fn frobenius_power<R: Ring>(ring: &R, c: &R::Elem, k: u32) -> crate::Result<R::Elem> {
    if ring.char_p().is_none() {
        return Err(crate::Error::NotCharacteristicP);
    }
    let mut x = c.clone();
    for _ in 0..k {
        x = ring.frobenius(&x);
    }
    Ok(x)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `p^k`, or `None` on overflow.
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    p.checked_pow(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn frobenius_power_rejects_char_zero() {
        let z = crate::Integers::default();
        assert_eq!(
            frobenius_power(&z, &BigInt::from(3), 1),
            Err(crate::Error::NotCharacteristicP)
        );
    }
}
