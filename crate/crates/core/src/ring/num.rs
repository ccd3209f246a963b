use std::fmt::Debug;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

use super::{Ring, TorsionFree};

/// Exact characteristic-zero scalars.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + Num + Signed {
    fn from_bigint(c: &BigInt) -> Self;

    /// `self / d` when the quotient is again a scalar of this type.
    fn div_exact(&self, d: &BigInt) -> Option<Self>;

    /// The value as an integer, when it is one.
    fn to_bigint(&self) -> Option<BigInt>;

    fn is_unit(&self) -> bool;
}

impl Scalar for BigInt {
    fn from_bigint(c: &BigInt) -> Self {
        c.clone()
    }

    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    fn to_bigint(&self) -> Option<BigInt> {
        Some(self.clone())
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl Scalar for BigRational {
    fn from_bigint(c: &BigInt) -> Self {
        BigRational::from_integer(c.clone())
    }

    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        (!d.is_zero()).then(|| self / BigRational::from_integer(d.clone()))
    }

    fn to_bigint(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.to_integer())
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

/// The ring of a [`Scalar`] type: `Z` for `BigInt`, `Q` for `BigRational`.
pub struct NumRing<T>(PhantomData<T>);

impl<T> NumRing<T> {
    pub const fn new() -> Self {
        NumRing(PhantomData)
    }
}

impl<T> Default for NumRing<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Clone for NumRing<T> {
    fn clone(&self) -> Self {
        Self::new()
    }
}

impl<T> Copy for NumRing<T> {}

impl<T> PartialEq for NumRing<T> {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl<T> Debug for NumRing<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NumRing<{}>", std::any::type_name::<T>())
    }
}

impl<T: Scalar> Ring for NumRing<T> {
    type Elem = T;

    fn zero(&self) -> T {
        T::zero()
    }

    fn one(&self) -> T {
        T::one()
    }

    fn is_zero(&self, x: &T) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &T, y: &T) -> T {
        x.clone() + y.clone()
    }

    fn neg(&self, x: &T) -> T {
        T::zero() - x.clone()
    }

    fn sub(&self, x: &T, y: &T) -> T {
        x.clone() - y.clone()
    }

    fn mul(&self, x: &T, y: &T) -> T {
        x.clone() * y.clone()
    }

    fn from_bigint(&self, c: &BigInt) -> T {
        T::from_bigint(c)
    }

    fn char_p(&self) -> Option<u64> {
        None
    }

    fn inverse(&self, x: &T) -> Option<T> {
        x.is_unit().then(|| T::one() / x.clone())
    }
}

impl<T: Scalar> TorsionFree for NumRing<T> {
    fn div_p_pow(&self, x: &T, p: u64, k: u32) -> Option<T> {
        x.div_exact(&BigInt::from(p).pow(k))
    }
}
