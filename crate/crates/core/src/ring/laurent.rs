use num_bigint::BigInt;

use super::{Ring, TorsionFree};
use crate::{Error, Result};

/// A Laurent polynomial `sum_k c_k t^k`, stored densely from its lowest
/// exponent.
///
/// Both ends of `coeffs` are nonzero, so equal polynomials are structurally
/// equal. The zero polynomial has no coefficients and `lo == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<E> {
    lo: i64,
    coeffs: Vec<E>,
}

impl<E> LaurentPoly<E> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn lo(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn hi(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Option<&E> {
        if k < self.lo {
            return None;
        }
        self.coeffs.get((k - self.lo) as usize)
    }

    /// Stored `(exponent, coefficient)` pairs, including interior zeros.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &E)> {
        let lo = self.lo;
        self.coeffs.iter().enumerate().map(move |(i, c)| (lo + i as i64, c))
    }
}

/// A Laurent series known exactly in every exponent `<= order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<E> {
    pub poly: LaurentPoly<E>,
    pub order: i64,
}

impl<E> LaurentSeries<E> {
    pub fn exact(poly: LaurentPoly<E>) -> Self {
        LaurentSeries { poly, order: i64::MAX }
    }
}

/// Laurent polynomials `R[t, 1/t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<R> {
    base: R,
}

impl<R: Ring> Laurent<R> {
    pub fn new(base: R) -> Self {
        Laurent { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    /// Normalizes a dense coefficient run starting at `lo`.
    pub fn poly(&self, lo: i64, mut coeffs: Vec<R::Elem>) -> LaurentPoly<R::Elem> {
        while coeffs.last().is_some_and(|c| self.base.is_zero(c)) {
            coeffs.pop();
        }
        let skip = coeffs.iter().take_while(|c| self.base.is_zero(c)).count();
        if skip == coeffs.len() {
            return LaurentPoly { lo: 0, coeffs: Vec::new() };
        }
        coeffs.drain(..skip);
        LaurentPoly { lo: lo + skip as i64, coeffs }
    }

    /// Sums `(exponent, coefficient)` pairs.
    pub fn from_terms<I>(&self, terms: I) -> LaurentPoly<R::Elem>
    where
        I: IntoIterator<Item = (i64, R::Elem)>,
    {
        let terms: Vec<(i64, R::Elem)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return self.zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![self.base.zero(); (hi - lo + 1) as usize];
        for (k, c) in terms {
            let slot = &mut coeffs[(k - lo) as usize];
            *slot = self.base.add(slot, &c);
        }
        self.poly(lo, coeffs)
    }

    pub fn monomial(&self, c: R::Elem, k: i64) -> LaurentPoly<R::Elem> {
        self.poly(k, vec![c])
    }

    pub fn constant(&self, c: R::Elem) -> LaurentPoly<R::Elem> {
        self.monomial(c, 0)
    }

    /// The uniformizer `t`.
    pub fn t(&self) -> LaurentPoly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    /// `t`-adic valuation; zero has none.
    pub fn valuation(&self, x: &LaurentPoly<R::Elem>) -> Result<i64> {
        x.lo().ok_or(Error::ZeroElement)
    }

    pub fn leading(&self, x: &LaurentPoly<R::Elem>) -> Option<R::Elem> {
        x.coeffs.first().cloned()
    }

    /// Coefficient of `t^k`, zero when absent.
    pub fn coeff(&self, x: &LaurentPoly<R::Elem>, k: i64) -> R::Elem {
        x.coeff(k).cloned().unwrap_or_else(|| self.base.zero())
    }

    /// Coefficient of `t^{-1}`.
    pub fn residue(&self, x: &LaurentPoly<R::Elem>) -> R::Elem {
        self.coeff(x, -1)
    }

    pub fn truncate_above(&self, x: &LaurentPoly<R::Elem>, bound: i64) -> LaurentPoly<R::Elem> {
        match x.hi() {
            Some(hi) if hi > bound => {
                if bound < x.lo {
                    return self.zero();
                }
                let keep = (bound - x.lo + 1) as usize;
                self.poly(x.lo, x.coeffs[..keep].to_vec())
            }
            _ => x.clone(),
        }
    }

    /// The part of `x * y` with exponents `<= bound`.
    pub fn mul_upto(
        &self,
        x: &LaurentPoly<R::Elem>,
        y: &LaurentPoly<R::Elem>,
        bound: i64,
    ) -> LaurentPoly<R::Elem> {
        if x.is_zero() || y.is_zero() || x.lo + y.lo > bound {
            return self.zero();
        }
        let lo = x.lo + y.lo;
        let hi = (x.lo + x.coeffs.len() as i64 - 1 + y.lo + y.coeffs.len() as i64 - 1).min(bound);
        let len = (hi - lo + 1) as usize;
        let mut out = vec![self.base.zero(); len];
        for (i, a) in x.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if self.base.is_zero(a) {
                continue;
            }
            for (j, b) in y.coeffs.iter().enumerate().take(len - i) {
                let slot = &mut out[i + j];
                *slot = self.base.add(slot, &self.base.mul(a, b));
            }
        }
        self.poly(lo, out)
    }

    /// The part of `x^e` with exponents `<= bound`.
    ///
    /// Intermediate powers are truncated as tightly as the lowest exponent of
    /// the remaining factors allows.
    pub fn pow_upto(&self, x: &LaurentPoly<R::Elem>, e: u64, bound: i64) -> LaurentPoly<R::Elem> {
        if e == 0 {
            return self.truncate_above(&self.one(), bound);
        }
        if x.is_zero() {
            return self.zero();
        }
        let lo = x.lo as i128;
        let (e128, bound128) = (e as i128, bound as i128);
        let cap = |k: u64| -> i64 {
            (bound128 - (e128 - k as i128) * lo).clamp(i64::MIN as i128, i64::MAX as i128) as i64
        };
        let top = 63 - e.leading_zeros();
        let mut k = 1u64;
        let mut acc = self.truncate_above(x, cap(1));
        for bit in (0..top).rev() {
            acc = self.mul_upto(&acc, &acc, cap(2 * k));
            k *= 2;
            if (e >> bit) & 1 == 1 {
                acc = self.mul_upto(&acc, x, cap(k + 1));
                k += 1;
            }
        }
        acc
    }

    /// `x / y` when the quotient is again a Laurent polynomial.
    ///
    /// Needs the lowest coefficient of `y` to be invertible.
    pub fn div_exact(&self, x: &LaurentPoly<R::Elem>, y: &LaurentPoly<R::Elem>) -> Option<LaurentPoly<R::Elem>> {
        if y.is_zero() {
            return None;
        }
        if x.is_zero() {
            return Some(self.zero());
        }
        let inv = self.base.inverse(&y.coeffs[0])?;
        let len = x.coeffs.len().checked_sub(y.coeffs.len() - 1)?;
        let mut rem = x.coeffs.clone();
        let mut q = Vec::with_capacity(len);
        for i in 0..len {
            let c = self.base.mul(&rem[i], &inv);
            if !self.base.is_zero(&c) {
                for (j, d) in y.coeffs.iter().enumerate() {
                    let slot = &mut rem[i + j];
                    *slot = self.base.sub(slot, &self.base.mul(&c, d));
                }
            }
            q.push(c);
        }
        if rem.iter().any(|c| !self.base.is_zero(c)) {
            return None;
        }
        Some(self.poly(x.lo - y.lo, q))
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self, x: &LaurentPoly<R::Elem>) -> LaurentPoly<R::Elem> {
        let terms = x.terms().map(|(k, c)| (k - 1, self.base.mul_int(c, k)));
        let coeffs: Vec<R::Elem> = terms.map(|t| t.1).collect();
        self.poly(x.lo - 1, coeffs)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, x: &LaurentPoly<R::Elem>, k: i64) -> LaurentPoly<R::Elem> {
        if x.is_zero() {
            return self.zero();
        }
        LaurentPoly { lo: x.lo + k, coeffs: x.coeffs.clone() }
    }

    pub fn scale(&self, x: &LaurentPoly<R::Elem>, c: &R::Elem) -> LaurentPoly<R::Elem> {
        let coeffs = x.coeffs.iter().map(|a| self.base.mul(a, c)).collect();
        self.poly(x.lo, coeffs)
    }

    /// Applies `f` to every coefficient, landing in `target`.
    pub fn map_coeffs<S: Ring>(
        &self,
        x: &LaurentPoly<R::Elem>,
        target: &Laurent<S>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> LaurentPoly<S::Elem> {
        target.poly(x.lo, x.coeffs.iter().map(f).collect())
    }

    /// Fallible variant of [`Laurent::map_coeffs`].
    pub fn try_map_coeffs<S: Ring>(
        &self,
        x: &LaurentPoly<R::Elem>,
        target: &Laurent<S>,
        f: impl Fn(&R::Elem) -> Result<S::Elem>,
    ) -> Result<LaurentPoly<S::Elem>> {
        let coeffs = x.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(target.poly(x.lo, coeffs))
    }

    /// Splits a nonzero `x` as `c t^v u` with `u(0) = 1`; needs `c` invertible.
    fn unit_part(
        &self,
        x: &LaurentPoly<R::Elem>,
    ) -> Result<(i64, R::Elem, Vec<R::Elem>)> {
        let v = self.valuation(x)?;
        let c_inv = self.base.inverse(&x.coeffs[0]).ok_or(Error::NotAUnit)?;
        let u = x.coeffs.iter().map(|a| self.base.mul(a, &c_inv)).collect();
        Ok((v, c_inv, u))
    }

    /// Power-series inverse of `1 + u_1 t + ...` through degree `deg`.
    fn unit_inverse(&self, u: &[R::Elem], deg: i64) -> Vec<R::Elem> {
        if deg < 0 {
            return Vec::new();
        }
        let mut w: Vec<R::Elem> = Vec::with_capacity(deg as usize + 1);
        w.push(self.base.one());
        for m in 1..=deg as usize {
            let mut s = self.base.zero();
            for j in 1..=m.min(u.len() - 1) {
                s = self.base.add(&s, &self.base.mul(&u[j], &w[m - j]));
            }
            w.push(self.base.neg(&s));
        }
        w
    }

    /// `1/x`, exact through `t^order`.
    pub fn series_inverse(
        &self,
        x: &LaurentPoly<R::Elem>,
        order: i64,
    ) -> Result<LaurentSeries<R::Elem>> {
        let (v, c_inv, u) = self.unit_part(x)?;
        let w = self.unit_inverse(&u, order.saturating_add(v));
        let poly = self.scale(&self.poly(-v, w), &c_inv);
        Ok(LaurentSeries { poly, order })
    }

    /// `(dx/dt) / x`, exact through `t^order`.
    pub fn dlog_series(
        &self,
        x: &LaurentPoly<R::Elem>,
        order: i64,
    ) -> Result<LaurentSeries<R::Elem>> {
        let (v, _, u) = self.unit_part(x)?;
        let du = self.derivative(&self.poly(0, u.clone()));
        let w = self.poly(0, self.unit_inverse(&u, order));
        let mut poly = self.mul_upto(&du, &w, order);
        if order >= -1 {
            poly = self.add(&poly, &self.monomial(self.base.from_i64(v), -1));
        }
        Ok(LaurentSeries { poly, order })
    }

    /// Product of an exact polynomial with a series.
    pub fn series_mul(
        &self,
        x: &LaurentPoly<R::Elem>,
        s: &LaurentSeries<R::Elem>,
    ) -> LaurentSeries<R::Elem> {
        let Some(lo) = x.lo() else {
            return LaurentSeries::exact(self.zero());
        };
        let order = s.order.saturating_add(lo);
        LaurentSeries { poly: self.mul_upto(x, &s.poly, order), order }
    }

    /// Coefficient of `t^{-1}` of a series known at least that far.
    pub fn series_residue(&self, s: &LaurentSeries<R::Elem>) -> Result<R::Elem> {
        if s.order < -1 {
            return Err(Error::InsufficientOrder { needed: -1, have: s.order });
        }
        Ok(self.residue(&s.poly))
    }
}

impl<R: Ring> Ring for Laurent<R> {
    type Elem = LaurentPoly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }

    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.is_zero()
    }

    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        if x.is_zero() {
            return y.clone();
        }
        if y.is_zero() {
            return x.clone();
        }
        let lo = x.lo.min(y.lo);
        let hi = x.hi().unwrap().max(y.hi().unwrap());
        let mut out = vec![self.base.zero(); (hi - lo + 1) as usize];
        for (k, c) in x.terms() {
            out[(k - lo) as usize] = c.clone();
        }
        for (k, c) in y.terms() {
            let slot = &mut out[(k - lo) as usize];
            *slot = self.base.add(slot, c);
        }
        self.poly(lo, out)
    }

    fn neg(&self, x: &Self::Elem) -> Self::Elem {
        LaurentPoly { lo: x.lo, coeffs: x.coeffs.iter().map(|c| self.base.neg(c)).collect() }
    }

    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        self.mul_upto(x, y, i64::MAX)
    }

    fn from_bigint(&self, c: &BigInt) -> Self::Elem {
        self.constant(self.base.from_bigint(c))
    }

    fn from_i64(&self, c: i64) -> Self::Elem {
        self.constant(self.base.from_i64(c))
    }

    fn char_p(&self) -> Option<u64> {
        self.base.char_p()
    }

    /// Exact inverse; only monomials with unit coefficient qualify.
    fn inverse(&self, x: &Self::Elem) -> Option<Self::Elem> {
        if x.coeffs.len() != 1 {
            return None;
        }
        let c = self.base.inverse(&x.coeffs[0])?;
        Some(self.monomial(c, -x.lo))
    }

    fn pow(&self, x: &Self::Elem, e: u64) -> Self::Elem {
        if let Some(p) = self.char_p() {
            if e > 0 && e % p == 0 {
                return self.frobenius(&self.pow(x, e / p));
            }
        }
        self.pow_upto(x, e, i64::MAX)
    }

    fn frobenius(&self, x: &Self::Elem) -> Self::Elem {
        let p = self.char_p().expect("frobenius requires characteristic p") as usize;
        if x.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.base.zero(); (x.coeffs.len() - 1) * p + 1];
        for (i, c) in x.coeffs.iter().enumerate() {
            out[i * p] = self.base.frobenius(c);
        }
        self.poly(x.lo * p as i64, out)
    }
}

impl<R: TorsionFree> TorsionFree for Laurent<R> {
    fn div_p_pow(&self, x: &Self::Elem, p: u64, k: u32) -> Option<Self::Elem> {
        let coeffs = x
            .coeffs
            .iter()
            .map(|c| self.base.div_p_pow(c, p, k))
            .collect::<Option<Vec<_>>>()?;
        Some(self.poly(x.lo, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteField, Fq, LiftRing};
    use proptest::prelude::*;

    fn over(p: u64) -> Laurent<FiniteField> {
        Laurent::new(FiniteField::prime(p).unwrap())
    }

    fn lp(l: &Laurent<FiniteField>, lo: i64, cs: &[u32]) -> LaurentPoly<Fq> {
        l.poly(lo, cs.iter().map(|&c| Fq(c)).collect())
    }

    #[test]
    fn exact_division() {
        let k = Laurent::new(FiniteField::prime(3).unwrap());
        let x = k.from_terms([(-2, Fq(1)), (0, Fq(2)), (3, Fq(1))]);
        let y = k.from_terms([(-1, Fq(2)), (1, Fq(1))]);
        let xy = k.mul(&x, &y);
        assert_eq!(k.div_exact(&xy, &y), Some(x.clone()));
        assert_eq!(k.div_exact(&k.add(&xy, &k.one()), &y), None);
        assert_eq!(k.div_exact(&y, &xy), None);
        assert_eq!(k.div_exact(&x, &k.zero()), None);
    }

    #[test]
    fn distributes_over_f3() {
        let l = over(3);
        let x = lp(&l, -1, &[1, 1]);
        assert_eq!(l.mul(&x, &l.t()), lp(&l, 0, &[1, 1]));
    }

    #[test]
    fn monomial_inverse() {
        let l = over(2);
        assert_eq!(l.inverse(&lp(&l, 3, &[1])), Some(lp(&l, -3, &[1])));
        assert_eq!(l.inverse(&lp(&l, 0, &[1, 1])), None);
    }

    #[test]
    fn geometric_series() {
        let l = over(2);
        let s = l.series_inverse(&lp(&l, 0, &[1, 1]), 3).unwrap();
        assert_eq!(s.poly, lp(&l, 0, &[1, 1, 1, 1]));
    }

    #[test]
    fn frobenius_in_char_two() {
        let l = over(2);
        assert_eq!(l.frobenius(&lp(&l, 0, &[1, 1])), lp(&l, 0, &[1, 0, 1]));
    }

    #[test]
    fn dlog_examples() {
        let l = over(2);
        assert_eq!(l.dlog_series(&l.t(), 5).unwrap().poly, lp(&l, -1, &[1]));
        assert!(l.dlog_series(&lp(&l, 0, &[1]), 5).unwrap().poly.is_zero());
        assert_eq!(l.dlog_series(&lp(&l, 0, &[1, 1]), 2).unwrap().poly, lp(&l, 0, &[1, 1, 1]));
        assert_eq!(l.dlog_series(&l.zero(), 2), Err(Error::ZeroElement));
    }

    #[test]
    fn residues() {
        let l = over(5);
        let tinv = lp(&l, -1, &[1]);
        assert_eq!(l.series_residue(&LaurentSeries::exact(tinv)).unwrap(), Fq(1));
        assert_eq!(l.residue(&lp(&l, 0, &[1, 2, 3])), Fq(0));
        let short = LaurentSeries { poly: l.zero(), order: -2 };
        assert_eq!(
            l.series_residue(&short),
            Err(Error::InsufficientOrder { needed: -1, have: -2 })
        );

        let z9 = Laurent::new(LiftRing::new(&FiniteField::prime(3).unwrap(), 2).unwrap());
        let base = z9.base().clone();
        let x = z9.poly(-2, vec![base.one(), base.from_i64(3)]);
        assert_eq!(z9.residue(&x), base.from_i64(3));
    }

    fn poly_strategy(p: u64) -> impl Strategy<Value = LaurentPoly<Fq>> {
        (-4i64..3, prop::collection::vec(0..p as u32, 0..7)).prop_map(move |(lo, cs)| {
            let l = over(p);
            lp(&l, lo, &cs)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(3), b in poly_strategy(3), c in poly_strategy(3)) {
            let l = over(3);
            prop_assert_eq!(l.mul(&l.mul(&a, &b), &c), l.mul(&a, &l.mul(&b, &c)));
            prop_assert_eq!(l.mul(&a, &l.add(&b, &c)), l.add(&l.mul(&a, &b), &l.mul(&a, &c)));
            prop_assert_eq!(l.add(&a, &b), l.add(&b, &a));
            prop_assert_eq!(l.add(&a, &l.neg(&a)), l.zero());
        }

        #[test]
        fn truncated_powers_agree(a in poly_strategy(2), e in 0u64..10, bound in -10i64..6) {
            let l = over(2);
            let full = l.pow_upto(&a, e, i64::MAX);
            prop_assert_eq!(l.pow_upto(&a, e, bound), l.truncate_above(&full, bound));
            prop_assert_eq!(full, l.pow(&a, e));
        }

        #[test]
        fn residue_of_dlog_is_valuation(b in poly_strategy(5)) {
            prop_assume!(!b.is_zero());
            let l = over(5);
            let v = l.valuation(&b).unwrap();
            let s = l.dlog_series(&b, 3).unwrap();
            prop_assert_eq!(l.series_residue(&s).unwrap(), l.base().from_i64(v));
        }

        #[test]
        fn series_inverse_is_inverse(b in poly_strategy(3), order in -3i64..5) {
            prop_assume!(!b.is_zero());
            let l = over(3);
            let s = l.series_inverse(&b, order).unwrap();
            let prod = l.series_mul(&b, &s);
            let one = l.truncate_above(&l.one(), prod.order);
            prop_assert_eq!(l.truncate_above(&prod.poly, prod.order), one);
        }
    }
}
