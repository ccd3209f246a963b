//! Witt covectors `CW(K)`, the direct limit of `W_1 -> W_2 -> ...` along `V`.

use crate::ring::Ring;
use crate::witt::{WittRing, WittVector};
use crate::{Error, Result};

/// A covector `(..., a_{-2}, a_{-1}, a_0)` stored as its minimal window.
///
/// The last window entry sits at index 0. The window never starts with a
/// zero, so equal covectors have equal windows; the zero covector has an
/// empty window.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Covector<E> {
    window: Vec<E>,
}

impl<E> Covector<E> {
    pub fn window(&self) -> &[E] {
        &self.window
    }

    /// Length of the minimal window: the least `n` with the covector in the
    /// image of `psi_n`.
    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_zero(&self) -> bool {
        self.window.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    /// Entry at index `i <= 0`.
    pub fn entry(&self, i: i64) -> Option<&E> {
        if i > 0 {
            return None;
        }
        let k = self.window.len() as i64 - 1 + i;
        if k < 0 {
            None
        } else {
            self.window.get(k as usize)
        }
    }
}

/// Arithmetic on `CW(R)` for a ring `R` of characteristic `p`.
///
/// Sums are formed in `W_m` for a common window length `m`, which must not
/// exceed the capacity of the underlying Witt ring.
#[derive(Clone, Debug)]
pub struct CovectorGroup<R: Ring> {
    witt: WittRing<R>,
}

impl<R: Ring> CovectorGroup<R> {
    pub fn new(witt: WittRing<R>) -> Result<Self> {
        if witt.base().char_p().is_none() {
            return Err(Error::NotCharacteristicP);
        }
        Ok(CovectorGroup { witt })
    }

    pub fn witt(&self) -> &WittRing<R> {
        &self.witt
    }

    fn base(&self) -> &R {
        self.witt.base()
    }

    pub fn zero(&self) -> Covector<R::Elem> {
        Covector { window: Vec::new() }
    }

    /// Canonical covector from any window ending at index 0.
    pub fn from_window(&self, window: Vec<R::Elem>) -> Covector<R::Elem> {
        let skip = window.iter().take_while(|c| self.base().is_zero(c)).count();
        Covector { window: window[skip..].to_vec() }
    }

    /// `psi_n : W_n -> CW`.
    pub fn psi(&self, a: &WittVector<R::Elem>) -> Covector<R::Elem> {
        self.from_window(a.coords().to_vec())
    }

    /// The representative of `x` in `W_m`, padding the window with zeros on
    /// the left. Fails when `m` is shorter than the minimal window.
    pub fn lift(&self, x: &Covector<R::Elem>, m: usize) -> Result<WittVector<R::Elem>> {
        if m < x.len() {
            return Err(Error::LengthOutOfRange(m));
        }
        let mut coords = vec![self.base().zero(); m - x.len()];
        coords.extend(x.window.iter().cloned());
        Ok(WittVector::new(coords))
    }

    pub fn add(&self, x: &Covector<R::Elem>, y: &Covector<R::Elem>) -> Result<Covector<R::Elem>> {
        self.add_at(x, y, x.len().max(y.len()))
    }

    /// Sum computed in `W_m`.
    pub fn add_at(&self, x: &Covector<R::Elem>, y: &Covector<R::Elem>, m: usize) -> Result<Covector<R::Elem>> {
        if x.is_zero() {
            return Ok(y.clone());
        }
        if y.is_zero() {
            return Ok(x.clone());
        }
        let s = self.witt.add(&self.lift(x, m)?, &self.lift(y, m)?)?;
        Ok(self.psi(&s))
    }

    pub fn neg(&self, x: &Covector<R::Elem>) -> Result<Covector<R::Elem>> {
        if x.is_zero() {
            return Ok(x.clone());
        }
        Ok(self.psi(&self.witt.neg(&self.lift(x, x.len())?)?))
    }

    pub fn sub(&self, x: &Covector<R::Elem>, y: &Covector<R::Elem>) -> Result<Covector<R::Elem>> {
        self.add(x, &self.neg(y)?)
    }

    /// `F(..., a_{-1}, a_0) = (..., a_{-1}^p, a_0^p)`.
    pub fn frobenius(&self, x: &Covector<R::Elem>) -> Covector<R::Elem> {
        Covector { window: x.window.iter().map(|c| self.base().frobenius(c)).collect() }
    }

    /// `V(..., a_{-2}, a_{-1}, a_0) = (..., a_{-2}, a_{-1})`.
    pub fn verschiebung(&self, x: &Covector<R::Elem>) -> Covector<R::Elem> {
        let mut window = x.window.clone();
        window.pop();
        Covector { window }
    }

    /// `wp = F - 1`.
    pub fn artin_schreier(&self, x: &Covector<R::Elem>) -> Result<Covector<R::Elem>> {
        self.sub(&self.frobenius(x), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{FiniteField, Fq, Laurent};
    use proptest::prelude::*;

    fn group() -> CovectorGroup<FiniteField> {
        CovectorGroup::new(WittRing::new(FiniteField::prime(2).unwrap(), 2, 4).unwrap()).unwrap()
    }

    fn wv(cs: &[u32]) -> WittVector<Fq> {
        WittVector::new(cs.iter().map(|&c| Fq(c)).collect())
    }

    #[test]
    fn psi_is_compatible_with_v() {
        let g = group();
        let f4 = FiniteField::gf(2, 2).unwrap();
        let g4 = CovectorGroup::new(WittRing::new(f4.clone(), 2, 2).unwrap()).unwrap();
        let c = f4.generator();
        let a = WittVector::new(vec![Fq(0), c]);
        let b = WittVector::new(vec![c]);
        assert_eq!(g4.psi(&a), g4.psi(&b));
        assert_eq!(g4.psi(&b).window(), &[c]);
        assert!(g.psi(&wv(&[0, 0])).is_zero());
        assert_eq!(g.psi(&wv(&[1, 0, 1])).window(), &[Fq(1), Fq(0), Fq(1)]);
        assert_eq!(g.psi(&wv(&[1, 0, 1])).entry(-2), Some(&Fq(1)));
    }

    #[test]
    fn shift_drops_index_zero() {
        let g = group();
        let x = g.from_window(vec![Fq(1), Fq(0)]);
        assert_eq!(g.verschiebung(&x).window(), &[Fq(1)]);
        assert!(g.frobenius(&g.zero()).is_zero());
    }

    #[test]
    fn rejects_char_zero() {
        let w = WittRing::new(crate::Integers::default(), 2, 2).unwrap();
        assert!(matches!(CovectorGroup::new(w), Err(Error::NotCharacteristicP)));
    }

    fn arb_window(max: usize) -> impl Strategy<Value = Vec<Fq>> {
        prop::collection::vec(0u32..2, 0..=max).prop_map(|v| v.into_iter().map(Fq).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn sum_is_independent_of_lift_length(x in arb_window(2), y in arb_window(2)) {
            let g = group();
            let (x, y) = (g.from_window(x), g.from_window(y));
            let m = x.len().max(y.len()).max(1);
            prop_assert_eq!(g.add_at(&x, &y, m).unwrap(), g.add_at(&x, &y, m + 2).unwrap());
        }

        #[test]
        fn group_axioms(x in arb_window(3), y in arb_window(3), z in arb_window(3)) {
            let g = group();
            let (x, y, z) = (g.from_window(x), g.from_window(y), g.from_window(z));
            let l = g.add(&g.add(&x, &y).unwrap(), &z).unwrap();
            let r = g.add(&x, &g.add(&y, &z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(g.add(&x, &y).unwrap(), g.add(&y, &x).unwrap());
            prop_assert!(g.add(&x, &g.neg(&x).unwrap()).unwrap().is_zero());
        }

        #[test]
        fn psi_is_additive_and_commutes_with_f_v(a in arb_window(3), b in arb_window(3)) {
            let g = group();
            let n = 3;
            let pad = |v: Vec<Fq>| {
                let mut w = vec![Fq(0); n - v.len()];
                w.extend(v);
                WittVector::new(w)
            };
            let (a, b) = (pad(a), pad(b));
            let w = g.witt();
            prop_assert_eq!(g.psi(&w.add(&a, &b).unwrap()), g.add(&g.psi(&a), &g.psi(&b)).unwrap());
            prop_assert_eq!(g.psi(&w.frobenius(&a).unwrap()), g.frobenius(&g.psi(&a)));
            let va = w.verschiebung(&a, n + 1).unwrap();
            prop_assert_eq!(g.psi(&va), g.psi(&a));
            let vt = w.verschiebung(&a, n).unwrap();
            prop_assert_eq!(g.psi(&vt), g.verschiebung(&g.psi(&a)));
        }
    }

    #[test]
    fn laurent_covectors() {
        let l = Laurent::new(FiniteField::prime(3).unwrap());
        let g = CovectorGroup::new(WittRing::new(l.clone(), 3, 2).unwrap()).unwrap();
        let x = g.from_window(vec![l.t(), l.one()]);
        let fx = g.frobenius(&x);
        assert_eq!(fx.window()[0], l.pow(&l.t(), 3));
        assert!(g.add(&x, &g.neg(&x).unwrap()).unwrap().is_zero());
    }
}
