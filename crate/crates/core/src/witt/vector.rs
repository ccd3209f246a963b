use std::fmt;
use std::sync::Arc;

use crate::ring::{FiniteField, LiftRing, Ring, TorsionFree};
use crate::witt::poly::{universal_polys, IntPoly, UniversalPolySet};
use crate::{Budget, Error, Result};

/// A truncated Witt vector `(a_0, ..., a_{n-1})`.
///
/// The empty vector is the unique element of `W_0`, usable only as a
/// truncation target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector<E> {
    coords: Vec<E>,
}

impl<E> WittVector<E> {
    pub fn new(coords: Vec<E>) -> Self {
        WittVector { coords }
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<E> {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Universal polynomial with coefficients pushed into the target ring,
/// terms in lexicographic exponent order.
struct Compiled<E> {
    terms: Vec<(Vec<u32>, E)>,
}

struct Tables<E> {
    add: Vec<Compiled<E>>,
    mul: Vec<Compiled<E>>,
    neg: Vec<Compiled<E>>,
    frob: Vec<Compiled<E>>,
}

/// `W_n(R)`.
///
/// A ring built for length `n` also serves every `W_m` with `m <= n`: the
/// universal polynomials for `W_m` are a prefix of those for `W_n`.
/// Operations take operands of one common length in `1..=n`.
pub struct WittRing<R: Ring> {
    base: R,
    p: u64,
    n: usize,
    polys: Arc<UniversalPolySet>,
    tables: Arc<Tables<R::Elem>>,
}

impl<R: Ring> Clone for WittRing<R> {
    fn clone(&self) -> Self {
        WittRing {
            base: self.base.clone(),
            p: self.p,
            n: self.n,
            polys: self.polys.clone(),
            tables: self.tables.clone(),
        }
    }
}

impl<R: Ring> fmt::Debug for WittRing<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({:?}) at p = {}", self.n, self.base, self.p)
    }
}

impl<R: Ring> PartialEq for WittRing<R> {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.base == other.base
    }
}

/// Cached powers of the input variables during one evaluation.
struct Powers<'a, R: Ring> {
    base: &'a R,
    vars: &'a [R::Elem],
    cache: Vec<Vec<(u32, R::Elem)>>,
}

impl<'a, R: Ring> Powers<'a, R> {
    fn new(base: &'a R, vars: &'a [R::Elem]) -> Self {
        Powers { base, vars, cache: vec![Vec::new(); vars.len()] }
    }

    fn get(&mut self, v: usize, e: u32) -> R::Elem {
        if e == 1 {
            return self.vars[v].clone();
        }
        if let Some((_, x)) = self.cache[v].iter().find(|(k, _)| *k == e) {
            return x.clone();
        }
        let x = self.base.pow(&self.vars[v], e as u64);
        self.cache[v].push((e, x.clone()));
        x
    }
}

impl<R: Ring> WittRing<R> {
    pub fn new(base: R, p: u64, n: usize) -> Result<Self> {
        Self::with_budget(base, p, n, &Budget::default())
    }

    pub fn with_budget(base: R, p: u64, n: usize, budget: &Budget) -> Result<Self> {
        if let Some(q) = base.char_p() {
            if q != p {
                return Err(Error::InvalidRing(format!(
                    "coefficient ring has characteristic {q}, not {p}"
                )));
            }
        }
        let polys = universal_polys(p, n, budget)?;
        let compile = |ps: &[IntPoly]| -> Vec<Compiled<R::Elem>> {
            ps.iter()
                .map(|poly| Compiled {
                    terms: poly
                        .terms()
                        .map(|(e, c)| (e.clone(), base.from_bigint(c)))
                        .filter(|(_, c)| !base.is_zero(c))
                        .collect(),
                })
                .collect()
        };
        let tables = Tables {
            add: compile(&polys.add),
            mul: compile(&polys.mul),
            neg: compile(&polys.neg),
            frob: compile(&polys.frob),
        };
        Ok(WittRing { base, p, n, polys, tables: Arc::new(tables) })
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Largest length this ring serves.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &UniversalPolySet {
        &self.polys
    }

    fn check(&self, a: &WittVector<R::Elem>) -> Result<usize> {
        let m = a.len();
        if m == 0 || m > self.n {
            return Err(Error::ShapeMismatch {
                expected: format!("length in 1..={}", self.n),
                found: format!("length {m}"),
            });
        }
        Ok(m)
    }

    fn check_pair(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<usize> {
        let m = self.check(a)?;
        if b.len() != m {
            return Err(Error::ShapeMismatch {
                expected: format!("length {m}"),
                found: format!("length {}", b.len()),
            });
        }
        Ok(m)
    }

    pub fn zero(&self) -> WittVector<R::Elem> {
        self.zero_len(self.n)
    }

    pub fn zero_len(&self, m: usize) -> WittVector<R::Elem> {
        WittVector::new(vec![self.base.zero(); m])
    }

    pub fn one(&self) -> WittVector<R::Elem> {
        self.teichmuller(self.base.one())
    }

    pub fn one_len(&self, m: usize) -> WittVector<R::Elem> {
        self.teichmuller_len(self.base.one(), m)
    }

    /// `[c] = (c, 0, ..., 0)`.
    pub fn teichmuller(&self, c: R::Elem) -> WittVector<R::Elem> {
        self.teichmuller_len(c, self.n)
    }

    pub fn teichmuller_len(&self, c: R::Elem, m: usize) -> WittVector<R::Elem> {
        let mut v = vec![self.base.zero(); m];
        if m > 0 {
            v[0] = c;
        }
        WittVector::new(v)
    }

    pub fn is_zero(&self, a: &WittVector<R::Elem>) -> bool {
        a.coords.iter().all(|c| self.base.is_zero(c))
    }

    /// Evaluates the first `m` polynomials of `table` at `vars`.
    fn eval(&self, table: &[Compiled<R::Elem>], m: usize, vars: &[R::Elem]) -> Vec<R::Elem> {
        let mut powers = Powers::new(&self.base, vars);
        table[..m]
            .iter()
            .map(|poly| self.eval_group(&poly.terms, 0, vars, &mut powers))
            .collect()
    }

    /// Horner-style evaluation: terms sharing an exponent of variable `v`
    /// are summed first and multiplied by that power once.
    fn eval_group(
        &self,
        terms: &[(Vec<u32>, R::Elem)],
        v: usize,
        vars: &[R::Elem],
        powers: &mut Powers<'_, R>,
    ) -> R::Elem {
        let base = &self.base;
        if terms.is_empty() {
            return base.zero();
        }
        if v == terms[0].0.len() || v >= vars.len() {
            return base.sum(terms.iter().map(|t| &t.1));
        }
        let mut acc = base.zero();
        let mut i = 0;
        while i < terms.len() {
            let e = terms[i].0[v];
            let j = i + terms[i..].iter().take_while(|t| t.0[v] == e).count();
            if e == 0 || !base.is_zero(&vars[v]) {
                let sub = self.eval_group(&terms[i..j], v + 1, vars, powers);
                if !base.is_zero(&sub) {
                    let term = if e == 0 { sub } else { base.mul(&powers.get(v, e), &sub) };
                    acc = base.add(&acc, &term);
                }
            }
            i = j;
        }
        acc
    }

    fn interleave(a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Vec<R::Elem> {
        a.coords
            .iter()
            .zip(&b.coords)
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect()
    }

    pub fn add(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check_pair(a, b)?;
        if self.is_zero(a) {
            return Ok(b.clone());
        }
        if self.is_zero(b) {
            return Ok(a.clone());
        }
        let vars = Self::interleave(a, b);
        Ok(WittVector::new(self.eval(&self.tables.add, m, &vars)))
    }

    pub fn neg(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check(a)?;
        if self.p != 2 {
            return Ok(WittVector::new(a.coords.iter().map(|c| self.base.neg(c)).collect()));
        }
        Ok(WittVector::new(self.eval(&self.tables.neg, m, &a.coords)))
    }

    pub fn sub(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check_pair(a, b)?;
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check_pair(a, b)?;
        if self.is_zero(a) || self.is_zero(b) {
            return Ok(self.zero_len(m));
        }
        let vars = Self::interleave(a, b);
        Ok(WittVector::new(self.eval(&self.tables.mul, m, &vars)))
    }

    /// `k * a` by doubling and adding.
    pub fn mul_int(&self, a: &WittVector<R::Elem>, k: i64) -> Result<WittVector<R::Elem>> {
        let m = self.check(a)?;
        let mut acc = self.zero_len(m);
        let mut base = a.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.add(&base, &base)?;
            }
        }
        if k < 0 {
            acc = self.neg(&acc)?;
        }
        Ok(acc)
    }

    /// Witt Frobenius.
    ///
    /// In characteristic `p` this is the coordinatewise `p`-th power. Other
    /// rings use the universal polynomials `Fr`, which need one more input
    /// coordinate than they return; the vector is read with `a_m = 0`.
    pub fn frobenius(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        let m = self.check(a)?;
        if self.base.char_p().is_some() {
            return Ok(WittVector::new(a.coords.iter().map(|c| self.base.frobenius(c)).collect()));
        }
        let mut vars = a.coords.clone();
        vars.push(self.base.zero());
        Ok(WittVector::new(self.eval(&self.tables.frob, m, &vars)))
    }

    pub fn frobenius_pow(&self, a: &WittVector<R::Elem>, k: u32) -> Result<WittVector<R::Elem>> {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.frobenius(&x)?;
        }
        Ok(x)
    }

    /// Verschiebung into length `target`: `target = len + 1` is the
    /// extending map `W_m -> W_{m+1}`, `target = len` the truncated shift
    /// `W_m -> W_m` that drops the last coordinate.
    pub fn verschiebung(&self, a: &WittVector<R::Elem>, target: usize) -> Result<WittVector<R::Elem>> {
        let m = a.len();
        if target != m && target != m + 1 {
            return Err(Error::LengthOutOfRange(target));
        }
        let mut v = Vec::with_capacity(target);
        v.push(self.base.zero());
        v.extend(a.coords.iter().take(target - 1).cloned());
        Ok(WittVector::new(v))
    }

    /// `V^k` with every step extending (`extend = true`) or truncated.
    pub fn verschiebung_pow(&self, a: &WittVector<R::Elem>, k: usize, extend: bool) -> Result<WittVector<R::Elem>> {
        let mut x = a.clone();
        for _ in 0..k {
            let target = if extend { x.len() + 1 } else { x.len() };
            x = self.verschiebung(&x, target)?;
        }
        Ok(x)
    }

    /// `a[b] = (a_0 b, a_1 b^p, a_2 b^{p^2}, ...)`.
    pub fn scale_teich(&self, a: &WittVector<R::Elem>, b: &R::Elem) -> WittVector<R::Elem> {
        let mut bp = b.clone();
        let mut out = Vec::with_capacity(a.len());
        for (i, c) in a.coords.iter().enumerate() {
            if i > 0 {
                bp = self.base.pow(&bp, self.p);
            }
            out.push(self.base.mul(c, &bp));
        }
        WittVector::new(out)
    }

    /// `wp = F - 1`.
    pub fn artin_schreier(&self, a: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        if self.base.char_p().is_none() {
            return Err(Error::NotCharacteristicP);
        }
        self.sub(&self.frobenius(a)?, a)
    }

    /// First `m` coordinates; `m = 0` gives the element of `W_0`.
    pub fn truncate(&self, a: &WittVector<R::Elem>, m: usize) -> Result<WittVector<R::Elem>> {
        if m > a.len() {
            return Err(Error::LengthOutOfRange(m));
        }
        Ok(WittVector::new(a.coords[..m].to_vec()))
    }

    /// `x_0, ..., x_{m-1}` with `a = sum_i V^i [x_i]`.
    pub fn teich_decompose(&self, a: &WittVector<R::Elem>) -> Result<Vec<R::Elem>> {
        self.check(a)?;
        let mut xs = Vec::with_capacity(a.len());
        let mut cur = a.clone();
        while !cur.is_empty() {
            let x = cur.coords[0].clone();
            let rest = self.sub(&cur, &self.teichmuller_len(x.clone(), cur.len()))?;
            debug_assert!(self.base.is_zero(&rest.coords[0]));
            xs.push(x);
            cur = WittVector::new(rest.coords[1..].to_vec());
        }
        Ok(xs)
    }

    /// `sum_i V^i [x_i]` in `W_m`, `m = xs.len()`.
    pub fn reconstruct(&self, xs: &[R::Elem]) -> Result<WittVector<R::Elem>> {
        let m = xs.len();
        let mut acc = self.zero_len(m);
        self.check(&acc)?;
        for (i, x) in xs.iter().enumerate() {
            let mut v = vec![self.base.zero(); m];
            v[i] = x.clone();
            acc = self.add(&acc, &WittVector::new(v))?;
        }
        Ok(acc)
    }
}

impl<R: TorsionFree> WittRing<R> {
    pub fn ghost(&self, a: &WittVector<R::Elem>) -> Result<Vec<R::Elem>> {
        self.check(a)?;
        ghost(&self.base, self.p, a)
    }

    pub fn from_ghost(&self, g: &[R::Elem]) -> Result<WittVector<R::Elem>> {
        from_ghost(&self.base, self.p, g)
    }
}

/// Ghost components `w_i = sum_{j<=i} p^j a_j^{p^{i-j}}`.
pub fn ghost<R: TorsionFree>(ring: &R, p: u64, a: &WittVector<R::Elem>) -> Result<Vec<R::Elem>> {
    if ring.char_p().is_some() {
        return Err(Error::CharacteristicP);
    }
    let mut powers: Vec<R::Elem> = Vec::with_capacity(a.len());
    let mut out = Vec::with_capacity(a.len());
    for (i, c) in a.coords.iter().enumerate() {
        for x in powers.iter_mut() {
            *x = ring.pow(x, p);
        }
        powers.push(c.clone());
        let mut w = ring.zero();
        let mut pj = 1i64;
        for (j, x) in powers.iter().enumerate() {
            if j > 0 {
                pj *= p as i64;
            }
            w = ring.add(&w, &ring.mul_int(x, pj));
        }
        let _ = i;
        out.push(w);
    }
    Ok(out)
}

/// Inverse of [`ghost`]: solves `a_i = (g_i - sum_{j<i} p^j a_j^{p^{i-j}}) / p^i`.
///
/// Fails with [`Error::Integrality`] at the first index where the division
/// is not exact.
pub fn from_ghost<R: TorsionFree>(ring: &R, p: u64, g: &[R::Elem]) -> Result<WittVector<R::Elem>> {
    if ring.char_p().is_some() {
        return Err(Error::CharacteristicP);
    }
    let mut powers: Vec<R::Elem> = Vec::with_capacity(g.len());
    let mut coords = Vec::with_capacity(g.len());
    for (i, gi) in g.iter().enumerate() {
        for x in powers.iter_mut() {
            *x = ring.pow(x, p);
        }
        let mut s = gi.clone();
        let mut pj = 1i64;
        for (j, x) in powers.iter().enumerate() {
            if j > 0 {
                pj *= p as i64;
            }
            s = ring.sub(&s, &ring.mul_int(x, pj));
        }
        let a = ring.div_p_pow(&s, p, i as u32).ok_or(Error::Integrality { index: i })?;
        powers.push(a.clone());
        coords.push(a);
    }
    Ok(WittVector::new(coords))
}

impl WittRing<FiniteField> {
    /// The image of `a in W_m(F_p)` under `W_m(F_p) = Z/p^m`, `m = len(a)`.
    pub fn to_integer(&self, a: &WittVector<crate::ring::Fq>) -> Result<u64> {
        let m = self.check(a)?;
        let field = self.base();
        let xs = self.teich_decompose(a)?;
        let prime = FiniteField::prime(self.p)?;
        let lift = LiftRing::new(&prime, m as u32)?;
        let modulus = lift.characteristic();
        let mut acc = 0u64;
        let mut pi = 1u64;
        for x in xs {
            let d = field
                .to_prime(x)
                .ok_or_else(|| Error::InvalidRing("coordinate outside the prime field".into()))?;
            let w = lift.teichmuller(crate::ring::Fq(d as u32))?;
            let w = lift.coeffs(&w)[0];
            acc = (acc + (pi as u128 * w as u128 % modulus as u128) as u64) % modulus;
            pi = pi.wrapping_mul(self.p);
        }
        Ok(acc)
    }

    /// `k * 1` in `W_m(F_p)`.
    pub fn from_integer(&self, k: i64, m: usize) -> Result<WittVector<crate::ring::Fq>> {
        self.mul_int(&self.one_len(m), k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Fq, Laurent};
    use crate::Integers;
    use num_bigint::BigInt;

    fn fp(p: u64) -> FiniteField {
        FiniteField::prime(p).unwrap()
    }

    fn wv(cs: &[u32]) -> WittVector<Fq> {
        WittVector::new(cs.iter().map(|&c| Fq(c)).collect())
    }

    fn zv(cs: &[i64]) -> WittVector<BigInt> {
        WittVector::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn two_times_one_in_w2_f2() {
        let w = WittRing::new(fp(2), 2, 2).unwrap();
        assert_eq!(w.add(&wv(&[1, 0]), &wv(&[1, 0])).unwrap(), wv(&[0, 1]));
        assert_eq!(w.mul(&wv(&[1, 0]), &wv(&[1, 1])).unwrap(), wv(&[1, 1]));
        assert_eq!(w.add(&wv(&[1, 1]), &w.zero()).unwrap(), wv(&[1, 1]));
    }

    #[test]
    fn ghost_examples() {
        let w = WittRing::new(Integers::default(), 2, 2).unwrap();
        assert_eq!(w.ghost(&zv(&[3, 5])).unwrap(), vec![BigInt::from(3), BigInt::from(19)]);
        assert_eq!(w.from_ghost(&[BigInt::from(3), BigInt::from(19)]).unwrap(), zv(&[3, 5]));
        assert_eq!(
            w.from_ghost(&[BigInt::from(0), BigInt::from(1)]),
            Err(Error::Integrality { index: 1 })
        );
        let w3 = WittRing::new(Integers::default(), 3, 3).unwrap();
        let one = w3.one();
        assert_eq!(w3.ghost(&one).unwrap(), vec![BigInt::from(1); 3]);
        let c = BigInt::from(4);
        let teich_ghost = vec![c.clone(), c.pow(3), c.pow(9)];
        assert_eq!(w3.from_ghost(&teich_ghost).unwrap(), w3.teichmuller(c));
    }

    #[test]
    fn ghost_rejects_char_p() {
        let w = WittRing::new(crate::ring::LiftRing::new(&fp(2), 1).unwrap(), 2, 2).unwrap();
        assert_eq!(w.ghost(&w.one()), Err(Error::CharacteristicP));
    }

    #[test]
    fn verschiebung_variants() {
        let w = WittRing::new(fp(2), 2, 3).unwrap();
        assert_eq!(w.verschiebung(&wv(&[1, 1]), 3).unwrap(), wv(&[0, 1, 1]));
        assert_eq!(w.verschiebung(&wv(&[1, 1]), 2).unwrap(), wv(&[0, 1]));
        assert_eq!(w.verschiebung(&wv(&[1, 1]), 4), Err(Error::LengthOutOfRange(4)));
        assert!(w.is_zero(&w.verschiebung_pow(&wv(&[1, 1, 1]), 3, false).unwrap()));
    }

    #[test]
    fn artin_schreier_examples() {
        let f4 = FiniteField::gf(2, 2).unwrap();
        let w = WittRing::new(f4.clone(), 2, 1).unwrap();
        let x = WittVector::new(vec![f4.generator()]);
        assert_eq!(w.artin_schreier(&x).unwrap(), WittVector::new(vec![Fq(1)]));
        let z = WittRing::new(Integers::default(), 2, 2).unwrap();
        assert_eq!(z.artin_schreier(&z.one()), Err(Error::NotCharacteristicP));
    }

    #[test]
    fn frobenius_examples() {
        let l = Laurent::new(fp(2));
        let w = WittRing::new(l.clone(), 2, 2).unwrap();
        let a = WittVector::new(vec![l.t(), l.one()]);
        let t2 = l.mul(&l.t(), &l.t());
        assert_eq!(w.frobenius(&a).unwrap(), WittVector::new(vec![t2, l.one()]));

        let lift = LiftRing::new(&FiniteField::gf(2, 2).unwrap(), 4).unwrap();
        let wl = WittRing::new(lift.clone(), 2, 3).unwrap();
        let c = lift.teichmuller(lift.field().generator()).unwrap();
        let fc = wl.frobenius(&wl.teichmuller(c)).unwrap();
        assert_eq!(fc, wl.teichmuller(lift.pow(&c, 2)));
    }

    #[test]
    fn truncation() {
        let w = WittRing::new(fp(3), 3, 3).unwrap();
        let a = wv(&[1, 2, 0]);
        assert_eq!(w.truncate(&a, 1).unwrap(), wv(&[1]));
        assert_eq!(w.truncate(&a, 3).unwrap(), a);
        assert_eq!(w.truncate(&a, 0).unwrap(), wv(&[]));
        assert_eq!(w.truncate(&a, 4), Err(Error::LengthOutOfRange(4)));
    }

    #[test]
    fn decomposition_examples() {
        let w = WittRing::new(fp(2), 2, 2).unwrap();
        let xs = w.teich_decompose(&wv(&[1, 1])).unwrap();
        let shifted = w.sub(&wv(&[1, 1]), &wv(&[1, 0])).unwrap();
        assert_eq!(xs, vec![Fq(1), shifted.coords()[1]]);
        assert_eq!(w.reconstruct(&xs).unwrap(), wv(&[1, 1]));
        assert_eq!(w.teich_decompose(&wv(&[0, 1])).unwrap(), vec![Fq(0), Fq(1)]);
    }

    #[test]
    fn prime_field_witt_vectors_are_integers() {
        let w = WittRing::new(fp(3), 3, 2).unwrap();
        for k in 0..9 {
            let a = w.from_integer(k, 2).unwrap();
            assert_eq!(w.to_integer(&a).unwrap(), k as u64);
        }
    }

    #[test]
    fn shape_checks() {
        let w = WittRing::new(fp(2), 2, 2).unwrap();
        assert!(matches!(w.add(&wv(&[1]), &wv(&[1, 0])), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(w.add(&wv(&[1, 0, 0]), &wv(&[1, 0, 0])), Err(Error::ShapeMismatch { .. })));
        assert!(WittRing::new(fp(3), 2, 2).is_err());
    }
}
