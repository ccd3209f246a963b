use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::ring::{is_prime, Scalar};
use crate::{Budget, Error, Result};

/// A sparse multivariate polynomial with exponent vectors as keys.
#[derive(Clone, PartialEq)]
pub struct MPoly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly { nvars, terms: BTreeMap::from([(e, T::one())]) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(T::zero() - T::one())))
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, a) in &self.terms {
            for (e2, b) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::constant(self.nvars, T::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<S: Scalar>(&self, f: impl Fn(&T) -> S) -> MPoly<S> {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Writes the polynomial with variable `i` printed as `names(i)`.
    pub fn display_with(&self, names: impl Fn(usize) -> String) -> String
    where
        T: fmt::Display,
    {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &d)| d > 0)
                .map(|(i, &d)| if d == 1 { names(i) } else { format!("{}^{}", names(i), d) })
                .collect();
            if mono.is_empty() {
                out.push_str(&mag);
            } else {
                if mag != "1" {
                    out.push_str(&mag);
                }
                out.push_str(&mono.join(""));
            }
        }
        out
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for MPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| format!("v{i}")))
    }
}

pub type IntPoly = MPoly<BigInt>;
pub type RatPoly = MPoly<BigRational>;

/// Universal Witt polynomials for `W_n` at the prime `p`.
///
/// Binary operations use interleaved variables: `X_j` is variable `2j` and
/// `Y_j` is variable `2j + 1`, so the polynomials for `W_m` are exactly the
/// first `m` polynomials for any `W_n` with `n >= m`, read in the first
/// `2m` variables. Unary polynomials use `X_j` as variable `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniversalPolySet {
    pub p: u64,
    pub n: usize,
    pub add: Vec<IntPoly>,
    pub mul: Vec<IntPoly>,
    pub neg: Vec<IntPoly>,
    /// `Fr_i` in `X_0..X_{i+1}` with `w_i(Fr) = w_{i+1}(X)`.
    pub frob: Vec<IntPoly>,
}

/// Display name of variable `i` in a binary universal polynomial.
pub fn binary_var_name(i: usize) -> String {
    format!("{}_{}", if i % 2 == 0 { 'X' } else { 'Y' }, i / 2)
}

/// `w_i = sum_{j<=i} p^j V_j^{p^{i-j}}` where `V_j` is variable `var(j)`.
fn ghost_poly(nvars: usize, p: u64, i: usize, var: impl Fn(usize) -> usize) -> RatPoly {
    let mut out = RatPoly::zero(nvars);
    for j in 0..=i {
        let c = BigRational::from_integer(BigInt::from(p).pow(j as u32));
        let term = RatPoly::var(nvars, var(j)).pow(p.pow((i - j) as u32)).scale(&c);
        out = out.add(&term);
    }
    out
}

/// Solves `w_i(Z) = targets[i]` recursively over `Q`, then checks that every
/// coefficient is an integer.
fn ghost_solve(p: u64, targets: Vec<RatPoly>) -> Result<Vec<IntPoly>> {
    let mut sol: Vec<RatPoly> = Vec::with_capacity(targets.len());
    let mut out = Vec::with_capacity(targets.len());
    for (i, target) in targets.into_iter().enumerate() {
        let mut s = target;
        for (j, z) in sol.iter().enumerate() {
            let c = BigRational::from_integer(BigInt::from(p).pow(j as u32));
            s = s.sub(&z.pow(p.pow((i - j) as u32)).scale(&c));
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(p).pow(i as u32));
        let z = s.scale(&inv);
        let mut int = IntPoly::zero(z.nvars());
        for (e, c) in z.terms() {
            let c = c.to_bigint().ok_or(Error::Integrality { index: i })?;
            int.add_term(e.clone(), c);
        }
        out.push(int);
        sol.push(z);
    }
    Ok(out)
}

impl UniversalPolySet {
    fn generate(p: u64, n: usize) -> Result<Self> {
        let bin = 2 * n;
        let x = |j: usize| 2 * j;
        let y = |j: usize| 2 * j + 1;
        let id = |j: usize| j;
        let add = ghost_solve(
            p,
            (0..n).map(|i| ghost_poly(bin, p, i, x).add(&ghost_poly(bin, p, i, y))).collect(),
        )?;
        let mul = ghost_solve(
            p,
            (0..n).map(|i| ghost_poly(bin, p, i, x).mul(&ghost_poly(bin, p, i, y))).collect(),
        )?;
        let minus_one = BigRational::from_integer(BigInt::from(-1));
        let neg = ghost_solve(p, (0..n).map(|i| ghost_poly(n, p, i, id).scale(&minus_one)).collect())?;
        let frob = ghost_solve(p, (0..n).map(|i| ghost_poly(n + 1, p, i + 1, id)).collect())?;
        Ok(UniversalPolySet { p, n, add, mul, neg, frob })
    }
}

type PolyCache = RwLock<HashMap<(u64, usize), Arc<UniversalPolySet>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Universal polynomials for `W_n` at `p`, generated once per `(p, n)`.
pub fn universal_polys(p: u64, n: usize, budget: &Budget) -> Result<Arc<UniversalPolySet>> {
    if !is_prime(p) {
        return Err(Error::InvalidRing(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::LengthOutOfRange(0));
    }
    budget.check_length(p, n)?;
    if let Some(set) = cache().read().expect("poly cache poisoned").get(&(p, n)) {
        return Ok(set.clone());
    }
    let set = Arc::new(UniversalPolySet::generate(p, n)?);
    let mut w = cache().write().expect("poly cache poisoned");
    Ok(w.entry((p, n)).or_insert(set).clone())
}
