//! Formal tensors over `W_n(K)`, the relation generators of `G_n` and of
//! its covector limit, and the evaluation map `alpha`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::covector::Covector;
use crate::ring::Ring;
use crate::sample::Sampler;
use crate::symbol::{KElem, KWitt, LocalField, SymbolValue};
use crate::witt::WittVector;
use crate::{Error, Result};

/// `c * (left ⊗ right)`, read as `c * left d(right)` in `Ω¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<E> {
    pub c: i64,
    pub left: WittVector<E>,
    pub right: WittVector<E>,
}

/// An integer combination of pure tensors in `W_n(K) ⊗ W_n(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalTensor<E> {
    n: usize,
    terms: Vec<Term<E>>,
}

impl<E: Clone> FormalTensor<E> {
    pub fn new(n: usize) -> Self {
        FormalTensor { n, terms: Vec::new() }
    }

    pub fn single(c: i64, left: WittVector<E>, right: WittVector<E>) -> Result<Self> {
        let mut t = Self::new(left.len());
        t.push(c, left, right)?;
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Term<E>] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, c: i64, left: WittVector<E>, right: WittVector<E>) -> Result<()> {
        for w in [&left, &right] {
            if w.len() != self.n {
                return Err(Error::ShapeMismatch {
                    expected: format!("level {}", self.n),
                    found: format!("length {}", w.len()),
                });
            }
        }
        if c != 0 {
            self.terms.push(Term { c, left, right });
        }
        Ok(())
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.c, t.left.clone(), t.right.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::new(self.n);
        for t in &self.terms {
            if t.c * k != 0 {
                out.terms.push(Term { c: t.c * k, left: t.left.clone(), right: t.right.clone() });
            }
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.plus(&other.scale(-1))
    }
}

/// `c * (left ⊗ right)` in `CW(K) ⊗ CW(K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovTerm<E> {
    pub c: i64,
    pub left: Covector<E>,
    pub right: Covector<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorTensor<E> {
    terms: Vec<CovTerm<E>>,
}

impl<E: Clone> Default for CovectorTensor<E> {
    fn default() -> Self {
        CovectorTensor { terms: Vec::new() }
    }
}

impl<E: Clone> CovectorTensor<E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn terms(&self) -> &[CovTerm<E>] {
        &self.terms
    }

    pub fn push(&mut self, c: i64, left: Covector<E>, right: Covector<E>) {
        if c != 0 {
            self.terms.push(CovTerm { c, left, right });
        }
    }
}

/// Which relation subgroup a generator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    /// `Fa ⊗ b - a ⊗ Vb`.
    #[serde(rename = "M_n'")]
    MPrime,
    /// `M_n'` together with `wp([a]) dlog [b]`.
    #[serde(rename = "M_n")]
    M,
    /// `M_n'` together with the Leibniz relations.
    #[serde(rename = "N_n'")]
    NPrime,
    #[serde(rename = "N_n")]
    N,
    /// `a⊗b + b⊗a`, `Fa⊗b - a⊗Vb` and the Teichmüller three-term relation on `CW`.
    #[serde(rename = "N_cov")]
    NCov,
    /// As `N_cov` with `a⊗a` in place of the symmetric tensors.
    #[serde(rename = "Nprime_cov")]
    NPrimeCov,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::MPrime,
        RelationKind::M,
        RelationKind::NPrime,
        RelationKind::N,
        RelationKind::NCov,
        RelationKind::NPrimeCov,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RelationKind::MPrime => "M_n'",
            RelationKind::M => "M_n",
            RelationKind::NPrime => "N_n'",
            RelationKind::N => "N_n",
            RelationKind::NCov => "N_cov",
            RelationKind::NPrimeCov => "Nprime_cov",
        }
    }

    pub fn is_covector(&self) -> bool {
        matches!(self, RelationKind::NCov | RelationKind::NPrimeCov)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace(['\'', '’'], "prime").to_ascii_lowercase();
        Ok(match key.as_str() {
            "m_nprime" | "mprime" | "mprime_n" => RelationKind::MPrime,
            "m_n" | "m" => RelationKind::M,
            "n_nprime" | "nprime" | "nprime_n" => RelationKind::NPrime,
            "n_n" | "n" => RelationKind::N,
            "n_cov" | "ncov" => RelationKind::NCov,
            "nprime_cov" | "n_covprime" | "nprimecov" => RelationKind::NPrimeCov,
            _ => return Err(Error::Parse(format!("unknown relation kind `{s}`"))),
        })
    }
}

/// `alpha_{p^n}(x) = sum c ((left, right))_{p^n}`.
pub fn alpha_eval(kf: &LocalField, x: &FormalTensor<KElem>) -> Result<SymbolValue> {
    let mut acc = SymbolValue::zero(kf.p(), x.n() as u32);
    for t in x.terms() {
        acc = acc.add(&kf.pairing_n(&t.left, &t.right)?.mul_int(t.c));
    }
    Ok(acc)
}

/// `alpha_{p^inf}(x) = sum c ((left, right))_{p^inf}`.
pub fn alpha_inf(kf: &LocalField, x: &CovectorTensor<KElem>) -> Result<SymbolValue> {
    let mut acc = SymbolValue::zero(kf.p(), 0);
    for t in x.terms() {
        acc = acc.add(&kf.pairing_inf(&t.left, &t.right)?.mul_int(t.c));
    }
    Ok(acc)
}

/// `a dlog [b] = a[b]^{-1} ⊗ [b]`.
///
/// The witnesses are Laurent polynomials, so `a[b]^{-1}` must again have
/// Laurent polynomial coordinates; otherwise this fails with `NotAUnit`.
pub fn dlog_term(kf: &LocalField, a: &KWitt, b: &KElem) -> Result<FormalTensor<KElem>> {
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = a.len();
    let mut out = FormalTensor::new(n);
    if kf.witt().is_zero(a) {
        return Ok(out);
    }
    let k = kf.k();
    let mut bp = b.clone();
    let mut coords = Vec::with_capacity(n);
    for (i, c) in a.coords().iter().enumerate() {
        if i > 0 {
            bp = k.frobenius(&bp);
        }
        coords.push(k.div_exact(c, &bp).ok_or(Error::NotAUnit)?);
    }
    out.push(1, WittVector::new(coords), kf.witt().teichmuller_len(b.clone(), n))?;
    Ok(out)
}

/// `da = 1 ⊗ a`.
pub fn d_term(kf: &LocalField, a: &KWitt) -> Result<FormalTensor<KElem>> {
    FormalTensor::single(1, kf.witt().one_len(a.len()), a.clone())
}

/// `a ⊗ bc - ab ⊗ c - ac ⊗ b`.
pub fn leibniz(kf: &LocalField, a: &KWitt, b: &KWitt, c: &KWitt) -> Result<FormalTensor<KElem>> {
    let w = kf.witt();
    let mut t = FormalTensor::new(a.len());
    t.push(1, a.clone(), w.mul(b, c)?)?;
    t.push(-1, w.mul(a, b)?, c.clone())?;
    t.push(-1, w.mul(a, c)?, b.clone())?;
    Ok(t)
}

/// `Fa ⊗ b - a ⊗ Vb`, `V` truncated.
pub fn frobenius_relation(kf: &LocalField, a: &KWitt, b: &KWitt) -> Result<FormalTensor<KElem>> {
    let w = kf.witt();
    let mut t = FormalTensor::new(a.len());
    t.push(1, w.frobenius(a)?, b.clone())?;
    t.push(-1, a.clone(), w.verschiebung(b, b.len())?)?;
    Ok(t)
}

/// `Va ⊗ b - a ⊗ Fb`, `V` truncated.
pub fn verschiebung_relation(kf: &LocalField, a: &KWitt, b: &KWitt) -> Result<FormalTensor<KElem>> {
    let w = kf.witt();
    let mut t = FormalTensor::new(a.len());
    t.push(1, w.verschiebung(a, a.len())?, b.clone())?;
    t.push(-1, a.clone(), w.frobenius(b)?)?;
    Ok(t)
}

/// `wp([a]) [b]^{-1} ⊗ [b]` for `a = bc`, written as
/// `[b^{p-1} c^p] ⊗ [b] - [c] ⊗ [b]`.
pub fn wp_teich_relation(kf: &LocalField, n: usize, b: &KElem, c: &KElem) -> Result<FormalTensor<KElem>> {
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (k, w) = (kf.k(), kf.witt());
    let x = k.mul(&k.pow(b, kf.p() - 1), &k.frobenius(c));
    let tb = w.teichmuller_len(b.clone(), n);
    let mut t = FormalTensor::new(n);
    t.push(1, w.teichmuller_len(x, n), tb.clone())?;
    t.push(-1, w.teichmuller_len(c.clone(), n), tb)?;
    Ok(t)
}

/// `wp(a) dlog [b]` for `a = a'[b]`, written as
/// `(F a')[b^{p-1}] ⊗ [b] - a' ⊗ [b]`.
pub fn wp_dlog_relation(kf: &LocalField, a: &KWitt, b: &KElem) -> Result<FormalTensor<KElem>> {
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let (k, w) = (kf.k(), kf.witt());
    let n = a.len();
    let tb = w.teichmuller_len(b.clone(), n);
    let mut t = FormalTensor::new(n);
    t.push(1, w.scale_teich(&w.frobenius(a)?, &k.pow(b, kf.p() - 1)), tb.clone())?;
    t.push(-1, a.clone(), tb)?;
    Ok(t)
}

/// One generator of each shape belonging to `kind`, at level `n`.
pub fn relation_generators(
    kf: &LocalField,
    kind: RelationKind,
    n: usize,
    s: &mut Sampler,
) -> Result<Vec<FormalTensor<KElem>>> {
    if kind.is_covector() {
        return Err(Error::Parse(format!("{kind} is a covector relation")));
    }
    let mut out = Vec::new();
    let (a, b) = (s.witt(n), s.witt(n));
    out.push(frobenius_relation(kf, &a, &b)?);
    if matches!(kind, RelationKind::NPrime | RelationKind::N) {
        let (x, y, z) = (s.witt(n), s.witt(n), s.witt(n));
        out.push(leibniz(kf, &x, &y, &z)?);
    }
    if matches!(kind, RelationKind::M | RelationKind::N) {
        let (b, c) = (s.nonzero_laurent(), s.laurent());
        out.push(wp_teich_relation(kf, n, &b, &c)?);
    }
    Ok(out)
}

/// `[a]_l = (..., 0, a, 0, ..., 0)` with `a` at index `l <= 0`.
pub fn teich_at(kf: &LocalField, a: &KElem, l: i64) -> Result<Covector<KElem>> {
    if l > 0 {
        return Err(Error::LengthOutOfRange(l as usize));
    }
    let n = (1 - l) as usize;
    Ok(kf.covectors().psi(&kf.witt().teichmuller_len(a.clone(), n)))
}

/// One generator of each shape belonging to a covector relation kind, with
/// windows of length at most `max_window`.
pub fn cov_generators(
    kf: &LocalField,
    kind: RelationKind,
    max_window: usize,
    s: &mut Sampler,
) -> Result<Vec<CovectorTensor<KElem>>> {
    if !kind.is_covector() {
        return Err(Error::Parse(format!("{kind} is not a covector relation")));
    }
    let g = kf.covectors();
    let mut out = Vec::new();
    let (a, b) = (s.covector(max_window, &g), s.covector(max_window, &g));
    let mut t = CovectorTensor::new();
    if kind == RelationKind::NCov {
        t.push(1, a.clone(), b.clone());
        t.push(1, b.clone(), a.clone());
    } else {
        t.push(1, a.clone(), a.clone());
    }
    out.push(t);
    let mut t = CovectorTensor::new();
    t.push(1, g.frobenius(&a), b.clone());
    t.push(-1, a.clone(), g.verschiebung(&b));
    out.push(t);
    let l = -(s.below(max_window.max(1) as u64) as i64);
    let (x, y, z) = (s.laurent(), s.laurent(), s.laurent());
    let k = kf.k();
    let mut t = CovectorTensor::new();
    t.push(1, teich_at(kf, &x, l)?, teich_at(kf, &k.mul(&y, &z), l)?);
    t.push(1, teich_at(kf, &y, l)?, teich_at(kf, &k.mul(&x, &z), l)?);
    t.push(1, teich_at(kf, &z, l)?, teich_at(kf, &k.mul(&x, &y), l)?);
    out.push(t);
    Ok(out)
}

/// Rewrites every term as a combination of `[x] ⊗ [y]`.
///
/// Both slots are split as `sum V^i [x_i]`, the tensor is expanded, and
/// `V^k[x] ⊗ V^l[y]` becomes `[x^{p^l}] ⊗ [y^{p^k}]`.
pub fn reduce_to_teich(kf: &LocalField, x: &FormalTensor<KElem>) -> Result<FormalTensor<KElem>> {
    let (k, w) = (kf.k(), kf.witt());
    let n = x.n();
    let mut out = FormalTensor::new(n);
    let frob = |c: &KElem, e: usize| -> KElem { (0..e).fold(c.clone(), |acc, _| k.frobenius(&acc)) };
    for t in x.terms() {
        let xs = w.teich_decompose(&t.left)?;
        let ys = w.teich_decompose(&t.right)?;
        for (i, xi) in xs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in ys.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                out.push(
                    t.c,
                    w.teichmuller_len(frob(xi, j), n),
                    w.teichmuller_len(frob(yj, i), n),
                )?;
            }
        }
    }
    Ok(out)
}

/// `f_n = V ⊗ V : W_{n-1} ⊗ W_{n-1} -> W_n ⊗ W_n`, extending `V`.
pub fn f_map(kf: &LocalField, x: &FormalTensor<KElem>) -> Result<FormalTensor<KElem>> {
    let w = kf.witt();
    let n = x.n() + 1;
    let mut out = FormalTensor::new(n);
    for t in x.terms() {
        out.push(t.c, w.verschiebung(&t.left, n)?, w.verschiebung(&t.right, n)?)?;
    }
    Ok(out)
}

/// `g_n = T ⊗ T : W_n ⊗ W_n -> K ⊗ K`.
pub fn g_map(kf: &LocalField, x: &FormalTensor<KElem>) -> Result<FormalTensor<KElem>> {
    let w = kf.witt();
    let mut out = FormalTensor::new(1);
    for t in x.terms() {
        out.push(t.c, w.truncate(&t.left, 1)?, w.truncate(&t.right, 1)?)?;
    }
    Ok(out)
}

/// Equality in `G_n`, decided by `alpha_{p^n}(x - y) = 0`.
pub fn gn_equal(kf: &LocalField, x: &FormalTensor<KElem>, y: &FormalTensor<KElem>) -> Result<bool> {
    Ok(alpha_eval(kf, &x.minus(y)?)?.is_zero())
}

/// The rewriting rules that hold in `G_n`, each as a pair of sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rewrite {
    /// `Fa ⊗ b = a ⊗ Vb`.
    FrobeniusLeft,
    /// `Va ⊗ b = a ⊗ Fb`.
    VerschiebungLeft,
    /// `a ⊗ b = -b ⊗ a`.
    Swap,
    /// `a ⊗ b^k = k ab^{k-1} ⊗ b`.
    Power(u32),
}

pub fn rewrite_sides(
    kf: &LocalField,
    rule: Rewrite,
    a: &KWitt,
    b: &KWitt,
) -> Result<(FormalTensor<KElem>, FormalTensor<KElem>)> {
    let w = kf.witt();
    let n = a.len();
    Ok(match rule {
        Rewrite::FrobeniusLeft => (
            FormalTensor::single(1, w.frobenius(a)?, b.clone())?,
            FormalTensor::single(1, a.clone(), w.verschiebung(b, n)?)?,
        ),
        Rewrite::VerschiebungLeft => (
            FormalTensor::single(1, w.verschiebung(a, n)?, b.clone())?,
            FormalTensor::single(1, a.clone(), w.frobenius(b)?)?,
        ),
        Rewrite::Swap => (
            FormalTensor::single(1, a.clone(), b.clone())?,
            FormalTensor::single(-1, b.clone(), a.clone())?,
        ),
        Rewrite::Power(k) => {
            let bk = (0..k).try_fold(w.one_len(n), |acc, _| w.mul(&acc, b))?;
            let bk1 = (1..k).try_fold(w.one_len(n), |acc, _| w.mul(&acc, b))?;
            let rhs = if k == 0 {
                FormalTensor::new(n)
            } else {
                FormalTensor::single(k as i64, w.mul(a, &bk1)?, b.clone())?
            };
            (FormalTensor::single(1, a.clone(), bk)?, rhs)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> LocalField {
        LocalField::new(2, 1).unwrap()
    }

    #[test]
    fn relation_kind_names_round_trip() {
        for kind in RelationKind::ALL {
            assert_eq!(kind.name().parse::<RelationKind>().unwrap(), kind);
            let json = serde_json::to_string(&kind).unwrap();
            assert_eq!(json, format!("\"{}\"", kind.name()));
        }
        assert!("Q_n".parse::<RelationKind>().is_err());
    }

    #[test]
    fn tensors_prune_and_check_levels() {
        let kf = field();
        let w = kf.witt();
        let mut t = FormalTensor::new(2);
        t.push(0, w.one_len(2), w.one_len(2)).unwrap();
        assert!(t.is_empty());
        assert!(t.push(1, w.one_len(1), w.one_len(2)).is_err());
    }

    #[test]
    fn dlog_anchor() {
        let kf = field();
        for n in 1..=kf.cap() {
            let one = kf.witt().one_len(n);
            let t = dlog_term(&kf, &one, &kf.k().t()).unwrap();
            assert_eq!(alpha_eval(&kf, &t).unwrap(), SymbolValue::new(2, n as u32, 1));
        }
    }

    #[test]
    fn dlog_term_edge_cases() {
        let kf = field();
        let k = kf.k();
        let zero = kf.witt().zero_len(2);
        assert!(dlog_term(&kf, &zero, &k.t()).unwrap().is_empty());
        let a = WittVector::new(vec![k.t(), k.one()]);
        let t = dlog_term(&kf, &a, &k.one()).unwrap();
        assert_eq!(t.terms()[0].left, a);
        assert!(alpha_eval(&kf, &t).unwrap().is_zero());
        let b = k.add(&k.one(), &k.t());
        assert_eq!(dlog_term(&kf, &a, &b), Err(Error::NotAUnit));
        assert_eq!(dlog_term(&kf, &a, &k.zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn teich_reduction_fixes_teich_terms() {
        let kf = field();
        let w = kf.witt();
        let k = kf.k();
        let x = FormalTensor::single(3, w.teichmuller_len(k.t(), 2), w.teichmuller_len(k.one(), 2)).unwrap();
        assert_eq!(reduce_to_teich(&kf, &x).unwrap(), x);
        let vx = FormalTensor::single(1, w.verschiebung(&w.teichmuller_len(k.t(), 1), 2).unwrap(), w.teichmuller_len(k.t(), 2)).unwrap();
        let r = reduce_to_teich(&kf, &vx).unwrap();
        assert_eq!(r.terms()[0].left, w.teichmuller_len(k.t(), 2));
        assert_eq!(r.terms()[0].right, w.teichmuller_len(k.pow(&k.t(), 2), 2));
    }

    #[test]
    fn f_and_g_maps() {
        let kf = field();
        let empty = FormalTensor::<KElem>::new(1);
        assert!(f_map(&kf, &empty).unwrap().is_empty());
        let w = kf.witt();
        let k = kf.k();
        let a = w.verschiebung(&w.teichmuller_len(k.t(), 1), 2).unwrap();
        let x = FormalTensor::single(1, a.clone(), a).unwrap();
        let g = g_map(&kf, &x).unwrap();
        assert!(alpha_eval(&kf, &g).unwrap().is_zero());
    }

    #[test]
    fn anchor_is_not_a_relation() {
        let kf = LocalField::new(3, 1).unwrap();
        let mut s = Sampler::new(kf.field(), 5, "forms-unit", 0);
        let x = FormalTensor::single(1, s.witt(2), s.witt(2)).unwrap();
        let anchor = dlog_term(&kf, &kf.witt().one_len(2), &kf.k().t()).unwrap();
        assert!(!gn_equal(&kf, &x, &x.plus(&anchor).unwrap()).unwrap());
        let rel = relation_generators(&kf, RelationKind::M, 2, &mut s).unwrap();
        for r in rel {
            assert!(gn_equal(&kf, &x, &x.plus(&r).unwrap()).unwrap());
        }
    }
}
