//! The Artin–Schreier–Witt symbol over `F_q((t))` and the pairings built
//! from it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::covector::{Covector, CovectorGroup};
use crate::ring::{FiniteField, Fq, Laurent, LaurentPoly, LiftElem, LiftRing, Ring};
use crate::witt::{from_ghost, WittRing, WittVector};
use crate::{Budget, Error, Result};

/// An element of `K = F_q((t))`, always a Laurent polynomial here.
pub type KElem = LaurentPoly<Fq>;
/// A Witt vector over `K`.
pub type KWitt = WittVector<KElem>;

/// The class `value / p^level` in `Q/Z`.
///
/// Level `l` identifies `W_l(F_p)` with `Z/p^l` through `m -> m * 1`;
/// values at different levels are compared through the inclusions
/// `Z/p^l -> Z/p^{l+1}`, `m -> p m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolValue {
    pub p: u64,
    pub level: u32,
    pub value: u64,
}

impl SymbolValue {
    pub fn new(p: u64, level: u32, value: i128) -> Self {
        let m = p.pow(level) as i128;
        SymbolValue { p, level, value: value.rem_euclid(m) as u64 }
    }

    pub fn zero(p: u64, level: u32) -> Self {
        SymbolValue { p, level, value: 0 }
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Image at level `l >= self.level`.
    pub fn embed(&self, l: u32) -> Self {
        assert!(l >= self.level, "embedding lowers the level");
        SymbolValue { p: self.p, level: l, value: self.value * self.p.pow(l - self.level) }
    }

    /// The same class at level `l`; fails when it is not `p^l`-torsion.
    pub fn to_level(&self, l: u32) -> Result<Self> {
        if l >= self.level {
            return Ok(self.embed(l));
        }
        let d = self.p.pow(self.level - l);
        if self.value % d != 0 {
            return Err(Error::Torsion(format!("{self} is not {}-torsion", self.p.pow(l))));
        }
        Ok(SymbolValue { p: self.p, level: l, value: self.value / d })
    }

    /// The representative at the least level holding this class.
    pub fn reduced(&self) -> Self {
        let mut v = *self;
        while v.level > 0 && v.value % v.p == 0 {
            v = SymbolValue { p: v.p, level: v.level - 1, value: v.value / v.p };
        }
        v
    }

    /// Equality in `Q/Z`.
    pub fn same_class(&self, other: &Self) -> bool {
        self.p == other.p && self.reduced() == other.reduced()
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.level.max(other.level);
        (self.embed(l), other.embed(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        SymbolValue::new(a.p, a.level, a.value as i128 + b.value as i128)
    }

    pub fn neg(&self) -> Self {
        SymbolValue::new(self.p, self.level, -(self.value as i128))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: i64) -> Self {
        SymbolValue::new(self.p, self.level, self.value as i128 * k as i128)
    }

    /// The order of the class in `Q/Z`.
    pub fn order(&self) -> u64 {
        self.reduced().modulus()
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus())
    }
}

/// p-adic headroom for the residue computation.
///
/// The lift ring carries `n + slack` digits; `slack` defaults to `n` and is
/// never taken below `n - 1`. On an integrality failure the slack doubles,
/// at most `max_doublings` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub slack: Option<u32>,
    pub max_doublings: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { slack: None, max_doublings: 3 }
    }
}

impl PrecisionPolicy {
    pub fn with_slack(slack: u32) -> Self {
        PrecisionPolicy { slack: Some(slack), ..Self::default() }
    }

    pub fn initial_slack(&self, n: usize) -> u32 {
        let n = n as u32;
        self.slack.unwrap_or(n).max(n.saturating_sub(1))
    }
}

/// The local field `F_q((t))` with everything needed to evaluate symbols.
#[derive(Clone)]
pub struct LocalField {
    field: FiniteField,
    k: Laurent<FiniteField>,
    witt: WittRing<Laurent<FiniteField>>,
    residue_witt: WittRing<FiniteField>,
    budget: Budget,
    policy: PrecisionPolicy,
    lifts: Arc<Mutex<HashMap<u32, LiftRing>>>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}((t))", self.field.order())
    }
}

impl LocalField {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        Self::with_config(p, f, Budget::default(), PrecisionPolicy::default())
    }

    pub fn with_config(p: u64, f: u32, budget: Budget, policy: PrecisionPolicy) -> Result<Self> {
        budget.check_degree(f)?;
        let field = FiniteField::gf(p, f)?;
        let k = Laurent::new(field.clone());
        let cap = budget.cap(p).max(1);
        let witt = WittRing::with_budget(k.clone(), p, cap, &budget)?;
        let residue_witt = WittRing::with_budget(field.clone(), p, cap, &budget)?;
        Ok(LocalField {
            field,
            k,
            witt,
            residue_witt,
            budget,
            policy,
            lifts: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn f(&self) -> u32 {
        self.field.degree()
    }

    /// Largest Witt length allowed by the budget.
    pub fn cap(&self) -> usize {
        self.witt.n()
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn k(&self) -> &Laurent<FiniteField> {
        &self.k
    }

    pub fn witt(&self) -> &WittRing<Laurent<FiniteField>> {
        &self.witt
    }

    pub fn residue_witt(&self) -> &WittRing<FiniteField> {
        &self.residue_witt
    }

    pub fn covectors(&self) -> CovectorGroup<Laurent<FiniteField>> {
        CovectorGroup::new(self.witt.clone()).expect("characteristic p")
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    pub fn with_policy(&self, policy: PrecisionPolicy) -> Self {
        LocalField { policy, ..self.clone() }
    }

    fn lift_ring(&self, precision: u32) -> Result<LiftRing> {
        let mut lifts = self.lifts.lock().expect("lift cache poisoned");
        if let Some(r) = lifts.get(&precision) {
            return Ok(r.clone());
        }
        let r = LiftRing::new(&self.field, precision)?;
        lifts.insert(precision, r.clone());
        Ok(r)
    }

    fn check_length(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::LengthOutOfRange(0));
        }
        self.budget.check_length(self.p(), n)
    }

    /// `[a, b)_{p^n}` with `n = len(a)`.
    pub fn asw_symbol(&self, a: &KWitt, b: &KElem) -> Result<SymbolValue> {
        let n = a.len();
        self.check_length(n)?;
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.witt.is_zero(a) {
            return Ok(SymbolValue::zero(self.p(), n as u32));
        }
        let mut slack = self.policy.initial_slack(n);
        let mut doublings = 0;
        loop {
            match self.asw_symbol_at(a, b, slack) {
                Err(Error::Integrality { .. }) if doublings < self.policy.max_doublings => {
                    slack = (slack * 2).max(1);
                    doublings += 1;
                }
                other => return other,
            }
        }
    }

    /// `[a, b)_{p^n}` computed with exactly `n + slack` p-adic digits.
    ///
    /// Residue route: lift `a` and `b` coefficientwise by Teichmüller
    /// representatives, take `r_i = Res(w_i(A) dlog B)`, solve for the Witt
    /// vector with ghost components `r_i`, reduce mod `p` and take the trace
    /// down to `W_n(F_p)`.
    pub fn asw_symbol_at(&self, a: &KWitt, b: &KElem, slack: u32) -> Result<SymbolValue> {
        let n = a.len();
        self.check_length(n)?;
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        let p = self.p();
        let precision = (n as u32 + slack).max(2);
        let lift = self.lift_ring(precision)?;
        let kl = Laurent::new(lift.clone());
        let teich = |x: &KElem| self.k.try_map_coeffs(x, &kl, |c| lift.teichmuller(*c));
        let coords = a.coords().iter().map(teich).collect::<Result<Vec<_>>>()?;
        let bl = teich(b)?;

        let mut ghosts = Vec::with_capacity(n);
        for i in 0..n {
            let mut w = kl.zero();
            let mut pj = 1i64;
            for (j, aj) in coords.iter().enumerate().take(i + 1) {
                if j > 0 {
                    pj *= p as i64;
                }
                let e = p.pow((i - j) as u32);
                let term = kl.pow_upto(aj, e, 0);
                w = kl.add(&w, &kl.scale(&term, &lift.from_i64(pj)));
            }
            ghosts.push(w);
        }
        let pole = ghosts.iter().filter_map(|w| w.lo()).map(|lo| -lo).max().unwrap_or(0).max(0);
        let dlog = kl.dlog_series(&bl, pole - 1)?;
        let residues: Vec<LiftElem> = ghosts
            .iter()
            .map(|w| {
                let terms = w.terms().filter(|(k, _)| *k <= 0);
                let prods: Vec<LiftElem> =
                    terms.map(|(k, c)| lift.mul(c, &kl.coeff(&dlog.poly, -1 - k))).collect();
                lift.sum(prods.iter())
            })
            .collect();
        let rho = from_ghost(&lift, p, &residues)?;
        let reduced = WittVector::new(rho.coords().iter().map(|c| lift.reduce(c)).collect());
        self.residue_to_value(&reduced)
    }

    /// Trace `W_n(F_q) -> W_n(F_p)` followed by `W_n(F_p) = Z/p^n`.
    fn residue_to_value(&self, x: &WittVector<Fq>) -> Result<SymbolValue> {
        let w = &self.residue_witt;
        let mut acc = w.zero_len(x.len());
        let mut y = x.clone();
        for _ in 0..self.f() {
            acc = w.add(&acc, &y)?;
            y = w.frobenius(&y)?;
        }
        let v = w.to_integer(&acc)?;
        Ok(SymbolValue::new(self.p(), x.len() as u32, v as i128))
    }

    /// `Tr Res(a dlog b)`, the symbol at `n = 1` by the classical formula.
    pub fn classical_symbol(&self, a: &KElem, b: &KElem) -> Result<SymbolValue> {
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        let order = match a.lo() {
            None => return Ok(SymbolValue::zero(self.p(), 1)),
            Some(lo) => (-1 - lo).max(-1),
        };
        let dlog = self.k.dlog_series(b, order)?;
        let res = self.k.series_residue(&self.k.series_mul(a, &dlog))?;
        Ok(SymbolValue::new(self.p(), 1, self.field.trace_to_prime(res) as i128))
    }

    /// `([a, b)_{p^n}, [Va, b)_{p^{n+1}})` for the extending `V`.
    pub fn asw_symbol_shift_check(&self, a: &KWitt, b: &KElem) -> Result<(SymbolValue, SymbolValue)> {
        self.check_length(a.len() + 1)?;
        let lo = self.asw_symbol(a, b)?;
        let va = self.witt.verschiebung(a, a.len() + 1)?;
        let hi = self.asw_symbol(&va, b)?;
        Ok((lo, hi))
    }

    /// `((a, b))_{p^n} = sum_j [F^j a [b_j], b_j)_{p^n}`, skipping `b_j = 0`.
    pub fn pairing_n(&self, a: &KWitt, b: &KWitt) -> Result<SymbolValue> {
        let n = a.len();
        if b.len() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("length {n}"),
                found: format!("length {}", b.len()),
            });
        }
        self.check_length(n)?;
        let mut acc = SymbolValue::zero(self.p(), n as u32);
        if self.witt.is_zero(a) {
            return Ok(acc);
        }
        let mut fa = a.clone();
        for (j, bj) in b.coords().iter().enumerate() {
            if j > 0 {
                fa = self.witt.frobenius(&fa)?;
            }
            if bj.is_zero() {
                continue;
            }
            let term = self.asw_symbol(&self.witt.scale_teich(&fa, bj), bj)?;
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// `((a, b))_{p^m,p^n}` at level `min(m, n)`.
    ///
    /// For `m != n` the value is computed through `((V^{l-m} a, V^{l-n} b))_{p^l}`
    /// with `l = max(m, n)` and through the direct sum over `b_j`; the two
    /// must agree.
    pub fn pairing_mn(&self, a: &KWitt, b: &KWitt) -> Result<SymbolValue> {
        let (m, n) = (a.len(), b.len());
        self.check_length(m)?;
        self.check_length(n)?;
        let k = m.min(n) as u32;
        if m == n {
            return self.pairing_n(a, b);
        }
        let lifted = self.pairing_lifted(a, b)?;
        let direct = self.pairing_direct(a, b)?;
        if !lifted.same_class(&direct) {
            return Err(Error::RouteDisagreement(format!(
                "(({m}, {n})) lifted {lifted}, direct {direct}"
            )));
        }
        direct.to_level(k)
    }

    /// `((V^{l-m} a, V^{l-n} b))_{p^l}`, `l = max(m, n)`.
    pub fn pairing_lifted(&self, a: &KWitt, b: &KWitt) -> Result<SymbolValue> {
        let l = a.len().max(b.len());
        self.check_length(l)?;
        let va = self.witt.verschiebung_pow(a, l - a.len(), true)?;
        let vb = self.witt.verschiebung_pow(b, l - b.len(), true)?;
        self.pairing_n(&va, &vb)
    }

    /// `sum_j [F^{m+j} a F^n [b_j], b_j)_{p^m}` with the common Frobenius
    /// powers cancelled.
    pub fn pairing_direct(&self, a: &KWitt, b: &KWitt) -> Result<SymbolValue> {
        let (m, n) = (a.len(), b.len());
        self.check_length(m)?;
        let mut acc = SymbolValue::zero(self.p(), m as u32);
        if self.witt.is_zero(a) {
            return Ok(acc);
        }
        for (j, bj) in b.coords().iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            let x = if m + j >= n {
                let fa = self.witt.frobenius_pow(a, (m + j - n) as u32)?;
                self.witt.scale_teich(&fa, bj)
            } else {
                let e = self.p().pow((n - m - j) as u32);
                self.witt.scale_teich(a, &self.k.pow(bj, e))
            };
            acc = acc.add(&self.asw_symbol(&x, bj)?);
        }
        Ok(acc)
    }

    /// `((x, y))_{p^inf}` through the minimal windows.
    pub fn pairing_inf(&self, x: &Covector<KElem>, y: &Covector<KElem>) -> Result<SymbolValue> {
        if x.is_zero() || y.is_zero() {
            return Ok(SymbolValue::zero(self.p(), 0));
        }
        let g = self.covectors();
        self.pairing_mn(&g.lift(x, x.len())?, &g.lift(y, y.len())?)
    }

    /// `((x, y))_{p^inf}` with windows padded to lengths `m` and `n`.
    pub fn pairing_inf_at(&self, x: &Covector<KElem>, y: &Covector<KElem>, m: usize, n: usize) -> Result<SymbolValue> {
        let g = self.covectors();
        self.pairing_mn(&g.lift(x, m)?, &g.lift(y, n)?)
    }

    /// `[x, b)_{p^inf}` through the minimal window.
    pub fn asw_symbol_inf(&self, x: &Covector<KElem>, b: &KElem) -> Result<SymbolValue> {
        if b.is_zero() {
            return Err(Error::ZeroElement);
        }
        if x.is_zero() {
            return Ok(SymbolValue::zero(self.p(), 0));
        }
        self.asw_symbol(&self.covectors().lift(x, x.len())?, b)
    }
}

/// Solves `wp(x) = target` in `W_n(F_q)`.
///
/// The first coordinate is found by exhaustive search; the rest of the
/// target is then peeled off with `V` and solved one level down. Returns
/// `None` when some level has no root, which for the first level is the
/// obstruction `Tr(a_0) != 0`.
pub fn wp_solve(w: &WittRing<FiniteField>, target: &WittVector<Fq>) -> Result<Option<WittVector<Fq>>> {
    let n = target.len();
    if n == 0 {
        return Ok(Some(target.clone()));
    }
    let field = w.base();
    let t0 = target.coords()[0];
    let Some(x0) = field.elements().find(|x| field.sub(&field.frobenius(x), x) == t0) else {
        return Ok(None);
    };
    let tx = w.teichmuller_len(x0, n);
    let rest = w.sub(target, &w.artin_schreier(&tx)?)?;
    debug_assert_eq!(rest.coords()[0], Fq(0));
    if n == 1 {
        return Ok(Some(tx));
    }
    let tail = WittVector::new(rest.coords()[1..].to_vec());
    let Some(y) = wp_solve(w, &tail)? else {
        return Ok(None);
    };
    let vy = w.verschiebung(&y, n)?;
    Ok(Some(w.add(&tx, &vy)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kelem(k: &Laurent<FiniteField>, terms: &[(i64, u32)]) -> KElem {
        k.from_terms(terms.iter().map(|&(e, c)| (e, Fq(c))))
    }

    #[test]
    fn symbol_value_levels() {
        let a = SymbolValue::new(2, 1, 1);
        let b = SymbolValue::new(2, 2, 2);
        assert!(a.same_class(&b));
        assert_eq!(a.embed(2), b);
        assert_eq!(b.to_level(1).unwrap(), a);
        assert!(SymbolValue::new(2, 2, 1).to_level(1).is_err());
        assert_eq!(SymbolValue::new(3, 2, -1).value, 8);
        assert_eq!(a.add(&SymbolValue::new(2, 2, 1)), SymbolValue::new(2, 2, 3));
        assert!(SymbolValue::zero(2, 0).same_class(&SymbolValue::zero(2, 3)));
        assert_eq!(SymbolValue::new(2, 2, 1).order(), 4);
    }

    #[test]
    fn anchor_is_one() {
        for (p, f) in [(2, 1), (3, 1), (5, 1)] {
            let kf = LocalField::new(p, f).unwrap();
            let t = kf.k().t();
            for n in 1..=kf.cap() {
                let a = kf.witt().one_len(n);
                let v = kf.asw_symbol(&a, &t).unwrap();
                assert_eq!(v, SymbolValue::new(p, n as u32, 1), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn unramified_constants_give_the_teichmuller_trace() {
        let kf = LocalField::new(2, 2).unwrap();
        let t = kf.k().t();
        for c in kf.field().elements() {
            for n in 1..=kf.cap() {
                let lift = LiftRing::new(kf.field(), n as u32).unwrap();
                let w = lift.teichmuller(c).unwrap();
                let tr = lift.add(&w, &lift.mul(&w, &w));
                let cs = lift.coeffs(&tr);
                assert!(cs[1..].iter().all(|&d| d == 0));
                let a = kf.witt().teichmuller_len(kf.k().constant(c), n);
                let v = kf.asw_symbol(&a, &t).unwrap();
                assert_eq!(v, SymbolValue::new(2, n as u32, cs[0] as i128), "c={c:?} n={n}");
            }
        }
    }

    #[test]
    fn classical_formula_examples() {
        let kf = LocalField::new(3, 1).unwrap();
        let k = kf.k();
        let a = kelem(k, &[(-1, 1)]);
        let b = kelem(k, &[(0, 1), (1, 1)]);
        assert_eq!(kf.classical_symbol(&a, &b).unwrap(), SymbolValue::new(3, 1, 1));
        let a1 = WittVector::new(vec![a.clone()]);
        assert_eq!(kf.asw_symbol(&a1, &b).unwrap(), SymbolValue::new(3, 1, 1));
        assert_eq!(kf.classical_symbol(&k.one(), &k.t()).unwrap(), SymbolValue::new(3, 1, 1));
    }

    #[test]
    fn rejects_zero_b() {
        let kf = LocalField::new(2, 1).unwrap();
        let a = kf.witt().one_len(1);
        assert_eq!(kf.asw_symbol(&a, &kf.k().zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn budget_is_enforced() {
        let kf = LocalField::new(5, 1).unwrap();
        let a = WittVector::new(vec![kf.k().one(); 3]);
        assert!(matches!(kf.asw_symbol(&a, &kf.k().t()), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(LocalField::new(2, 3), Err(Error::DegreeBudgetExceeded { .. })));
    }

    #[test]
    fn shift_check_examples() {
        let kf = LocalField::new(2, 1).unwrap();
        let t = kf.k().t();
        let (lo, hi) = kf.asw_symbol_shift_check(&kf.witt().one_len(1), &t).unwrap();
        assert_eq!(lo, SymbolValue::new(2, 1, 1));
        assert_eq!(hi, SymbolValue::new(2, 2, 2));
        let (z0, z1) = kf.asw_symbol_shift_check(&kf.witt().zero_len(1), &t).unwrap();
        assert!(z0.is_zero() && z1.is_zero());
    }

    #[test]
    fn slack_does_not_change_the_value() {
        let kf = LocalField::new(2, 1).unwrap();
        let k = kf.k();
        let a = WittVector::new(vec![kelem(k, &[(-3, 1), (1, 1)]), kelem(k, &[(-1, 1)]), kelem(k, &[(-2, 1), (0, 1)])]);
        let b = kelem(k, &[(-1, 1), (0, 1), (2, 1)]);
        let v1 = kf.asw_symbol_at(&a, &b, 2).unwrap();
        let v2 = kf.asw_symbol_at(&a, &b, 6).unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn wp_solve_examples() {
        let f2 = FiniteField::prime(2).unwrap();
        let w = WittRing::new(f2, 2, 1).unwrap();
        assert_eq!(wp_solve(&w, &w.zero()).unwrap(), Some(w.zero()));
        assert_eq!(wp_solve(&w, &w.one()).unwrap(), None);
        let f4 = FiniteField::gf(2, 2).unwrap();
        let w4 = WittRing::new(f4.clone(), 2, 3).unwrap();
        let x = wp_solve(&w4, &w4.one_len(1)).unwrap().unwrap();
        assert_eq!(w4.artin_schreier(&x).unwrap(), w4.one_len(1));
        for c in f4.elements() {
            for d in f4.elements() {
                let target = WittVector::new(vec![c, d, Fq(1)]);
                match wp_solve(&w4, &target).unwrap() {
                    Some(x) => assert_eq!(w4.artin_schreier(&x).unwrap(), target),
                    None => {
                        let mut tr = w4.add(&target, &w4.frobenius(&target).unwrap()).unwrap();
                        tr = w4.sub(&tr, &w4.zero_len(3)).unwrap();
                        assert!(!w4.is_zero(&tr));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_vanishes_on_zero() {
        let kf = LocalField::new(2, 1).unwrap();
        let k = kf.k();
        let a = WittVector::new(vec![kelem(k, &[(-1, 1)]), k.t()]);
        let z = kf.witt().zero_len(2);
        assert!(kf.pairing_n(&a, &z).unwrap().is_zero());
        assert!(kf.pairing_n(&z, &a).unwrap().is_zero());
    }
}
