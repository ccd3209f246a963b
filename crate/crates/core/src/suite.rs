//! The registered property suites and their seeded runner.
//!
//! Each suite draws its witnesses from a [`Sampler`] stream keyed by
//! `(seed, suite id, sample index)`, so a report is reproducible and every
//! recorded counterexample can be replayed on its own.

use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covector::Covector;
use crate::forms::{self, FormalTensor, RelationKind, Rewrite};
use crate::json::{encode_covector, encode_tensor, encode_witt};
use crate::ring::{Codec, FiniteField, Laurent, Ring};
use crate::sample::Sampler;
use crate::symbol::{KElem, KWitt, LocalField, PrecisionPolicy, SymbolValue};
use crate::witt::{WittRing, WittVector};
use crate::{Budget, Error, Integers, Result};

/// What a suite exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Area {
    Witt,
    Covector,
    Symbol,
    Pairing,
    Forms,
}

/// A catalog entry. The description names the statement being checked.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SuiteInfo {
    pub id: &'static str,
    pub area: Area,
    pub description: &'static str,
    /// Runs once, enumerating or searching instead of sampling.
    pub exhaustive: bool,
    #[serde(skip)]
    check: Check,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSpec {
    pub suite: String,
    pub p: u64,
    pub f: u32,
    pub n: usize,
    /// Second level for the two-level pairings; each suite picks its default.
    pub m: Option<usize>,
    pub samples: u64,
    pub seed: u64,
    pub policy: PrecisionPolicy,
    pub budget: Budget,
}

impl SuiteSpec {
    pub fn new(suite: &str, p: u64, f: u32, n: usize) -> Self {
        SuiteSpec {
            suite: suite.to_string(),
            p,
            f,
            n,
            m: None,
            samples: 100,
            seed: 0,
            policy: PrecisionPolicy::default(),
            budget: Budget::default(),
        }
    }

    pub fn samples(mut self, samples: u64) -> Self {
        self.samples = samples;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = Some(m);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub index: u64,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub description: String,
    pub p: u64,
    pub f: u32,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub seed: u64,
    pub samples_run: u64,
    pub failures: Vec<SampleFailure>,
    /// Values observed by exhaustive suites, such as the anchor symbol.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed: Option<Value>,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// The report without its timing, for byte-for-byte comparisons.
    pub fn without_timing(&self) -> Self {
        SuiteReport { wall_time_ms: 0.0, ..self.clone() }
    }
}

pub fn catalog() -> &'static [SuiteInfo] {
    CATALOG
}

pub fn find(id: &str) -> Result<&'static SuiteInfo> {
    CATALOG.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownSuite(id.to_string()))
}

pub fn run_suite(spec: &SuiteSpec) -> Result<SuiteReport> {
    let info = find(&spec.suite)?;
    run(spec, info.id, info.description, info.exhaustive, info.check, None)
}

/// Samples generators of one relation kind and checks that `alpha` kills them.
pub fn check_relation(spec: &SuiteSpec, kind: RelationKind) -> Result<SuiteReport> {
    run(spec, "relation-check", "alpha vanishes on sampled generators", false, relation_kind_check, Some(kind))
}

fn run(
    spec: &SuiteSpec,
    id: &'static str,
    description: &str,
    exhaustive: bool,
    check: Check,
    relation: Option<RelationKind>,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let kf = LocalField::with_config(spec.p, spec.f, spec.budget.clone(), spec.policy)?;
    if spec.n == 0 {
        return Err(Error::LengthOutOfRange(0));
    }
    spec.budget.check_length(spec.p, spec.n)?;
    if let Some(m) = spec.m {
        if m == 0 {
            return Err(Error::LengthOutOfRange(0));
        }
        spec.budget.check_length(spec.p, m)?;
    }
    let ctx = Ctx { kf: &kf, n: spec.n, m: spec.m, samples: spec.samples, relation };
    let stream = match relation {
        Some(kind) => format!("{id}:{kind}"),
        None => id.to_string(),
    };
    let count = if exhaustive { 1 } else { spec.samples };
    let outcomes: Vec<(u64, Verdict)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut s = Sampler::new(kf.field(), spec.seed, &stream, i);
            check(&ctx, &mut s).map(|v| (i, v))
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    let mut observed = None;
    for (index, v) in outcomes {
        if let Some(w) = v.failure {
            failures.push(SampleFailure { index, witness: w });
        }
        if observed.is_none() {
            observed = v.note;
        }
    }
    failures.sort_by_key(|f| f.index);
    Ok(SuiteReport {
        suite: match relation {
            Some(kind) => format!("{id}:{kind}"),
            None => id.to_string(),
        },
        description: description.to_string(),
        p: spec.p,
        f: spec.f,
        n: spec.n,
        m: spec.m,
        seed: spec.seed,
        samples_run: count,
        failures,
        observed,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

type Check = fn(&Ctx, &mut Sampler) -> Result<Verdict>;

struct Ctx<'a> {
    kf: &'a LocalField,
    n: usize,
    m: Option<usize>,
    samples: u64,
    relation: Option<RelationKind>,
}

impl Ctx<'_> {
    fn p(&self) -> u64 {
        self.kf.p()
    }

    fn k(&self) -> &Laurent<FiniteField> {
        self.kf.k()
    }

    fn w(&self) -> &WittRing<Laurent<FiniteField>> {
        self.kf.witt()
    }

    /// Requires `level <= cap`.
    fn need(&self, level: usize) -> Result<()> {
        self.kf.budget().check_length(self.p(), level)
    }

    fn wj(&self, a: &KWitt) -> Value {
        wv(self.w(), a)
    }

    fn ej(&self, b: &KElem) -> Value {
        serde_json::to_value(self.k().encode(b)).expect("payloads serialize")
    }

    fn cj(&self, x: &Covector<KElem>) -> Value {
        serde_json::to_value(encode_covector(self.k(), self.p(), x)).expect("covectors serialize")
    }

    fn tj(&self, x: &FormalTensor<KElem>) -> Value {
        serde_json::to_value(encode_tensor(self.kf, x)).expect("tensors serialize")
    }

    fn witts(&self, s: &mut Sampler, n: usize, count: usize) -> Vec<KWitt> {
        (0..count).map(|_| s.witt(n)).collect()
    }
}

fn wv<R: Codec>(w: &WittRing<R>, a: &WittVector<R::Elem>) -> Value {
    serde_json::to_value(encode_witt(w.base(), w.p(), a)).expect("vectors serialize")
}

fn sv(v: &SymbolValue) -> Value {
    json!({ "value": v.value, "modulus": v.modulus() })
}

#[derive(Default)]
struct Verdict {
    failure: Option<Value>,
    note: Option<Value>,
}

/// Collects the identities violated by one sample.
#[derive(Default)]
struct Probe {
    violations: Vec<Value>,
}

impl Probe {
    fn holds(&mut self, identity: &str, ok: bool, detail: impl FnOnce() -> Value) {
        if !ok {
            self.violations.push(json!({ "identity": identity, "detail": detail() }));
        }
    }

    fn same(&mut self, identity: &str, lhs: &SymbolValue, rhs: &SymbolValue) {
        self.holds(identity, lhs.same_class(rhs), || json!({ "lhs": sv(lhs), "rhs": sv(rhs) }));
    }

    fn zero(&mut self, identity: &str, v: &SymbolValue) {
        self.same(identity, v, &SymbolValue::zero(v.p, v.level));
    }

    fn vectors<R: Codec>(&mut self, identity: &str, w: &WittRing<R>, l: &WittVector<R::Elem>, r: &WittVector<R::Elem>) {
        self.holds(identity, l == r, || json!({ "lhs": wv(w, l), "rhs": wv(w, r) }));
    }

    fn verdict(self, inputs: impl FnOnce() -> Value) -> Verdict {
        if self.violations.is_empty() {
            return Verdict::default();
        }
        Verdict { failure: Some(json!({ "inputs": inputs(), "violations": self.violations })), note: None }
    }
}

// Witt ring identities, run over F_q and over F_q((t)).

type WittBody<R> = fn(&WittRing<R>, &[WittVector<<R as Ring>::Elem>], &mut Rng64, &mut Probe) -> Result<()>;

/// The sampler's generator, for choosing shift amounts.
type Rng64 = rand_chacha::ChaCha8Rng;

fn witt_both(
    ctx: &Ctx,
    s: &mut Sampler,
    count: usize,
    residue: WittBody<FiniteField>,
    laurent: WittBody<Laurent<FiniteField>>,
) -> Result<Verdict> {
    let n = ctx.n;
    let xs: Vec<_> = (0..count).map(|_| s.residue_witt(n)).collect();
    let ys: Vec<_> = (0..count).map(|_| s.witt(n)).collect();
    let mut pr = Probe::default();
    let mut rng = s.rng().clone();
    residue(ctx.kf.residue_witt(), &xs, &mut rng, &mut pr)?;
    laurent(ctx.w(), &ys, &mut rng, &mut pr)?;
    let (rw, lw) = (ctx.kf.residue_witt(), ctx.w());
    Ok(pr.verdict(|| {
        json!({
            "residue": xs.iter().map(|a| wv(rw, a)).collect::<Vec<_>>(),
            "laurent": ys.iter().map(|a| wv(lw, a)).collect::<Vec<_>>(),
        })
    }))
}

fn ring_axioms<R: Codec>(w: &WittRing<R>, xs: &[WittVector<R::Elem>], _: &mut Rng64, pr: &mut Probe) -> Result<()> {
    let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
    let n = a.len();
    pr.vectors("(a+b)+c = a+(b+c)", w, &w.add(&w.add(a, b)?, c)?, &w.add(a, &w.add(b, c)?)?);
    pr.vectors("a+b = b+a", w, &w.add(a, b)?, &w.add(b, a)?);
    pr.vectors("(ab)c = a(bc)", w, &w.mul(&w.mul(a, b)?, c)?, &w.mul(a, &w.mul(b, c)?)?);
    pr.vectors("ab = ba", w, &w.mul(a, b)?, &w.mul(b, a)?);
    pr.vectors("a(b+c) = ab+ac", w, &w.mul(a, &w.add(b, c)?)?, &w.add(&w.mul(a, b)?, &w.mul(a, c)?)?);
    pr.vectors("a+0 = a", w, &w.add(a, &w.zero_len(n))?, a);
    pr.vectors("a*1 = a", w, &w.mul(a, &w.one_len(n))?, a);
    pr.vectors("a+(-a) = 0", w, &w.add(a, &w.neg(a)?)?, &w.zero_len(n));
    Ok(())
}

fn fv_is_p<R: Codec>(w: &WittRing<R>, xs: &[WittVector<R::Elem>], _: &mut Rng64, pr: &mut Probe) -> Result<()> {
    let a = &xs[0];
    let n = a.len();
    let pa = w.mul_int(a, w.p() as i64)?;
    pr.vectors("FVa = pa", w, &w.frobenius(&w.verschiebung(a, n)?)?, &pa);
    pr.vectors("VFa = pa", w, &w.verschiebung(&w.frobenius(a)?, n)?, &pa);
    pr.vectors("F(a+b) = Fa+Fb", w, &w.frobenius(&w.add(a, &xs[1])?)?, &w.add(&w.frobenius(a)?, &w.frobenius(&xs[1])?)?);
    Ok(())
}

fn v_products<R: Codec>(w: &WittRing<R>, xs: &[WittVector<R::Elem>], rng: &mut Rng64, pr: &mut Probe) -> Result<()> {
    let (a, b) = (&xs[0], &xs[1]);
    let n = a.len();
    let k = rng.gen_range(0..n);
    let l = rng.gen_range(0..n - k);
    let vk = |x: &WittVector<R::Elem>, j: usize| w.verschiebung_pow(x, j, false);
    let lhs = w.mul(&vk(a, k)?, &vk(b, l)?)?;
    let rhs = vk(&w.mul(&w.frobenius_pow(a, l as u32)?, &w.frobenius_pow(b, k as u32)?)?, k + l)?;
    pr.vectors(&format!("(V^{k}a)(V^{l}b) = V^{}(F^{l}a F^{k}b)", k + l), w, &lhs, &rhs);
    let lhs = w.mul(&vk(a, k)?, b)?;
    let rhs = vk(&w.mul(a, &w.frobenius_pow(b, k as u32)?)?, k)?;
    pr.vectors(&format!("(V^{k}a)b = V^{k}(a F^{k}b)"), w, &lhs, &rhs);
    Ok(())
}

fn decompose_round_trip<R: Codec>(w: &WittRing<R>, xs: &[WittVector<R::Elem>], _: &mut Rng64, pr: &mut Probe) -> Result<()> {
    let a = &xs[0];
    let parts = w.teich_decompose(a)?;
    pr.vectors("sum V^i[x_i] = a", w, &w.reconstruct(&parts)?, a);
    Ok(())
}

fn truncation_morphism<R: Codec>(w: &WittRing<R>, xs: &[WittVector<R::Elem>], rng: &mut Rng64, pr: &mut Probe) -> Result<()> {
    let (a, b) = (&xs[0], &xs[1]);
    let m = rng.gen_range(1..=a.len());
    let t = |x: &WittVector<R::Elem>| w.truncate(x, m);
    pr.vectors("T(a+b) = Ta+Tb", w, &t(&w.add(a, b)?)?, &w.add(&t(a)?, &t(b)?)?);
    pr.vectors("T(ab) = Ta Tb", w, &t(&w.mul(a, b)?)?, &w.mul(&t(a)?, &t(b)?)?);
    Ok(())
}

fn witt_axioms_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    witt_both(ctx, s, 3, ring_axioms::<FiniteField>, ring_axioms::<Laurent<FiniteField>>)
}

fn witt_fv_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    witt_both(ctx, s, 2, fv_is_p::<FiniteField>, fv_is_p::<Laurent<FiniteField>>)
}

fn witt_v_product_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    witt_both(ctx, s, 2, v_products::<FiniteField>, v_products::<Laurent<FiniteField>>)
}

fn witt_decompose_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    witt_both(ctx, s, 1, decompose_round_trip::<FiniteField>, decompose_round_trip::<Laurent<FiniteField>>)
}

fn witt_truncation_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    witt_both(ctx, s, 2, truncation_morphism::<FiniteField>, truncation_morphism::<Laurent<FiniteField>>)
}

fn integer_witt(ctx: &Ctx) -> Result<WittRing<Integers>> {
    WittRing::with_budget(Integers::default(), ctx.p(), ctx.n, ctx.kf.budget())
}

fn integer_vector(s: &mut Sampler, n: usize) -> WittVector<BigInt> {
    WittVector::new((0..n).map(|_| BigInt::from(s.rng().gen_range(-30i64..=30))).collect())
}

fn ghost_morphism_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let w = integer_witt(ctx)?;
    let z = w.base().clone();
    let (a, b) = (integer_vector(s, ctx.n), integer_vector(s, ctx.n));
    let (ga, gb) = (w.ghost(&a)?, w.ghost(&b)?);
    let zip = |op: fn(&Integers, &BigInt, &BigInt) -> BigInt| -> Vec<BigInt> {
        ga.iter().zip(&gb).map(|(x, y)| op(&z, x, y)).collect()
    };
    let mut pr = Probe::default();
    let show = |l: &[BigInt], r: &[BigInt]| json!({ "lhs": l.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "rhs": r.iter().map(|x| x.to_string()).collect::<Vec<_>>() });
    let (l, r) = (w.ghost(&w.add(&a, &b)?)?, zip(|z, x, y| z.add(x, y)));
    pr.holds("w(a+b) = w(a)+w(b)", l == r, || show(&l, &r));
    let (l, r) = (w.ghost(&w.sub(&a, &b)?)?, zip(|z, x, y| z.sub(x, y)));
    pr.holds("w(a-b) = w(a)-w(b)", l == r, || show(&l, &r));
    let (l, r) = (w.ghost(&w.mul(&a, &b)?)?, zip(|z, x, y| z.mul(x, y)));
    pr.holds("w(ab) = w(a)w(b)", l == r, || show(&l, &r));
    Ok(pr.verdict(|| json!({ "a": wv(&w, &a), "b": wv(&w, &b) })))
}

fn ghost_inverse_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let w = integer_witt(ctx)?;
    let a = integer_vector(s, ctx.n);
    let mut pr = Probe::default();
    pr.vectors("from_ghost(ghost(a)) = a", &w, &w.from_ghost(&w.ghost(&a)?)?, &a);
    Ok(pr.verdict(|| json!({ "a": wv(&w, &a) })))
}

/// Exhaustive over `W_n(F_p)`: `wp` vanishes and `m -> m*1` is an isomorphism.
fn fp_integers_check(ctx: &Ctx, _: &mut Sampler) -> Result<Verdict> {
    let (p, n) = (ctx.p(), ctx.n);
    let fp = FiniteField::prime(p)?;
    let w = WittRing::with_budget(fp.clone(), p, n, ctx.kf.budget())?;
    let q = p.pow(n as u32);
    let mut pr = Probe::default();
    let one = w.one_len(n);
    let mut seen = std::collections::HashSet::new();
    let mut images = Vec::with_capacity(q as usize);
    for m in 0..q {
        let x = w.from_integer(m as i64, n)?;
        pr.vectors(&format!("{m} * 1"), &w, &x, &w.mul_int(&one, m as i64)?);
        pr.holds(&format!("to_integer({m} * 1) = {m}"), w.to_integer(&x)? == m, || json!(m));
        pr.vectors(&format!("wp({m} * 1) = 0"), &w, &w.artin_schreier(&x)?, &w.zero_len(n));
        seen.insert(x.clone());
        images.push(x);
    }
    pr.holds("m -> m*1 is injective", seen.len() as u64 == q, || json!(seen.len()));
    for a in 0..q {
        for b in 0..q {
            let sum = w.add(&images[a as usize], &images[b as usize])?;
            if sum != images[((a + b) % q) as usize] {
                pr.holds(&format!("{a}*1 + {b}*1 = {}*1", (a + b) % q), false, || wv(&w, &sum));
            }
        }
    }
    // every element of W_n(F_p) is hit, so the kernel of wp is everything
    let mut total = 0u64;
    let mut coords = vec![0u64; n];
    loop {
        let x = WittVector::new(coords.iter().map(|&c| crate::ring::Fq(c as u32)).collect());
        pr.holds("wp vanishes on W_n(F_p)", w.is_zero(&w.artin_schreier(&x)?), || wv(&w, &x));
        pr.holds("element is some m*1", seen.contains(&x), || wv(&w, &x));
        total += 1;
        let mut i = 0;
        while i < n {
            coords[i] += 1;
            if coords[i] < p {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let mut v = pr.verdict(|| json!({ "p": p, "n": n }));
    v.note = Some(json!({ "elements": total }));
    Ok(v)
}

fn covector_group_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let g = ctx.kf.covectors();
    let n = ctx.n;
    let (x, y, z) = (s.covector(n, &g), s.covector(n, &g), s.covector(n, &g));
    let mut pr = Probe::default();
    let eq = |pr: &mut Probe, name: &str, l: Covector<KElem>, r: Covector<KElem>| {
        pr.holds(name, l == r, || json!({ "lhs": ctx.cj(&l), "rhs": ctx.cj(&r) }))
    };
    eq(&mut pr, "(x+y)+z = x+(y+z)", g.add(&g.add(&x, &y)?, &z)?, g.add(&x, &g.add(&y, &z)?)?);
    eq(&mut pr, "x+y = y+x", g.add(&x, &y)?, g.add(&y, &x)?);
    eq(&mut pr, "x+(-x) = 0", g.add(&x, &g.neg(&x)?)?, g.zero());
    let m = x.len().max(y.len()).max(1);
    if m + 2 <= ctx.kf.cap() {
        eq(&mut pr, "sum independent of lift length", g.add_at(&x, &y, m)?, g.add_at(&x, &y, m + 2)?);
    }
    let (a, b) = (s.witt(n), s.witt(n));
    let w = ctx.w();
    eq(&mut pr, "psi(a+b) = psi(a)+psi(b)", g.psi(&w.add(&a, &b)?), g.add(&g.psi(&a), &g.psi(&b))?);
    eq(&mut pr, "psi(Fa) = F psi(a)", g.psi(&w.frobenius(&a)?), g.frobenius(&g.psi(&a)));
    eq(&mut pr, "psi(Va) = V psi(a)", g.psi(&w.verschiebung(&a, n)?), g.verschiebung(&g.psi(&a)));
    if n < ctx.kf.cap() {
        eq(&mut pr, "psi_{n+1}(Va) = psi_n(a)", g.psi(&w.verschiebung(&a, n + 1)?), g.psi(&a));
    }
    Ok(pr.verdict(|| json!({ "x": ctx.cj(&x), "y": ctx.cj(&y), "z": ctx.cj(&z), "a": ctx.wj(&a), "b": ctx.wj(&b) })))
}

// The symbol [a, b).

fn asw_bilinear_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let (a, a2) = (s.witt(ctx.n), s.witt(ctx.n));
    let (b, b2) = (s.nonzero_laurent(), s.nonzero_laurent());
    let mut pr = Probe::default();
    let sum = kf.witt().add(&a, &a2)?;
    pr.same("[a+a',b) = [a,b)+[a',b)", &kf.asw_symbol(&sum, &b)?, &kf.asw_symbol(&a, &b)?.add(&kf.asw_symbol(&a2, &b)?));
    let prod = kf.k().mul(&b, &b2);
    pr.same("[a,bb') = [a,b)+[a,b')", &kf.asw_symbol(&a, &prod)?, &kf.asw_symbol(&a, &b)?.add(&kf.asw_symbol(&a, &b2)?));
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "a'": ctx.wj(&a2), "b": ctx.ej(&b), "b'": ctx.ej(&b2) })))
}

fn asw_wp_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let c = s.witt(ctx.n);
    let b = s.nonzero_laurent();
    let a = ctx.w().artin_schreier(&c)?;
    let mut pr = Probe::default();
    pr.zero("[wp(c),b) = 0", &ctx.kf.asw_symbol(&a, &b)?);
    Ok(pr.verdict(|| json!({ "c": ctx.wj(&c), "b": ctx.ej(&b) })))
}

fn asw_power_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let a = s.witt(ctx.n);
    let b = s.nonzero_laurent();
    let bq = ctx.k().pow(&b, ctx.p().pow(ctx.n as u32));
    let mut pr = Probe::default();
    pr.zero("[a,b^{p^n}) = 0", &ctx.kf.asw_symbol(&a, &bq)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.ej(&b) })))
}

fn asw_frobenius_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let a = s.witt(ctx.n);
    let b = s.nonzero_laurent();
    let w = kf.witt();
    let base = kf.asw_symbol(&a, &b)?;
    let mut pr = Probe::default();
    pr.same("[Fa,b) = [a,b)", &kf.asw_symbol(&w.frobenius(&a)?, &b)?, &base);
    pr.same("[Va,b) = p[a,b)", &kf.asw_symbol(&w.verschiebung(&a, ctx.n)?, &b)?, &base.mul_int(ctx.p() as i64));
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.ej(&b) })))
}

fn asw_shift_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    ctx.need(ctx.n + 1)?;
    let kf = ctx.kf;
    let a = s.witt(ctx.n);
    let b = s.nonzero_laurent();
    let (l, r) = kf.asw_symbol_shift_check(&a, &b)?;
    let mut pr = Probe::default();
    pr.same("[a,b)_{p^n} = [Va,b)_{p^{n+1}}", &l, &r);
    let m = ctx.m.unwrap_or(kf.cap()).max(ctx.n);
    let long = s.witt(m);
    let short = kf.witt().truncate(&long, ctx.n)?;
    let lhs = kf.asw_symbol(&long, &b)?.mul_int(ctx.p().pow((m - ctx.n) as u32) as i64);
    pr.same("p^{m-n}[a,b)_{p^m} = [Ta,b)_{p^n}", &lhs, &kf.asw_symbol(&short, &b)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.ej(&b), "long": ctx.wj(&long) })))
}

fn asw_unramified_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let a = s.witt_with(ctx.n, Sampler::integral);
    let b = s.integral_unit();
    let mut pr = Probe::default();
    pr.zero("[a,u) = 0 for integral a and a unit u", &ctx.kf.asw_symbol(&a, &b)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.ej(&b) })))
}

fn asw_uniformizer_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let a = s.witt_with(ctx.n, Sampler::in_t_fq_t);
    let mut pr = Probe::default();
    pr.zero("[a,t) = 0 for a in W_n(tF_q[t])", &ctx.kf.asw_symbol(&a, &ctx.k().t())?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a) })))
}

fn key_lemma_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let b = s.unit_times_monomial();
    let a = ctx.w().teichmuller_len(b.clone(), ctx.n);
    let mut pr = Probe::default();
    pr.zero("[[b],b) = 0", &ctx.kf.asw_symbol(&a, &b)?);
    Ok(pr.verdict(|| json!({ "b": ctx.ej(&b) })))
}

/// `[[1],t)` equals `f * 1`: the Frobenius of `F_q((t))` moves a root of
/// `wp(x) = [1]` by `f` steps of `x -> x + 1`.
fn anchor_expected(ctx: &Ctx, n: usize) -> SymbolValue {
    SymbolValue::new(ctx.p(), n as u32, ctx.kf.f() as i128)
}

fn anchor_check(ctx: &Ctx, _: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let one = kf.witt().one_len(ctx.n);
    let v = kf.asw_symbol(&one, &kf.k().t())?;
    let expected = anchor_expected(ctx, ctx.n);
    let mut pr = Probe::default();
    pr.same("[[1],t) = f mod p^n", &v, &expected);
    let mut out = pr.verdict(|| json!({ "a": ctx.wj(&one), "b": ctx.ej(&kf.k().t()) }));
    out.note = Some(sv(&v));
    Ok(out)
}

fn classical_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let a = s.laurent();
    let b = s.nonzero_laurent();
    let kf = ctx.kf;
    let lhs = kf.asw_symbol(&WittVector::new(vec![a.clone()]), &b)?;
    let mut pr = Probe::default();
    pr.same("[a,b)_p = Tr Res(a dlog b)", &lhs, &kf.classical_symbol(&a, &b)?);
    Ok(pr.verdict(|| json!({ "a": ctx.ej(&a), "b": ctx.ej(&b) })))
}

fn asw_inf_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let g = kf.covectors();
    let x = s.covector(ctx.n, &g);
    let b = s.nonzero_laurent();
    let c = s.nonzero_laurent();
    let mut pr = Probe::default();
    pr.zero("[wp(x),b) = 0", &kf.asw_symbol_inf(&g.artin_schreier(&x)?, &b)?);
    let y = s.covector(ctx.n, &g);
    let cq = kf.k().pow(&c, ctx.p().pow(y.len() as u32));
    pr.zero("[y,c^{p^l}) = 0 for a window of length l", &kf.asw_symbol_inf(&y, &cq)?);
    let one = g.psi(&kf.witt().one_len(ctx.n));
    pr.same("[psi([1]),t) = f", &kf.asw_symbol_inf(&one, &kf.k().t())?, &anchor_expected(ctx, one.len()));
    Ok(pr.verdict(|| json!({ "x": ctx.cj(&x), "b": ctx.ej(&b), "y": ctx.cj(&y), "c": ctx.ej(&c) })))
}

// The pairing ((a, b)).

/// `F^n` multiplies exponents by `p^n`; the summands it acts on are drawn
/// from `[-1, 1]` to keep the symbol's pole order small.
fn narrow_witt(s: &mut Sampler, n: usize) -> KWitt {
    s.witt_with(n, |s| s.laurent_in(-1, 1))
}

fn pairing_periodic_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let mut v = ctx.witts(s, n, 2);
    v.push(narrow_witt(s, n));
    v.push(narrow_witt(s, n));
    let fnp = |x: &KWitt| w.frobenius_pow(x, n as u32);
    let a2 = w.add(&v[0], &fnp(&v[2])?)?;
    let b2 = w.add(&v[1], &fnp(&v[3])?)?;
    let mut pr = Probe::default();
    pr.same("((a,b)) = ((a+F^n c, b+F^n d))", &kf.pairing_n(&v[0], &v[1])?, &kf.pairing_n(&a2, &b2)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&v[0]), "b": ctx.wj(&v[1]), "c": ctx.wj(&v[2]), "d": ctx.wj(&v[3]) })))
}

fn pairing_bilinear_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let v = ctx.witts(s, ctx.n, 3);
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let mut pr = Probe::default();
    pr.same("((a+b,c)) = ((a,c))+((b,c))", &kf.pairing_n(&w.add(a, b)?, c)?, &kf.pairing_n(a, c)?.add(&kf.pairing_n(b, c)?));
    pr.same("((a,b+c)) = ((a,b))+((a,c))", &kf.pairing_n(a, &w.add(b, c)?)?, &kf.pairing_n(a, b)?.add(&kf.pairing_n(a, c)?));
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b), "c": ctx.wj(c) })))
}

fn pairing_skew_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let v = ctx.witts(s, ctx.n, 2);
    let mut pr = Probe::default();
    pr.same("((a,b)) = -((b,a))", &kf.pairing_n(&v[0], &v[1])?, &kf.pairing_n(&v[1], &v[0])?.neg());
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&v[0]), "b": ctx.wj(&v[1]) })))
}

fn pairing_three_term_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let v = ctx.witts(s, ctx.n, 3);
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let total = kf
        .pairing_n(a, &w.mul(b, c)?)?
        .add(&kf.pairing_n(b, &w.mul(a, c)?)?)
        .add(&kf.pairing_n(c, &w.mul(a, b)?)?);
    let mut pr = Probe::default();
    pr.zero("((a,bc))+((b,ac))+((c,ab)) = 0", &total);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b), "c": ctx.wj(c) })))
}

fn frob_k(ctx: &Ctx, x: &KElem, k: usize) -> KElem {
    (0..k).fold(x.clone(), |acc, _| ctx.k().frobenius(&acc))
}

fn lemma_32_expansion_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let (k, w) = (ctx.k(), ctx.w());
    let n = ctx.n;
    let v = ctx.witts(s, n, 2);
    let (a, b) = (&v[0], &v[1]);
    let mut sum = SymbolValue::zero(ctx.p(), n as u32);
    for (i, ai) in a.coords().iter().enumerate() {
        for (j, bj) in b.coords().iter().enumerate() {
            if ai.is_zero() || bj.is_zero() {
                continue;
            }
            let y = frob_k(ctx, bj, i);
            let x = k.mul(&frob_k(ctx, ai, j), &y);
            sum = sum.add(&kf.asw_symbol(&w.teichmuller_len(x, n), &y)?);
        }
    }
    let mut pr = Probe::default();
    pr.same("((a,b)) = sum [[a_i^{p^j} b_j^{p^i}], b_j^{p^i})", &kf.pairing_n(a, b)?, &sum);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b) })))
}

fn lemma_32_teich_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let (k, w) = (ctx.k(), ctx.w());
    let n = ctx.n;
    let (a, b) = (s.laurent(), s.nonzero_laurent());
    let i = s.below(n as u64) as usize;
    let j = s.below(n as u64) as usize;
    let va = w.verschiebung_pow(&w.teichmuller_len(a.clone(), n), i, false)?;
    let vb = w.verschiebung_pow(&w.teichmuller_len(b.clone(), n), j, false)?;
    let y = frob_k(ctx, &b, i);
    let x = k.mul(&frob_k(ctx, &a, j), &y);
    let mut pr = Probe::default();
    pr.same(
        &format!("((V^{i}[a],V^{j}[b])) = [[a^(p^{j}) b^(p^{i})], b^(p^{i}))"),
        &kf.pairing_n(&va, &vb)?,
        &kf.asw_symbol(&w.teichmuller_len(x, n), &y)?,
    );
    let c = s.witt(n);
    pr.same("((c,[b])) = [c[b],b)", &kf.pairing_n(&c, &w.teichmuller_len(b.clone(), n))?, &kf.asw_symbol(&w.scale_teich(&c, &b), &b)?);
    Ok(pr.verdict(|| json!({ "a": ctx.ej(&a), "b": ctx.ej(&b), "c": ctx.wj(&c), "shifts": [i, j] })))
}

fn adjoint_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let v = ctx.witts(s, n, 2);
    let (a, b) = (&v[0], &v[1]);
    let mut pr = Probe::default();
    pr.same("((Fa,b)) = ((a,Vb))", &kf.pairing_n(&w.frobenius(a)?, b)?, &kf.pairing_n(a, &w.verschiebung(b, n)?)?);
    pr.same("((Va,b)) = ((a,Fb))", &kf.pairing_n(&w.verschiebung(a, n)?, b)?, &kf.pairing_n(a, &w.frobenius(b)?)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b) })))
}

fn level_shift_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    ctx.need(ctx.n + 1)?;
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let v = ctx.witts(s, n, 2);
    let (a, b) = (&v[0], &v[1]);
    let mut pr = Probe::default();
    pr.same(
        "((a,b))_{p^n} = ((Va,Vb))_{p^{n+1}}",
        &kf.pairing_n(a, b)?,
        &kf.pairing_n(&w.verschiebung(a, n + 1)?, &w.verschiebung(b, n + 1)?)?,
    );
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b) })))
}

fn level_scaling_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let m = ctx.m.unwrap_or(kf.cap()).max(n);
    let v = ctx.witts(s, m, 2);
    let (a, b) = (&v[0], &v[1]);
    let lhs = kf.pairing_n(&w.truncate(a, n)?, &w.truncate(b, n)?)?;
    let rhs = kf.pairing_n(a, b)?.mul_int(ctx.p().pow((m - n) as u32) as i64);
    let mut pr = Probe::default();
    pr.same("((a,b))_{p^n} = p^{m-n}((a,b))_{p^m}", &lhs, &rhs);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b), "m": m })))
}

fn antisymmetric_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let a = s.witt(ctx.n);
    let mut pr = Probe::default();
    pr.zero("((a,a)) = 0", &ctx.kf.pairing_n(&a, &a)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a) })))
}

fn two_levels(ctx: &Ctx) -> (usize, usize) {
    (ctx.m.unwrap_or(ctx.n), ctx.n)
}

fn mn_periodic_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let (m, n) = two_levels(ctx);
    let (a, c) = (s.witt(m), narrow_witt(s, m));
    let (b, d) = (s.witt(n), narrow_witt(s, n));
    let a2 = w.add(&a, &w.frobenius_pow(&c, n as u32)?)?;
    let b2 = w.add(&b, &w.frobenius_pow(&d, m as u32)?)?;
    let mut pr = Probe::default();
    pr.same("((a,b))_{m,n} = ((a+F^n c, b+F^m d))_{m,n}", &kf.pairing_mn(&a, &b)?, &kf.pairing_mn(&a2, &b2)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.wj(&b), "c": ctx.wj(&c), "d": ctx.wj(&d) })))
}

fn mn_skew_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let (m, n) = two_levels(ctx);
    let (a, b) = (s.witt(m), s.witt(n));
    let mut pr = Probe::default();
    let l = kf.pairing_mn(&a, &b)?;
    pr.same("((a,b))_{m,n} = -((b,a))_{n,m}", &l, &kf.pairing_mn(&b, &a)?.neg());
    let k = m.min(n) as u32;
    pr.holds("((a,b))_{m,n} is p^min(m,n)-torsion", l.to_level(k).is_ok(), || sv(&l));
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.wj(&b) })))
}

fn shift_trunc(w: &WittRing<Laurent<FiniteField>>, a: &KWitt, i: usize, j: usize) -> Result<KWitt> {
    let len = a.len();
    let va = if j >= len { w.zero_len(len) } else { w.verschiebung_pow(a, j, false)? };
    w.frobenius_pow(&va, i as u32)
}

fn case_split_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let (m, n) = two_levels(ctx);
    let (a, b) = (s.witt(m), s.witt(n));
    let mut e = [0usize; 4];
    for x in &mut e {
        *x = s.below(3) as usize;
    }
    let [i, j, k, l] = e;
    let lhs = kf.pairing_mn(&shift_trunc(w, &a, i, j)?, &shift_trunc(w, &b, k, l)?)?;
    let rhs = if m > j + k && n > i + l {
        kf.pairing_mn(&w.truncate(&a, m - j - k)?, &w.truncate(&b, n - i - l)?)?
    } else {
        SymbolValue::zero(ctx.p(), 0)
    };
    let mut pr = Probe::default();
    pr.same(&format!("((F^{i}V^{j}a, F^{k}V^{l}b))_{{{m},{n}}}"), &lhs, &rhs);
    if n >= 2 {
        let vb = w.verschiebung(&b, n)?;
        let short = w.truncate(&b, n - 1)?;
        let base = kf.pairing_mn(&a, &short)?;
        pr.same("((Fa,b))_{m,n} = ((a,b))_{m,n-1}", &kf.pairing_mn(&w.frobenius(&a)?, &b)?, &base);
        pr.same("((a,Vb))_{m,n} = ((a,b))_{m,n-1}", &kf.pairing_mn(&a, &vb)?, &base);
    }
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.wj(&b), "i": i, "j": j, "k": k, "l": l })))
}

fn routes_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = ctx.w();
    let (m, n) = two_levels(ctx);
    let (a, b) = (s.witt(m), s.witt(n));
    let mut pr = Probe::default();
    pr.same("lifted route = direct formula", &kf.pairing_lifted(&a, &b)?, &kf.pairing_direct(&a, &b)?);
    let j = s.below(n as u64) as usize;
    let c = s.nonzero_laurent();
    let cn = frob_k(ctx, &c, n);
    let term = w.scale_teich(&w.frobenius_pow(&a, (m + j) as u32)?, &cn);
    let lhs = kf.asw_symbol(&term, &c)?;
    let vc = w.verschiebung_pow(&w.teichmuller_len(c.clone(), n), j, false)?;
    pr.same(&format!("[F^(m+{j})a F^n[c], c)_{{p^m}} = ((a, V^{j}[c]))_{{m,n}}"), &lhs, &kf.pairing_mn(&a, &vc)?);
    let tc = w.teichmuller_len(c.clone(), n - j);
    pr.same(&format!("[F^(m+{j})a F^n[c], c)_{{p^m}} = ((a,[c]))_{{m,n-{j}}}"), &lhs, &kf.pairing_mn(&a, &tc)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.wj(&b), "c": ctx.ej(&c), "j": j })))
}

fn cov_padding_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    ctx.need(ctx.n + 1)?;
    let kf = ctx.kf;
    let g = kf.covectors();
    let (x, y) = (s.covector(ctx.n, &g), s.covector(ctx.n, &g));
    let (mx, my) = (x.len().max(1), y.len().max(1));
    let mut pr = Probe::default();
    pr.same(
        "((x,y)) on windows (m,n) and (m+1,n+1)",
        &kf.pairing_inf_at(&x, &y, mx, my)?,
        &kf.pairing_inf_at(&x, &y, mx + 1, my + 1)?,
    );
    Ok(pr.verdict(|| json!({ "x": ctx.cj(&x), "y": ctx.cj(&y) })))
}

fn cov_antisymmetric_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let g = kf.covectors();
    let (x, y, z) = (s.covector(ctx.n, &g), s.covector(ctx.n, &g), s.covector(ctx.n, &g));
    let mut pr = Probe::default();
    pr.same("((x,y)) = -((y,x))", &kf.pairing_inf(&x, &y)?, &kf.pairing_inf(&y, &x)?.neg());
    pr.zero("((x,x)) = 0", &kf.pairing_inf(&x, &x)?);
    let xz = g.add(&x, &z)?;
    if xz.len() <= kf.cap() {
        pr.same("((x+z,y)) = ((x,y))+((z,y))", &kf.pairing_inf(&xz, &y)?, &kf.pairing_inf(&x, &y)?.add(&kf.pairing_inf(&z, &y)?));
    }
    Ok(pr.verdict(|| json!({ "x": ctx.cj(&x), "y": ctx.cj(&y), "z": ctx.cj(&z) })))
}

/// The largest order reached by `((a,b))_{p^n}`; passes when it is `p^n`.
fn surjective_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let target = ctx.p().pow(n as u32);
    let t = kf.k().t();
    let inv_t = kf.k().monomial(kf.field().one(), -1);
    let mut best = kf.pairing_n(&w.teichmuller_len(inv_t, n), &w.teichmuller_len(t, n))?;
    let mut witness = Value::Null;
    let mut tries = 0u64;
    while best.order() < target && tries < ctx.samples.max(1) {
        let (a, b) = (s.witt(n), s.witt(n));
        let v = kf.pairing_n(&a, &b)?;
        if v.order() > best.order() {
            best = v;
            witness = json!({ "a": ctx.wj(&a), "b": ctx.wj(&b) });
        }
        tries += 1;
    }
    let mut pr = Probe::default();
    pr.holds("some ((a,b))_{p^n} has order p^n", best.order() == target, || sv(&best));
    let mut v = pr.verdict(|| json!({ "tries": tries }));
    v.note = Some(json!({ "value": best.value, "modulus": best.modulus(), "order": best.order(), "random_tries": tries, "witness": witness }));
    Ok(v)
}

// Forms.

fn random_tensor(s: &mut Sampler, n: usize, terms: usize) -> Result<FormalTensor<KElem>> {
    let mut t = FormalTensor::new(n);
    for _ in 0..terms {
        let c = [-2i64, -1, 1, 2][s.below(4) as usize];
        t.push(c, s.witt(n), s.witt(n))?;
    }
    Ok(t)
}

fn dlog_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let a0 = s.witt(ctx.n);
    let b = s.nonzero_laurent();
    let a = kf.witt().scale_teich(&a0, &b);
    let mut pr = Probe::default();
    let t = forms::dlog_term(kf, &a, &b)?;
    pr.same("alpha(a dlog[b]) = [a,b)", &forms::alpha_eval(kf, &t)?, &kf.asw_symbol(&a, &b)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&a), "b": ctx.ej(&b) })))
}

fn kernel_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let v = ctx.witts(s, n, 3);
    let b = s.nonzero_laurent();
    let mut pr = Probe::default();
    let a_eval = |x: &FormalTensor<KElem>| forms::alpha_eval(kf, x);
    pr.zero("alpha(da) = 0", &a_eval(&forms::d_term(kf, &v[0])?)?);
    pr.zero("alpha(Fa db - a dVb) = 0", &a_eval(&forms::frobenius_relation(kf, &v[0], &v[1])?)?);
    pr.zero("alpha(Va db - a dFb) = 0", &a_eval(&forms::verschiebung_relation(kf, &v[0], &v[1])?)?);
    let a = w.scale_teich(&v[2], &b);
    pr.zero("alpha(wp(a) dlog[b]) = 0", &a_eval(&forms::wp_dlog_relation(kf, &a, &b)?)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&v[0]), "b": ctx.wj(&v[1]), "c": ctx.wj(&v[2]), "u": ctx.ej(&b) })))
}

fn leibniz_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let w = kf.witt();
    let n = ctx.n;
    let v = ctx.witts(s, n, 2);
    let (a, b) = (&v[0], &v[1]);
    let mut t = FormalTensor::new(n);
    t.push(1, a.clone(), b.clone())?;
    t.push(1, b.clone(), a.clone())?;
    let mut pr = Probe::default();
    pr.zero("alpha(a db + b da) = 0", &forms::alpha_eval(kf, &t)?);
    let mut d = FormalTensor::new(n);
    d.push(1, w.one_len(n), w.mul(a, b)?)?;
    d.push(-1, a.clone(), b.clone())?;
    d.push(-1, b.clone(), a.clone())?;
    pr.zero("alpha(d(ab) - a db - b da) = 0", &forms::alpha_eval(kf, &d)?);
    let fn1 = w.frobenius_pow(&w.one_len(n), n as u32)?;
    let vn = w.verschiebung_pow(a, n, false)?;
    pr.zero("alpha(F^n 1 da) = 0", &forms::alpha_eval(kf, &FormalTensor::single(1, fn1, a.clone())?)?);
    pr.zero("alpha(1 dV^n a) = 0", &forms::alpha_eval(kf, &FormalTensor::single(1, w.one_len(n), vn)?)?);
    Ok(pr.verdict(|| json!({ "a": ctx.wj(a), "b": ctx.wj(b) })))
}

fn rewrite_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let v = ctx.witts(s, ctx.n, 2);
    let k = s.below(5) as u32;
    let mut pr = Probe::default();
    for rule in [Rewrite::FrobeniusLeft, Rewrite::VerschiebungLeft, Rewrite::Swap, Rewrite::Power(k)] {
        let (l, r) = forms::rewrite_sides(kf, rule, &v[0], &v[1])?;
        pr.same(&format!("{rule:?} preserves alpha"), &forms::alpha_eval(kf, &l)?, &forms::alpha_eval(kf, &r)?);
    }
    Ok(pr.verdict(|| json!({ "a": ctx.wj(&v[0]), "b": ctx.wj(&v[1]), "k": k })))
}

fn relations_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let mut pr = Probe::default();
    let mut seen = Vec::new();
    for kind in [RelationKind::MPrime, RelationKind::M, RelationKind::NPrime, RelationKind::N] {
        for g in forms::relation_generators(kf, kind, ctx.n, s)? {
            let v = forms::alpha_eval(kf, &g)?;
            pr.zero(&format!("alpha vanishes on {kind}"), &v);
            seen.push(json!({ "kind": kind.name(), "generator": ctx.tj(&g) }));
        }
    }
    Ok(pr.verdict(|| json!(seen)))
}

fn relation_kind_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kind = ctx.relation.expect("relation checks carry a kind");
    if kind.is_covector() {
        return cov_relations(ctx, s, kind);
    }
    let kf = ctx.kf;
    let mut pr = Probe::default();
    let gens = forms::relation_generators(kf, kind, ctx.n, s)?;
    for g in &gens {
        pr.zero(&format!("alpha vanishes on {kind}"), &forms::alpha_eval(kf, g)?);
    }
    Ok(pr.verdict(|| json!(gens.iter().map(|g| ctx.tj(g)).collect::<Vec<_>>())))
}

fn cov_relations(ctx: &Ctx, s: &mut Sampler, kind: RelationKind) -> Result<Verdict> {
    let kf = ctx.kf;
    let mut pr = Probe::default();
    let gens = forms::cov_generators(kf, kind, ctx.n, s)?;
    for g in &gens {
        pr.zero(&format!("alpha vanishes on {kind}"), &forms::alpha_inf(kf, g)?);
    }
    Ok(pr.verdict(|| {
        json!(gens
            .iter()
            .map(|g| g.terms().iter().map(|t| json!({ "c": t.c, "left": ctx.cj(&t.left), "right": ctx.cj(&t.right) })).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }))
}

fn ncov_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    cov_relations(ctx, s, RelationKind::NCov)
}

fn nprime_cov_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    cov_relations(ctx, s, RelationKind::NPrimeCov)
}

fn zero_extend(ctx: &Ctx, x: &FormalTensor<KElem>) -> Result<FormalTensor<KElem>> {
    let ext = |a: &KWitt| {
        let mut c = a.coords().to_vec();
        c.push(ctx.k().zero());
        WittVector::new(c)
    };
    let mut out = FormalTensor::new(x.n() + 1);
    for t in x.terms() {
        out.push(t.c, ext(&t.left), ext(&t.right))?;
    }
    Ok(out)
}

fn f_map_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    if ctx.n < 2 {
        return Err(Error::LengthOutOfRange(ctx.n));
    }
    let kf = ctx.kf;
    let x = random_tensor(s, ctx.n - 1, 2)?;
    let fx = forms::f_map(kf, &x)?;
    let lhs = forms::alpha_eval(kf, &fx)?;
    let mut pr = Probe::default();
    pr.same("alpha_n(f x) = alpha_{n-1}(x)", &lhs, &forms::alpha_eval(kf, &x)?);
    pr.same("alpha_n(f x) = p alpha_n(x extended by zero)", &lhs, &forms::alpha_eval(kf, &zero_extend(ctx, &x)?)?.mul_int(ctx.p() as i64));
    pr.zero("alpha_1(g(f x)) = 0", &forms::alpha_eval(kf, &forms::g_map(kf, &fx)?)?);
    Ok(pr.verdict(|| ctx.tj(&x)))
}

fn g_map_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let x = random_tensor(s, ctx.n, 2)?;
    let lhs = forms::alpha_eval(kf, &forms::g_map(kf, &x)?)?;
    let rhs = forms::alpha_eval(kf, &x)?.mul_int(ctx.p().pow(ctx.n as u32 - 1) as i64);
    let mut pr = Probe::default();
    pr.same("alpha_1(g x) = p^{n-1} alpha_n(x)", &lhs, &rhs);
    Ok(pr.verdict(|| ctx.tj(&x)))
}

fn reduce_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let x = random_tensor(s, ctx.n, 2)?;
    let r = forms::reduce_to_teich(kf, &x)?;
    let mut pr = Probe::default();
    pr.holds("reduction has only Teichmüller slots", r.terms().iter().all(|t| is_teich(&t.left) && is_teich(&t.right)), || ctx.tj(&r));
    pr.same("alpha(reduce x) = alpha(x)", &forms::alpha_eval(kf, &r)?, &forms::alpha_eval(kf, &x)?);
    Ok(pr.verdict(|| ctx.tj(&x)))
}

fn is_teich(a: &KWitt) -> bool {
    a.coords().iter().skip(1).all(|c| c.is_zero())
}

fn lemma_411_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    ctx.need(ctx.n + 1)?;
    let kf = ctx.kf;
    let (b, c) = (s.nonzero_laurent(), s.laurent());
    let eta = forms::wp_teich_relation(kf, ctx.n, &b, &c)?;
    let mut pr = Probe::default();
    pr.zero("alpha_{n+1}((V x V) eta) = 0", &forms::alpha_eval(kf, &forms::f_map(kf, &eta)?)?);
    Ok(pr.verdict(|| ctx.tj(&eta)))
}

fn gn_equal_check(ctx: &Ctx, s: &mut Sampler) -> Result<Verdict> {
    let kf = ctx.kf;
    let n = ctx.n;
    let x = random_tensor(s, n, 2)?;
    let kinds = [RelationKind::MPrime, RelationKind::M];
    let kind = kinds[s.below(2) as usize];
    let gens = forms::relation_generators(kf, kind, n, s)?;
    let g = &gens[s.below(gens.len() as u64) as usize];
    let mut pr = Probe::default();
    pr.holds("x = x + generator in G_n", forms::gn_equal(kf, &x, &x.plus(g)?)?, || ctx.tj(g));
    pr.holds("x = reduce_to_teich(x) in G_n", forms::gn_equal(kf, &x, &forms::reduce_to_teich(kf, &x)?)?, || Value::Null);
    let anchor = forms::dlog_term(kf, &kf.witt().one_len(n), &kf.k().t())?;
    if !anchor_expected(ctx, n).is_zero() {
        pr.holds("x != x + [1] dlog[t] in G_n", !forms::gn_equal(kf, &x, &x.plus(&anchor)?)?, || Value::Null);
    }
    Ok(pr.verdict(|| json!({ "x": ctx.tj(&x), "generator": ctx.tj(g) })))
}

macro_rules! suite {
    ($id:literal, $area:ident, $desc:literal, $check:ident) => {
        SuiteInfo { id: $id, area: Area::$area, description: $desc, exhaustive: false, check: $check }
    };
    ($id:literal, $area:ident, $desc:literal, $check:ident, exhaustive) => {
        SuiteInfo { id: $id, area: Area::$area, description: $desc, exhaustive: true, check: $check }
    };
}

static CATALOG: &[SuiteInfo] = &[
    suite!("witt-ring-axioms", Witt, "W_n(R) is a commutative ring, over F_q and F_q((t))", witt_axioms_check),
    suite!("witt-fv-p", Witt, "FV = VF = p: F and V compose to multiplication by p", witt_fv_check),
    suite!("witt-v-product", Witt, "(V^k a)(V^l b) = V^{k+l}(F^l a F^k b)", witt_v_product_check),
    suite!("witt-ghost-morphism", Witt, "Ghost components: w is a ring morphism over Z", ghost_morphism_check),
    suite!("witt-ghost-inverse", Witt, "Ghost components: from_ghost(ghost(a)) = a over Z", ghost_inverse_check),
    suite!("witt-truncation", Witt, "Truncation W_n -> W_m is a ring morphism", witt_truncation_check),
    suite!("lemma-2.1-decompose", Witt, "Lemma 2.1(ii): a = sum V^i [x_i] round-trips", witt_decompose_check),
    suite!("witt-fp-integers", Witt, "W_n(F_p) = Z/p^n: exhaustive ker wp = W_n(F_p) and m -> m*1 bijective and additive", fp_integers_check, exhaustive),
    suite!("covector-group", Covector, "CW(K): group axioms, lift-length independence, psi commutes with +, F, V", covector_group_check),
    suite!("asw-bilinear", Symbol, "[.,.) is bilinear", asw_bilinear_check),
    suite!("asw-wp-vanishing", Symbol, "[wp(c),b) = 0", asw_wp_check),
    suite!("asw-pn-power", Symbol, "[a,b^{p^n}) = 0", asw_power_check),
    suite!("asw-frobenius", Symbol, "[Fa,b) = [a,b) and [Va,b)_{p^n} = p[a,b)_{p^n}", asw_frobenius_check),
    suite!("asw-shift", Symbol, "[a,b)_{p^n} = [Va,b)_{p^{n+1}} and p^{m-n}[a,b)_{p^m} = [Ta,b)_{p^n}", asw_shift_check),
    suite!("asw-unramified", Symbol, "Unramified vanishing: integral a and a unit b give [a,b) = 0", asw_unramified_check),
    suite!("lemma-2.2-ii", Symbol, "Lemma 2.2(ii) at b = t: a in W_n(tF_q[t]) gives [a,t) = 0", asw_uniformizer_check),
    suite!("lemma-2.2-key", Symbol, "Lemma 2.2: [[b],b) = 0 for units times monomials b", key_lemma_check),
    suite!("anchor-normalization", Symbol, "Normalization [[1],t)_{p^n} = f mod p^n (1 over F_p((t)))", anchor_check, exhaustive),
    suite!("classical-n1", Symbol, "At n = 1: [a,b)_p = Tr Res(a dlog b)", classical_check),
    suite!("asw-inf", Symbol, "[.,.)_{p^inf}: vanishes on wp(CW(K)) and on p^l-th powers; anchor on psi([1])", asw_inf_check),
    suite!("prop-3.3-i", Pairing, "Prop 3.3(i): ((a,b)) = ((a+F^n c, b+F^n d))", pairing_periodic_check),
    suite!("prop-3.3-ii", Pairing, "Prop 3.3(ii): ((.,.))_{p^n} is bilinear", pairing_bilinear_check),
    suite!("prop-3.3-iii", Pairing, "Prop 3.3(iii): ((a,b)) = -((b,a))", pairing_skew_check),
    suite!("prop-3.3-iv", Pairing, "Prop 3.3(iv): ((a,bc))+((b,ac))+((c,ab)) = 0", pairing_three_term_check),
    suite!("lemma-3.2-i", Pairing, "Lemma 3.2(i): ((a,b)) = sum [[a_i^{p^j} b_j^{p^i}], b_j^{p^i})", lemma_32_expansion_check),
    suite!("lemma-3.2-ii", Pairing, "Lemma 3.2(ii): ((V^k[a],V^l[b])) = [[a^{p^l} b^{p^k}], b^{p^k}), with Remark 3.1(1)", lemma_32_teich_check),
    suite!("prop-3.7-adjoint", Pairing, "Prop 3.7: ((Fa,b)) = ((a,Vb)) and ((Va,b)) = ((a,Fb))", adjoint_check),
    suite!("prop-3.8-shift", Pairing, "Prop 3.8: ((a,b))_{p^n} = ((Va,Vb))_{p^{n+1}}", level_shift_check),
    suite!("cor-3.9-level", Pairing, "Cor 3.9: ((a,b))_{p^n} = p^{m-n}((a,b))_{p^m}", level_scaling_check),
    suite!("prop-3.10-antisymmetric", Pairing, "Prop 3.10: ((a,a)) = 0, including p = 2", antisymmetric_check),
    suite!("prop-3.11-ii", Pairing, "Prop 3.11(ii): ((a,b))_{m,n} = ((a+F^n c, b+F^m d))_{m,n}", mn_periodic_check),
    suite!("prop-3.11-iv", Pairing, "Prop 3.11(iv): ((a,b))_{m,n} = -((b,a))_{n,m}, p^min(m,n)-torsion", mn_skew_check),
    suite!("prop-3.13-case-split", Pairing, "Prop 3.13: ((F^iV^j a, F^kV^l b))_{m,n} case split", case_split_check),
    suite!("prop-3.14-routes", Pairing, "Prop 3.14: the direct formula agrees with Definition 2", routes_check),
    suite!("prop-3.17-padding", Pairing, "Prop 3.17: ((x,y))_{p^inf} is independent of window padding", cov_padding_check),
    suite!("prop-3.17-antisymmetric", Pairing, "Prop 3.17: ((.,.))_{p^inf} is bilinear and antisymmetric", cov_antisymmetric_check),
    suite!("prop-1.2-surjective", Pairing, "Prop 1.2: ((.,.))_{p^n} attains an element of order p^n", surjective_check, exhaustive),
    suite!("lemma-4.1-dlog", Forms, "Lemma 4.1: [a,b) = alpha(a dlog[b])", dlog_check),
    suite!("lemma-4.2-kernel", Forms, "Lemma 4.2: da, Fa db - a dVb, Va db - a dFb, wp(a) dlog[b] lie in ker alpha", kernel_check),
    suite!("lemma-4.4-leibniz", Forms, "Lemma 4.4: alpha(a db + b da) = 0 and alpha(F^n 1 da) = alpha(1 dV^n a) = 0", leibniz_check),
    suite!("lemma-4.5-rewrites", Forms, "Lemma 4.5: each rewriting rule preserves alpha", rewrite_check),
    suite!("lemma-4.5-reduce-teich", Forms, "Lemma 4.5: reduce_to_teich yields Teichmüller slots and preserves alpha", reduce_check),
    suite!("lemma-4.4-relations", Forms, "Lemma 4.4: alpha vanishes on the M_n', M_n, N_n', N_n generators", relations_check),
    suite!("lemma-4.7-f-map", Forms, "Lemma 4.7: alpha_n(f_n x) = alpha_{n-1}(x) = p alpha_n(x extended)", f_map_check),
    suite!("thm-4.10-g-map", Forms, "Theorem 4.10: alpha_p(g_n x) = p^{n-1} alpha_{p^n}(x)", g_map_check),
    suite!("thm-4.10-gn-equal", Forms, "Theorem 4.10: equality in G_n via alpha", gn_equal_check),
    suite!("lemma-4.11-probe", Forms, "Lemma 4.11: (V x V)(wp([a])[b]^{-1} x [b]) lies in ker alpha_{p^{n+1}}", lemma_411_check),
    suite!("lemma-4.12-ncov", Forms, "Lemma 4.12: alpha_{p^inf} vanishes on the N_cov generators", ncov_check),
    suite!("cor-4.14-nprime-cov", Forms, "Cor 4.14: alpha_{p^inf} vanishes on the N'_cov generators", nprime_cov_check),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_ids_are_unique() {
        let mut ids: Vec<_> = catalog().iter().map(|s| s.id).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), catalog().len());
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(find("nonexistent").unwrap_err(), Error::UnknownSuite("nonexistent".into()));
        let spec = SuiteSpec::new("nonexistent", 2, 1, 1);
        assert!(matches!(run_suite(&spec), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn budget_is_checked() {
        let spec = SuiteSpec::new("prop-3.7-adjoint", 5, 1, 3);
        assert!(matches!(run_suite(&spec), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn adjoint_suite_passes() {
        let r = run_suite(&SuiteSpec::new("prop-3.7-adjoint", 2, 1, 2).samples(100).seed(7)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.samples_run, 100);
    }

    #[test]
    fn anchor_reports_one_mod_nine() {
        let r = run_suite(&SuiteSpec::new("anchor-normalization", 3, 1, 2)).unwrap();
        assert!(r.passed());
        assert_eq!(r.samples_run, 1);
        assert_eq!(r.observed, Some(json!({ "value": 1, "modulus": 9 })));
    }

    #[test]
    fn relation_check_by_kind() {
        for kind in RelationKind::ALL {
            let r = check_relation(&SuiteSpec::new("", 3, 1, 2).samples(5), kind).unwrap();
            assert!(r.passed(), "{kind}: {:?}", r.failures);
            assert_eq!(r.suite, format!("relation-check:{kind}"));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = SuiteSpec::new("asw-bilinear", 3, 1, 2).samples(10).seed(3);
        let a = run_suite(&spec).unwrap().without_timing();
        let b = run_suite(&spec).unwrap().without_timing();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn a_broken_identity_is_reported_with_its_witness() {
        let kf = LocalField::new(2, 1).unwrap();
        let ctx = Ctx { kf: &kf, n: 1, m: None, samples: 1, relation: None };
        let mut pr = Probe::default();
        pr.same("1 = 0", &SymbolValue::new(2, 1, 1), &SymbolValue::zero(2, 1));
        let v = pr.verdict(|| json!({ "b": ctx.ej(&kf.k().t()) }));
        let w = v.failure.unwrap();
        assert_eq!(w["violations"][0]["detail"]["lhs"], json!({ "value": 1, "modulus": 2 }));
        assert_eq!(w["inputs"]["b"], json!({ "1": [1] }));
    }
}
