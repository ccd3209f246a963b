//! Runtime ring descriptions and their JSON element payloads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{FiniteField, Fq, Laurent, LaurentPoly, LiftElem, LiftRing, NumRing, Ring};
use crate::{Error, Integers, Rationals, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RingKind {
    PrimeField,
    FiniteField,
    LaurentPoly,
    LiftRing,
    LiftLaurent,
    Integers,
    Rationals,
}

/// A serializable description of a coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub p: u64,
    #[serde(default = "one_u32")]
    pub f: u32,
    /// Monic modulus, constant term first. Defaults to the first irreducible
    /// polynomial of degree `f`; for lift kinds this is the integer lift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
}

fn one_u32() -> u32 {
    1
}

impl RingDescriptor {
    pub fn prime_field(p: u64) -> Self {
        RingDescriptor { kind: RingKind::PrimeField, p, f: 1, modulus: None, precision: None }
    }

    pub fn laurent(p: u64, f: u32) -> Self {
        RingDescriptor { kind: RingKind::LaurentPoly, p, f, modulus: None, precision: None }
    }
}

/// One base-ring coefficient: a machine integer, or a decimal string for
/// big integers and `"a/b"` rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn from_bigint(c: &BigInt) -> Self {
        match c.to_i64() {
            Some(v) => Coeff::Int(v),
            None => Coeff::Text(c.to_string()),
        }
    }

    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            Coeff::Int(v) => Ok(BigInt::from(*v)),
            Coeff::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{s}` is not an integer"))),
        }
    }

    fn to_rational(&self) -> Result<BigRational> {
        match self {
            Coeff::Text(s) if s.contains('/') => {
                let (n, d) = s.split_once('/').unwrap();
                let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
                let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(BigRational::new(n, d))
            }
            c => c.to_bigint().map(BigRational::from_integer),
        }
    }
}

/// Element payload: base-ring coefficient lists keyed by `t`-exponent.
///
/// Decoding also accepts a bare coefficient list (exponent 0) or a single
/// coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Table(BTreeMap<i64, Vec<Coeff>>),
    List(Vec<Coeff>),
    Scalar(Coeff),
}

impl<'de> Deserialize<'de> for Payload {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        Payload::from_value(v).map_err(D::Error::custom)
    }
}

impl Payload {
    fn from_value(v: serde_json::Value) -> std::result::Result<Self, String> {
        use serde_json::Value;
        let coeff = |v: Value| serde_json::from_value::<Coeff>(v).map_err(|e| e.to_string());
        let coeffs = |v: Value| match v {
            Value::Array(items) => items.into_iter().map(coeff).collect(),
            other => coeff(other).map(|c| vec![c]),
        };
        match v {
            Value::Object(map) => {
                let mut table = BTreeMap::new();
                for (k, v) in map {
                    let k: i64 = k.trim().parse().map_err(|_| format!("exponent `{k}` is not an integer"))?;
                    table.insert(k, coeffs(v)?);
                }
                Ok(Payload::Table(table))
            }
            Value::Array(_) => coeffs(v).map(Payload::List),
            other => coeff(other).map(Payload::Scalar),
        }
    }

    fn into_table(self) -> BTreeMap<i64, Vec<Coeff>> {
        match self {
            Payload::Table(t) => t,
            Payload::List(l) => BTreeMap::from([(0, l)]),
            Payload::Scalar(c) => BTreeMap::from([(0, vec![c])]),
        }
    }
}

/// A ring element together with its ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingElement {
    pub ring: RingDescriptor,
    pub coeffs: Payload,
}

/// Encoding of elements of a concrete ring to and from JSON payloads.
pub trait Codec: Ring {
    fn descriptor(&self) -> RingDescriptor;
    fn encode(&self, x: &Self::Elem) -> Payload;
    fn decode(&self, payload: &Payload) -> Result<Self::Elem>;
}

/// Rings whose elements are finite coefficient lists.
trait BaseCodec: Ring {
    fn base_descriptor(&self) -> RingDescriptor;
    fn encode_base(&self, x: &Self::Elem) -> Vec<Coeff>;
    fn decode_base(&self, cs: &[Coeff]) -> Result<Self::Elem>;
}

fn trim_coeffs(mut v: Vec<Coeff>) -> Vec<Coeff> {
    while v.last() == Some(&Coeff::Int(0)) {
        v.pop();
    }
    v
}

impl BaseCodec for FiniteField {
    fn base_descriptor(&self) -> RingDescriptor {
        let kind = if self.is_prime_field() { RingKind::PrimeField } else { RingKind::FiniteField };
        let modulus = (!self.is_prime_field()).then(|| self.modulus().iter().map(|&c| c as i64).collect());
        RingDescriptor { kind, p: self.p(), f: self.degree(), modulus, precision: None }
    }

    fn encode_base(&self, x: &Fq) -> Vec<Coeff> {
        trim_coeffs(self.digits(*x).into_iter().map(|d| Coeff::Int(d as i64)).collect())
    }

    fn decode_base(&self, cs: &[Coeff]) -> Result<Fq> {
        let p = BigInt::from(self.p());
        let digits = cs
            .iter()
            .map(|c| Ok((c.to_bigint()? % &p).to_i64().unwrap()))
            .collect::<Result<Vec<i64>>>()?;
        Ok(self.from_digits(&digits))
    }
}

impl BaseCodec for LiftRing {
    fn base_descriptor(&self) -> RingDescriptor {
        RingDescriptor {
            kind: RingKind::LiftRing,
            p: self.p(),
            f: self.field().degree(),
            modulus: Some(self.modulus().iter().map(|&c| c as i64).collect()),
            precision: Some(self.precision()),
        }
    }

    fn encode_base(&self, x: &LiftElem) -> Vec<Coeff> {
        trim_coeffs(self.coeffs(x).iter().map(|&c| Coeff::Int(c as i64)).collect())
    }

    fn decode_base(&self, cs: &[Coeff]) -> Result<LiftElem> {
        let ints = cs.iter().map(Coeff::to_bigint).collect::<Result<Vec<_>>>()?;
        Ok(self.from_coeffs(&ints))
    }
}

impl BaseCodec for Integers {
    fn base_descriptor(&self) -> RingDescriptor {
        RingDescriptor { kind: RingKind::Integers, p: 0, f: 1, modulus: None, precision: None }
    }

    fn encode_base(&self, x: &BigInt) -> Vec<Coeff> {
        vec![Coeff::from_bigint(x)]
    }

    fn decode_base(&self, cs: &[Coeff]) -> Result<BigInt> {
        match cs {
            [] => Ok(BigInt::zero()),
            [c] => c.to_bigint(),
            _ => Err(Error::Parse("integers take a single coefficient".into())),
        }
    }
}

impl BaseCodec for Rationals {
    fn base_descriptor(&self) -> RingDescriptor {
        RingDescriptor { kind: RingKind::Rationals, p: 0, f: 1, modulus: None, precision: None }
    }

    fn encode_base(&self, x: &BigRational) -> Vec<Coeff> {
        if x.denom().is_one() {
            vec![Coeff::from_bigint(x.numer())]
        } else {
            vec![Coeff::Text(format!("{}/{}", x.numer(), x.denom()))]
        }
    }

    fn decode_base(&self, cs: &[Coeff]) -> Result<BigRational> {
        match cs {
            [] => Ok(BigRational::zero()),
            [c] => c.to_rational(),
            _ => Err(Error::Parse("rationals take a single coefficient".into())),
        }
    }
}

fn decode_constant<R: BaseCodec>(ring: &R, payload: &Payload) -> Result<R::Elem> {
    let table = payload.clone().into_table();
    let mut acc = ring.zero();
    for (k, cs) in &table {
        let c = ring.decode_base(cs)?;
        if *k != 0 && !ring.is_zero(&c) {
            return Err(Error::Parse(format!("exponent {k} in a ring without t")));
        }
        acc = ring.add(&acc, &c);
    }
    Ok(acc)
}

fn encode_constant<R: BaseCodec>(ring: &R, x: &R::Elem) -> Payload {
    let mut t = BTreeMap::new();
    if !ring.is_zero(x) {
        t.insert(0, ring.encode_base(x));
    }
    Payload::Table(t)
}

macro_rules! base_codec {
    ($($ty:ty),*) => {$(
        impl Codec for $ty {
            fn descriptor(&self) -> RingDescriptor {
                self.base_descriptor()
            }

            fn encode(&self, x: &Self::Elem) -> Payload {
                encode_constant(self, x)
            }

            fn decode(&self, payload: &Payload) -> Result<Self::Elem> {
                decode_constant(self, payload)
            }
        }
    )*};
}

base_codec!(FiniteField, LiftRing, Integers, Rationals);

impl<R: BaseCodec> Codec for Laurent<R> {
    fn descriptor(&self) -> RingDescriptor {
        let mut d = self.base().base_descriptor();
        d.kind = match d.kind {
            RingKind::LiftRing => RingKind::LiftLaurent,
            _ => RingKind::LaurentPoly,
        };
        d
    }

    fn encode(&self, x: &LaurentPoly<R::Elem>) -> Payload {
        let base = self.base();
        let t = x
            .terms()
            .filter(|(_, c)| !base.is_zero(c))
            .map(|(k, c)| (k, base.encode_base(c)))
            .collect();
        Payload::Table(t)
    }

    fn decode(&self, payload: &Payload) -> Result<LaurentPoly<R::Elem>> {
        let table = payload.clone().into_table();
        let terms = table
            .iter()
            .map(|(k, cs)| Ok((*k, self.base().decode_base(cs)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_terms(terms))
    }
}

/// A ring chosen at runtime from a [`RingDescriptor`].
#[derive(Clone, Debug, PartialEq)]
pub enum AnyRing {
    Field(FiniteField),
    Laurent(Laurent<FiniteField>),
    Lift(LiftRing),
    LiftLaurent(Laurent<LiftRing>),
    Integers(Integers),
    Rationals(Rationals),
}

/// Runs `$body` with `$r` bound to the concrete ring inside an [`AnyRing`].
#[macro_export]
macro_rules! with_ring {
    ($any:expr, $r:ident => $body:expr) => {
        match $any {
            $crate::ring::AnyRing::Field($r) => $body,
            $crate::ring::AnyRing::Laurent($r) => $body,
            $crate::ring::AnyRing::Lift($r) => $body,
            $crate::ring::AnyRing::LiftLaurent($r) => $body,
            $crate::ring::AnyRing::Integers($r) => $body,
            $crate::ring::AnyRing::Rationals($r) => $body,
        }
    };
}

/// Like [`with_ring!`] but only for rings admitting ghost components;
/// characteristic-`p` rings yield [`Error::CharacteristicP`](crate::Error).
#[macro_export]
macro_rules! with_torsion_free {
    ($any:expr, $r:ident => $body:expr) => {
        match $any {
            $crate::ring::AnyRing::Lift($r) => $body,
            $crate::ring::AnyRing::LiftLaurent($r) => $body,
            $crate::ring::AnyRing::Integers($r) => $body,
            $crate::ring::AnyRing::Rationals($r) => $body,
            _ => Err($crate::Error::CharacteristicP),
        }
    };
}

fn field_of(d: &RingDescriptor) -> Result<FiniteField> {
    if d.kind == RingKind::PrimeField && d.f != 1 {
        return Err(Error::InvalidRing("prime-field requires f = 1".into()));
    }
    if d.f == 0 {
        return Err(Error::InvalidRing("f must be at least 1".into()));
    }
    let is_lift = matches!(d.kind, RingKind::LiftRing | RingKind::LiftLaurent);
    match &d.modulus {
        Some(m) if !is_lift && d.f > 1 => {
            if m.iter().any(|&c| c < 0) {
                return Err(Error::InvalidRing("modulus coefficients must be non-negative".into()));
            }
            let field = FiniteField::new(d.p, m.iter().map(|&c| c as u64).collect())?;
            if field.degree() != d.f {
                return Err(Error::InvalidRing("modulus degree differs from f".into()));
            }
            Ok(field)
        }
        Some(m) if is_lift && d.f > 1 => {
            let p = d.p as i64;
            let reduced = m.iter().map(|&c| c.rem_euclid(p.max(1)) as u64).collect();
            let field = FiniteField::new(d.p, reduced)?;
            if field.degree() != d.f {
                return Err(Error::InvalidRing("modulus degree differs from f".into()));
            }
            Ok(field)
        }
        _ => FiniteField::gf(d.p, d.f),
    }
}

fn lift_of(d: &RingDescriptor) -> Result<LiftRing> {
    let field = field_of(d)?;
    let n = d.precision.ok_or_else(|| Error::InvalidRing("lift rings need a precision N".into()))?;
    match &d.modulus {
        Some(m) if d.f > 1 => {
            let lift: Vec<BigInt> = m.iter().map(|&c| BigInt::from(c)).collect();
            LiftRing::with_modulus(&field, &lift, n)
        }
        _ => LiftRing::new(&field, n),
    }
}

impl AnyRing {
    pub fn from_descriptor(d: &RingDescriptor) -> Result<Self> {
        Ok(match d.kind {
            RingKind::PrimeField | RingKind::FiniteField => AnyRing::Field(field_of(d)?),
            RingKind::LaurentPoly => AnyRing::Laurent(Laurent::new(field_of(d)?)),
            RingKind::LiftRing => AnyRing::Lift(lift_of(d)?),
            RingKind::LiftLaurent => AnyRing::LiftLaurent(Laurent::new(lift_of(d)?)),
            RingKind::Integers => AnyRing::Integers(NumRing::new()),
            RingKind::Rationals => AnyRing::Rationals(NumRing::new()),
        })
    }

    pub fn descriptor(&self) -> RingDescriptor {
        with_ring!(self, r => r.descriptor())
    }

    /// `Some(p)` when the ring has prime characteristic `p`.
    pub fn char_p(&self) -> Option<u64> {
        with_ring!(self, r => r.char_p())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Arithmetic on runtime-typed elements sharing one ring.
pub fn ring_arith(x: &RingElement, y: &RingElement, op: ArithOp) -> Result<RingElement> {
    if x.ring != y.ring {
        return Err(Error::RingMismatch);
    }
    let any = AnyRing::from_descriptor(&x.ring)?;
    let coeffs = with_ring!(&any, r => {
        let a = r.decode(&x.coeffs)?;
        let b = r.decode(&y.coeffs)?;
        let c = match op {
            ArithOp::Add => r.add(&a, &b),
            ArithOp::Sub => r.sub(&a, &b),
            ArithOp::Mul => r.mul(&a, &b),
        };
        r.encode(&c)
    });
    Ok(RingElement { ring: x.ring.clone(), coeffs })
}

/// Inverse of a runtime-typed element; Laurent polynomials need a series
/// view and are inverted only when they are unit monomials.
pub fn invert(x: &RingElement) -> Result<RingElement> {
    let any = AnyRing::from_descriptor(&x.ring)?;
    let coeffs = with_ring!(&any, r => {
        let a = r.decode(&x.coeffs)?;
        r.encode(&r.inverse(&a).ok_or(Error::NotAUnit)?)
    });
    Ok(RingElement { ring: x.ring.clone(), coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(ring: &RingDescriptor, json: &str) -> RingElement {
        RingElement { ring: ring.clone(), coeffs: serde_json::from_str(json).unwrap() }
    }

    #[test]
    fn f4_product_via_descriptor() {
        let d = RingDescriptor { kind: RingKind::FiniteField, p: 2, f: 2, modulus: Some(vec![1, 1, 1]), precision: None };
        let x = elem(&d, "[0, 1]");
        let z = ring_arith(&x, &x, ArithOp::Mul).unwrap();
        assert_eq!(serde_json::to_string(&z.coeffs).unwrap(), r#"{"0":[1,1]}"#);
    }

    #[test]
    fn laurent_payload_round_trip() {
        let d = RingDescriptor::laurent(3, 1);
        let x = elem(&d, r#"{"-1": [1], "0": [1]}"#);
        let t = elem(&d, r#"{"1": [1]}"#);
        let z = ring_arith(&x, &t, ArithOp::Mul).unwrap();
        assert_eq!(serde_json::to_string(&z.coeffs).unwrap(), r#"{"0":[1],"1":[1]}"#);
    }

    #[test]
    fn mismatched_rings() {
        let a = elem(&RingDescriptor::prime_field(2), "1");
        let b = elem(&RingDescriptor::prime_field(3), "1");
        assert_eq!(ring_arith(&a, &b, ArithOp::Add), Err(Error::RingMismatch));
    }

    #[test]
    fn inverse_in_f5() {
        let a = elem(&RingDescriptor::prime_field(5), "2");
        let inv = invert(&a).unwrap();
        assert_eq!(serde_json::to_string(&inv.coeffs).unwrap(), r#"{"0":[3]}"#);
        let zero = elem(&RingDescriptor::prime_field(5), "0");
        assert_eq!(invert(&zero), Err(Error::NotAUnit));
    }

    #[test]
    fn descriptor_json() {
        let d: RingDescriptor = serde_json::from_str(r#"{"kind":"lift-ring","p":3,"N":2}"#).unwrap();
        let r = AnyRing::from_descriptor(&d).unwrap();
        assert!(matches!(r, AnyRing::Lift(_)));
        let back = serde_json::to_value(r.descriptor()).unwrap();
        assert_eq!(back["N"], 2);
        assert!(AnyRing::from_descriptor(&RingDescriptor::prime_field(9)).is_err());
    }

    #[test]
    fn rationals_encode_as_fractions() {
        let q = Rationals::default();
        let x = BigRational::new(BigInt::from(-3), BigInt::from(4));
        let enc = q.encode(&x);
        assert_eq!(serde_json::to_string(&enc).unwrap(), r#"{"0":["-3/4"]}"#);
        assert_eq!(q.decode(&enc).unwrap(), x);
    }
}
