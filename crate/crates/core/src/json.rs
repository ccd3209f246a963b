//! JSON shapes for Witt vectors, covectors, tensors and symbol values.

use serde::{Deserialize, Serialize};

use crate::covector::Covector;
use crate::forms::FormalTensor;
use crate::ring::{AnyRing, Codec, Payload, Ring, RingDescriptor};
use crate::symbol::{KElem, LocalField, SymbolValue};
use crate::witt::WittVector;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WittJson {
    pub p: u64,
    pub n: usize,
    pub ring: RingDescriptor,
    pub coords: Vec<Payload>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovectorJson {
    pub p: u64,
    pub ring: RingDescriptor,
    pub window: Vec<Payload>,
    #[serde(default)]
    pub top_index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: i64,
    pub left: WittJson,
    pub right: WittJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    pub n: usize,
    pub ring: RingDescriptor,
    pub terms: Vec<TermJson>,
}

/// A symbol value as printed by the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    pub value: u64,
    pub modulus: u64,
    pub provenance: serde_json::Value,
}

impl ValueJson {
    pub fn new(v: &SymbolValue, provenance: serde_json::Value) -> Self {
        ValueJson { value: v.value, modulus: v.modulus(), provenance }
    }
}

/// Parses JSON, reporting the line and column of the first error.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn encode_witt<R: Codec>(ring: &R, p: u64, a: &WittVector<R::Elem>) -> WittJson {
    WittJson {
        p,
        n: a.len(),
        ring: ring.descriptor(),
        coords: a.coords().iter().map(|c| ring.encode(c)).collect(),
    }
}

/// Descriptors may differ in defaulted fields; the rings they build must agree.
fn check_ring(expected: &RingDescriptor, found: &RingDescriptor) -> Result<()> {
    if expected == found || AnyRing::from_descriptor(expected)? == AnyRing::from_descriptor(found)? {
        return Ok(());
    }
    Err(Error::RingMismatch)
}

pub fn decode_witt<R: Codec>(ring: &R, p: u64, w: &WittJson) -> Result<WittVector<R::Elem>> {
    check_ring(&ring.descriptor(), &w.ring)?;
    if w.p != p {
        return Err(Error::Parse(format!("vector has p = {}, expected {p}", w.p)));
    }
    if w.coords.len() != w.n || w.n == 0 {
        return Err(Error::ShapeMismatch {
            expected: format!("{} coordinates", w.n),
            found: w.coords.len().to_string(),
        });
    }
    Ok(WittVector::new(w.coords.iter().map(|c| ring.decode(c)).collect::<Result<_>>()?))
}

pub fn encode_covector<R: Codec>(ring: &R, p: u64, x: &Covector<R::Elem>) -> CovectorJson {
    CovectorJson {
        p,
        ring: ring.descriptor(),
        window: x.window().iter().map(|c| ring.encode(c)).collect(),
        top_index: 0,
    }
}

/// The window as listed, ending at index 0; leading zeros are allowed.
pub fn decode_window<R: Codec>(ring: &R, p: u64, x: &CovectorJson) -> Result<Vec<R::Elem>> {
    check_ring(&ring.descriptor(), &x.ring)?;
    if x.p != p {
        return Err(Error::Parse(format!("covector has p = {}, expected {p}", x.p)));
    }
    if x.top_index != 0 {
        return Err(Error::Parse("covector windows must end at index 0".into()));
    }
    x.window.iter().map(|c| ring.decode(c)).collect()
}

pub fn encode_tensor(kf: &LocalField, x: &FormalTensor<KElem>) -> TensorJson {
    let k = kf.k();
    TensorJson {
        n: x.n(),
        ring: k.descriptor(),
        terms: x
            .terms()
            .iter()
            .map(|t| TermJson {
                c: t.c,
                left: encode_witt(k, kf.p(), &t.left),
                right: encode_witt(k, kf.p(), &t.right),
            })
            .collect(),
    }
}

pub fn decode_tensor(kf: &LocalField, x: &TensorJson) -> Result<FormalTensor<KElem>> {
    let k = kf.k();
    check_ring(&k.descriptor(), &x.ring)?;
    let mut out = FormalTensor::new(x.n);
    for t in &x.terms {
        out.push(t.c, decode_witt(k, kf.p(), &t.left)?, decode_witt(k, kf.p(), &t.right)?)?;
    }
    Ok(out)
}

/// A nonzero element of `K` from a ring-element payload.
pub fn decode_unit(kf: &LocalField, payload: &Payload) -> Result<KElem> {
    let b = kf.k().decode(payload)?;
    if kf.k().is_zero(&b) {
        return Err(Error::ZeroElement);
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FiniteField;
    use crate::witt::WittRing;

    #[test]
    fn witt_round_trip() {
        let f = FiniteField::prime(2).unwrap();
        let w = WittRing::new(f.clone(), 2, 2).unwrap();
        let one = w.one();
        let j = encode_witt(&f, 2, &one);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(text, r#"{"p":2,"n":2,"ring":{"kind":"prime-field","p":2,"f":1},"coords":[{"0":[1]},{}]}"#);
        let back: WittJson = parse(&text).unwrap();
        assert_eq!(decode_witt(&f, 2, &back).unwrap(), one);
        assert!(decode_witt(&f, 3, &back).is_err());
    }

    #[test]
    fn scalar_coordinates_are_accepted() {
        let f = FiniteField::prime(3).unwrap();
        let j: WittJson = parse(r#"{"p":3,"n":2,"ring":{"kind":"prime-field","p":3},"coords":[2,1]}"#).unwrap();
        let a = decode_witt(&f, 3, &j).unwrap();
        assert_eq!(a.coords(), &[crate::ring::Fq(2), crate::ring::Fq(1)]);
    }

    #[test]
    fn parse_errors_have_positions() {
        let e = parse::<WittJson>("{\"p\": 2,\n \"n\": }").unwrap_err();
        assert!(e.to_string().contains("line 2 column"), "{e}");
    }

    #[test]
    fn tensor_and_covector_round_trip() {
        let kf = LocalField::new(2, 1).unwrap();
        let w = kf.witt();
        let t = FormalTensor::single(3, w.one_len(2), w.teichmuller_len(kf.k().t(), 2)).unwrap();
        let j = encode_tensor(&kf, &t);
        let back: TensorJson = parse(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(decode_tensor(&kf, &back).unwrap(), t);

        let g = kf.covectors();
        let x = g.from_window(vec![kf.k().t(), kf.k().one()]);
        let j = encode_covector(kf.k(), 2, &x);
        assert_eq!(g.from_window(decode_window(kf.k(), 2, &j).unwrap()), x);
        let mut explicit = j.clone();
        explicit.ring.modulus = Some(vec![0, 1]);
        assert!(decode_window(kf.k(), 2, &explicit).is_ok());
        let mut bad = j.clone();
        bad.top_index = 1;
        assert!(decode_window(kf.k(), 2, &bad).is_err());
    }
}
