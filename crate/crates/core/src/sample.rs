//! Seeded witnesses for the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::covector::Covector;
use crate::ring::{FiniteField, Fq, Laurent, Ring};
use crate::symbol::{KElem, KWitt};
use crate::witt::WittVector;

/// The witness space: Laurent polynomials with exponents in `[lo, hi]`,
/// each exponent present with probability `density`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSpace {
    pub lo: i64,
    pub hi: i64,
    pub density: f64,
}

impl Default for WitnessSpace {
    fn default() -> Self {
        WitnessSpace { lo: -3, hi: 4, density: 0.5 }
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Random witnesses over `F_q((t))`.
///
/// Every sample of a suite draws from its own stream, so a failing sample
/// can be replayed from `(seed, suite, index)` alone.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    field: FiniteField,
    k: Laurent<FiniteField>,
    space: WitnessSpace,
}

impl Sampler {
    pub fn new(field: &FiniteField, seed: u64, suite: &str, index: u64) -> Self {
        Self::with_space(field, seed, suite, index, WitnessSpace::default())
    }

    pub fn with_space(field: &FiniteField, seed: u64, suite: &str, index: u64, space: WitnessSpace) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(suite));
        rng.set_stream(index);
        Sampler { rng, field: field.clone(), k: Laurent::new(field.clone()), space }
    }

    pub fn space(&self) -> WitnessSpace {
        self.space
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> Fq {
        Fq(self.rng.gen_range(0..self.field.order()) as u32)
    }

    pub fn nonzero_coeff(&mut self) -> Fq {
        Fq(self.rng.gen_range(1..self.field.order()) as u32)
    }

    /// A Laurent polynomial supported in `[lo, hi]`.
    pub fn laurent_in(&mut self, lo: i64, hi: i64) -> KElem {
        let mut terms = Vec::new();
        for e in lo..=hi {
            if self.rng.gen_bool(self.space.density) {
                terms.push((e, self.nonzero_coeff()));
            }
        }
        self.k.from_terms(terms)
    }

    pub fn laurent(&mut self) -> KElem {
        self.laurent_in(self.space.lo, self.space.hi)
    }

    pub fn nonzero_laurent(&mut self) -> KElem {
        loop {
            let x = self.laurent();
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `c t^v u` with `u` a polynomial unit.
    pub fn unit_times_monomial(&mut self) -> KElem {
        let v = self.rng.gen_range(self.space.lo..=self.space.hi);
        let span = (self.space.hi - self.space.lo).max(1);
        let mut u = self.laurent_in(1, span);
        let c = self.nonzero_coeff();
        u = self.k.add(&u, &self.k.constant(c));
        self.k.shift(&u, v)
    }

    /// A unit of `F_q[[t]]`, as a polynomial.
    pub fn integral_unit(&mut self) -> KElem {
        let u = self.laurent_in(1, self.space.hi.max(1));
        let c = self.nonzero_coeff();
        self.k.add(&u, &self.k.constant(c))
    }

    /// A polynomial in `t F_q[t]`.
    pub fn in_t_fq_t(&mut self) -> KElem {
        self.laurent_in(1, self.space.hi.max(1))
    }

    /// A polynomial in `F_q[t]`.
    pub fn integral(&mut self) -> KElem {
        self.laurent_in(0, self.space.hi.max(0))
    }

    pub fn witt(&mut self, n: usize) -> KWitt {
        WittVector::new((0..n).map(|_| self.laurent()).collect())
    }

    pub fn witt_with(&mut self, n: usize, mut coord: impl FnMut(&mut Self) -> KElem) -> KWitt {
        WittVector::new((0..n).map(|_| coord(self)).collect())
    }

    /// A covector with window length at most `max_len`.
    pub fn covector_window(&mut self, max_len: usize) -> Vec<KElem> {
        let len = self.rng.gen_range(1..=max_len.max(1));
        (0..len).map(|_| self.laurent()).collect()
    }

    pub fn covector(&mut self, max_len: usize, group: &crate::covector::CovectorGroup<Laurent<FiniteField>>) -> Covector<KElem> {
        let w = self.covector_window(max_len);
        group.from_window(w)
    }

    pub fn residue_witt(&mut self, n: usize) -> WittVector<Fq> {
        WittVector::new((0..n).map(|_| self.coeff()).collect())
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let f = FiniteField::gf(2, 2).unwrap();
        let a = Sampler::new(&f, 7, "suite", 3).witt(3);
        let b = Sampler::new(&f, 7, "suite", 3).witt(3);
        let c = Sampler::new(&f, 7, "suite", 4).witt(3);
        let d = Sampler::new(&f, 7, "other", 3).witt(3);
        assert_eq!(a, b);
        assert!(a != c || a != d);
    }

    #[test]
    fn witnesses_stay_in_the_window() {
        let f = FiniteField::prime(3).unwrap();
        for i in 0..50 {
            let mut s = Sampler::new(&f, 1, "window", i);
            let x = s.laurent();
            if let (Some(lo), Some(hi)) = (x.lo(), x.hi()) {
                assert!(lo >= -3 && hi <= 4);
            }
            let u = s.integral_unit();
            assert_eq!(u.lo(), Some(0));
            assert!(!s.unit_times_monomial().is_zero());
            assert!(s.in_t_fq_t().lo().map_or(true, |lo| lo >= 1));
        }
    }
}
