//! Truncated p-typical Witt vectors, Artin–Schreier–Witt symbols over
//! `F_q((t))`, and the pairings and differential-form quotients built on them.
//!
//! Everything is exact: finite fields, Laurent polynomials, unramified lifts
//! `Z/p^N[x]/(M)` and the integers or rationals for ghost computations.

pub mod budget;
pub mod covector;
pub mod error;
pub mod forms;
pub mod json;
pub mod ring;
pub mod sample;
pub mod suite;
pub mod symbol;
pub mod witt;

pub use budget::Budget;
pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Integers = ring::NumRing<BigInt>;
pub type Rationals = ring::NumRing<BigRational>;
pub type LaurentFq = ring::Laurent<ring::FiniteField>;
pub type LiftLaurent = ring::Laurent<ring::LiftRing>;
pub type IntPoly = witt::IntPoly;
pub type RatPoly = witt::RatPoly;
