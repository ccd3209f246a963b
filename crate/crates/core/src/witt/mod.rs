//! Truncated p-typical Witt vectors.

pub mod poly;
mod vector;

pub use poly::{universal_polys, IntPoly, MPoly, RatPoly, UniversalPolySet};
pub use vector::{from_ghost, ghost, WittRing, WittVector};
