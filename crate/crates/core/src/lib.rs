//! Symbolic-numeric analysis of real plane-curve singularities and their
//! deformations: Newton polygons relative to arcs, Newton-Puiseux roots, bars
//! and critical points, equisingularity conditions for families, and a
//! numerical check of the trivializing flow.

pub mod algebra;
pub mod arcs;
pub mod checker;
pub mod corpus;
pub mod error;
pub mod flow;
pub mod polygon;
pub mod rat;
pub mod roots;

pub use error::{Error, Result};
pub use rat::Rat;

/// Starting working precision (bits) for ball arithmetic.
pub const DEFAULT_PRECISION: u32 = 128;
/// Precision cap; undecidable zero tests beyond it are hard errors.
pub const MAX_PRECISION: u32 = 4096;
/// Cap on exponent denominators in Puiseux expansions.
pub const DEFAULT_DENOM_CAP: u64 = 512;
/// Cap on the number of terms in a root expansion.
pub const DEFAULT_MAX_TERMS: usize = 64;
