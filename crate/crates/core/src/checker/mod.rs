//! Equisingularity conditions for a family `F(x, y; t)`.
//!
//! Condition (a) is decided by two engines: an exact engine that deforms each
//! critical arc by Tschirnhausen transforms over truncated t-series, and a
//! sampled engine that recomputes bars and critical points at rational `t`
//! and follows them across the grid. Conditions (A) and (A′) add value
//! coincidences and the Morse-and-zero stability of initial forms. A "holds"
//! verdict is certified on the exact data and on the sample grid only.

pub mod morse;
pub mod sample;
pub mod tschirn;
pub mod verdict;

pub use sample::{analyze_at_t, default_grid, Sample};
pub use tschirn::{deform_arc, deform_on_branch, tschirnhausen_step, DeformOutcome, Witness};
pub use verdict::{check_family, CheckConfig, Condition, FamilyReport, FamilyVerdict};
