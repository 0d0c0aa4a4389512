//! Newton-Puiseux roots: certified isolation of edge-polynomial roots, the
//! expansion tree, and mini-regular normalization.

pub mod expand;
pub mod isolate;
pub mod normalize;
