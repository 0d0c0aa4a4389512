//! Exact and certified-numeric algebra: rationals, parameter series, balls,
//! Puiseux series and bivariate polynomials.

pub mod ball;
pub mod bivar;
pub mod coeff;
pub mod family;
pub mod parse;
pub mod puiseux;
pub mod scalar;
pub mod sqfree;
pub mod tseries;
pub mod upoly;

pub use ball::CBall;
pub use bivar::BivarPoly;
pub use coeff::Coeff;
pub use family::FamilyPoly;
pub use parse::{parse_bivar, parse_expression, Parsed};
pub use puiseux::{contact_order, Order, PuiseuxSeries};
pub use scalar::Scalar;
pub use tseries::TSeries;
pub use upoly::QPoly;
