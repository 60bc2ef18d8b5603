//! Newton-polyhedron invariants of bivariate finite-type phases.

pub mod adapt;
pub mod error;
pub mod homog;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod report;
pub mod upoly;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{ExponentPair, PuiseuxPoly, Rational, Variable, Weight};
