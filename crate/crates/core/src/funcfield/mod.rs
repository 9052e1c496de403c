//! Rational functions and weighted meromorphic forms on the Riemann sphere.
//!
//! Everything is exact over the rationals. Infinity is reached through the
//! single chart `w = 1/z`; contour integrals over separating level lines are
//! residue sums over the in-points.

mod form;
mod poly;
mod ratfunc;

pub use form::{LocalExpansion, MeroForm, Order, Point};
pub use poly::Poly;
pub use ratfunc::{schwarzian, RationalFunction};
