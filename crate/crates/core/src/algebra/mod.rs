//! Exact polynomial and rational-function arithmetic.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub(crate) mod rpoly;

pub use matrix::{primitive_vector, Echelon, RfMatrix};
pub use poly::{Monomial, MultiPoly, Rational, Vars};
pub use ratfunc::RationalFunction;
