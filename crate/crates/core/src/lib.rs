//! Exact classification of polynomial reducts of a field.
//!
//! The crate decides, for a finite collection of polynomials with rational
//! coefficients, whether the structure they generate is interdefinable with
//! a collection of unary maps, a vector space, a twisted multiplication
//! `x *_r y = (x - r)(y - r) + r`, or the full field, and produces exact
//! certificates for each verdict. Supporting modules detect additive and
//! multiplicative decompositions of bivariate polynomials, describe the
//! unary maps definable from a single polynomial, and measure the growth of
//! polynomial images on finite sets.

pub mod algebra;
pub mod classifier;
pub mod decomposition;
pub mod expansion;
pub mod parser;
pub mod unary;

pub use algebra::{AlgebraError, ExpVec, MPoly, Rat, UPoly, Var};
pub use parser::{parse_collection, parse_poly, render, ParseError};
