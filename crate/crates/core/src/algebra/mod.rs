//! Exact arithmetic: rationals, multivariate and univariate polynomials, and
//! the structural algorithms the classifiers are built from.

mod gcd;
mod mpoly;
mod rat;
mod upoly;

pub use gcd::{bivariate_gcd, primitive_normalize, rank1_separate, reduce_fraction};
pub use mpoly::{ExpVec, MPoly, Var};
pub use rat::{denominator_lcm, numerator_gcd, ParseRatError, Rat};
pub use upoly::{inner_compose_solve, upoly_gcd, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("gcd undefined: both inputs are zero")]
    GcdUndefined,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} of the zero polynomial is undefined")]
    ZeroPolynomial(&'static str),
    #[error("{poly} is not univariate in {var}")]
    NotUnivariate { var: String, poly: String },
    #[error("expected at most two variables, found {0}")]
    TooManyVariables(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
