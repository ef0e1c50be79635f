//! Exact arithmetic substrate: fields, polynomials, rational functions, Laurent series.

pub mod field;
pub mod laurent;
pub mod mpoly;
pub mod poly;
pub mod ratfunc;
pub mod scalar;

pub use field::{binomial, central, factorial, parse_q, q, q_to_f64, qf, Field, Gauss, Q};
pub use laurent::{
    laurent_expand, laurent_expand_default, polynomial_part_at_infinity, residue_at, sqrt_quotient_at_infinity,
    LaurentSeries, Point,
};
pub use mpoly::{MPoly, MRat};
pub use poly::{Poly, Var};
pub use ratfunc::{ratfunc_normalize, RatFunc};
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole at {0}")]
    Pole(String),
    #[error("square-root argument must be monic of even degree")]
    InvalidBranchData,
}
