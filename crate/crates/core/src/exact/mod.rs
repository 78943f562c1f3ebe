//! Exact arithmetic: rationals, cyclotomic fields, multivariate polynomials,
//! Gröbner normal forms and dense linear algebra.

pub mod cyclotomic;
pub mod expr;
pub mod groebner;
pub mod linalg;
pub mod poly;
pub mod rational;

pub use cyclotomic::{field_arith, Cyclotomic, FieldOp};
pub use expr::Expr;
pub use groebner::IdealBasis;
pub use linalg::Matrix;
pub use poly::{poly_arith, Mono, MultiPoly, PolyOp, PolyValue, MAX_VARS};
pub use rational::Rational;
