//! Exact rational algebra for 3×3 problems.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals
//! ([`Rational`]), univariate polynomials over them ([`Polynomial`]), rational
//! functions in one indeterminate ([`RatFunc`]) and sparse multivariate
//! polynomials over any of those fields ([`MPoly`]). Linear algebra is fixed at
//! 3×3 and generic over the [`Field`] trait so the same elimination routine
//! serves both constant and parameter-dependent matrices.

mod matrix;
mod mpoly;
mod poly;
mod ratfunc;
mod roots;
mod scalar;

pub use matrix::{char_poly, kernel, rank, solve_linear, LinearSolution, Mat3, RatMatrix, RatVector, SolutionKind};
pub use mpoly::{MPoly, Monomial};
pub use poly::Polynomial;
pub use ratfunc::RatFunc;
pub use roots::{rational_roots, RationalRoots};
pub use scalar::{
    is_integer, parse_rational, rat, rat_int, render_rational, to_f64, Field, Rational, Scalar,
};
