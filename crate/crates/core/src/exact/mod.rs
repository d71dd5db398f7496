//! Exact arithmetic substrate: rationals, dense matrices, univariate
//! polynomials, matrix power series and linear solving.

mod linsolve;
mod matrix;
mod poly;
mod rational;
mod series;
pub mod text;

pub use linsolve::{solve_linear, SolutionSet};
pub use matrix::{mat_mul, RatMatrix};
pub use poly::{poly_compose_affine, poly_derive, poly_eval, RatPoly};
pub use rational::{
    binomial, checked_div, factorial, format_rational, int, inv_factorial, parse_rational, pow2,
    powi, rat_arith, ratio, to_decimal, ArithOp, Rational,
};
pub use series::{series_mul, MatrixSeries};
