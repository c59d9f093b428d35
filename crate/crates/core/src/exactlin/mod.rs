//! Exact arithmetic substrate: rationals, sparse matrices, polynomials.

pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::SparseMatrix;
pub use poly::{Poly1, Poly2};
pub use rational::{binomial, binomial_int, int, parse_rational, rat, Rational};
