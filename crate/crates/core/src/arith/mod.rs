//! Exact arithmetic: rationals, ℚ(ζ_p), dense matrices and p-adic valuations.

pub mod cyclo;
pub mod matrix;
pub mod rational;

pub use cyclo::{CycloInt, Cyclotomic};
pub use matrix::{
    char_poly_integer, char_poly_integer_roots, gram_principal, gram_project, CycloMatrix, IntegerRoots,
    MatrixRecord, RationalMatrix,
};
pub use rational::{p_valuation, Rational, Valuation};
