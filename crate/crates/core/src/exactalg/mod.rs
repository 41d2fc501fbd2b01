//! Exact arithmetic: rationals, sparse multivariate polynomials, dense
//! rational linear algebra and univariate root extraction.

pub mod eigen;
pub mod matrix;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod sparse;
pub mod univariate;

pub use eigen::{rational_eigenstructure, EigenBlock};
pub use matrix::{kernel_basis, rank, solve_linear, QMatrix, RowReduction};
pub use mpoly::{monomial_basis, MPoly, Monomial};
pub use parse::{parse_poly, parse_poly_str};
pub use rational::Rational;
pub use univariate::{BPoly, QPoly, RootFactor};
