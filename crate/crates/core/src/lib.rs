//! Bernstein polynomials and logarithmic Brieskorn lattices of linear free
//! divisors.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! * [`exactalg`]: rationals, polynomials and exact linear algebra.
//! * [`freediv`]: linear logarithmic vector fields, Saito's criterion and a
//!   reductivity probe.
//! * [`defalg`]: the deformation algebra of a pair `(f, h)`, genericity of
//!   `f` and the normal-form constant `c`.
//! * [`brieskorn`]: the reduction calculus, connection matrices, the residue
//!   of the saturated lattice, Bernstein polynomial, spectra and checks.
//! * [`bfunctional`]: an independent route to `b_h` through the operator
//!   `h*(∂)` applied to `h^(s+1)`.
//! * [`catalog`] and [`report`]: built-in divisors, input files and the
//!   cross-validated report used by the `lfd` binary.

pub mod bfunctional;
pub mod brieskorn;
pub mod catalog;
pub mod defalg;
pub mod error;
pub mod exactalg;
pub mod freediv;
pub mod report;

pub use error::{Error, ErrorClass, Result};
