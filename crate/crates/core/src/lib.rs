//! Modified q-Bessel functions and q-Bessel-Macdonald functions of three kinds.
//!
//! The crate evaluates the q-Bessel family `J^(j)`, `I^(j)`, `K^(j)` for
//! `j = 1, 2, 3` from their defining series, together with their single-
//! and double-integral representations and the auxiliary q-binomial and
//! q-exponential machinery those representations are built from.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod ddouble;
pub mod double_integral;
pub mod error;
mod gauss;
pub mod qbessel;
pub mod qbinomial;
pub mod qseries;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
