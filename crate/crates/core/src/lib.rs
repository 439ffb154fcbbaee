//! Numerical laboratory for p-moduli of curve families and the distortion
//! of mappings between conformally flat domains.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod expr;
pub mod func;
pub mod geometry;
pub mod mapping;
pub mod modulus;
pub mod point;

pub use error::{Error, Result};
pub use point::Point;
