//! Slit Sierpiński carpets at finite generation.
//!
//! The crate builds the slit squares `Q̄_n` and their doubles, computes their
//! exact path metrics, grid measures and discrete moduli, and implements the
//! quasisymmetry group of the double as isometries composed with shears.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carpet;
pub mod dyadic;
pub mod error;
pub mod geodesics;
pub mod measure;
pub mod modulus;
pub mod render;
pub mod report;
pub mod symmetry;

pub use carpet::{CarpetPoint, Face, Side, Slit, SlitSchedule};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
