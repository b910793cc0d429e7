//! Exact covering counts and dimension estimation for popcorn pyramid sets.
//!
//! The sets are the graphs of higher-dimensional Thomae ("popcorn") functions:
//! zero except at rational tuples sharing a reduced denominator q, where the
//! value is q^{-t}. This crate models the graph and full variants exactly,
//! counts dyadic mesh covers and horizontal layers in integer arithmetic,
//! computes Diophantine overlap measures and Chung-Erdos floors as exact
//! rationals, and checks the closed-form box, Assouad and intermediate
//! dimension values against those counts.
//!
//! Floating point appears only where it is harmless: slope fits, bisection on
//! cover-cost exponents, and decimal renderings next to exact rationals.
//!
//! See the `examples/` directory for one runnable program per capability, and
//! the thin `popcorn` binary for the same functionality behind flags.

pub mod cli;
pub mod covering;
pub mod dimensions;
pub mod error;
pub mod exact;
pub mod measure;
pub mod number_theory;
pub mod sets;

pub use error::{Error, Result};
pub use sets::{SetSpec, Variant};
