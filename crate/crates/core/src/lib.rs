//! Euler–Korteweg numerics on periodic grids: pseudo-spectral calculus,
//! direct and Schrödinger-based solvers, space-time mollification with
//! commutator diagnostics, and Besov regularity estimation.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod besov;
pub mod constitutive;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod harness;
pub mod mollify;

pub use error::{Error, Result};
