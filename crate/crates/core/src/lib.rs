//! Exact engine for the K-theoretic J-series of type-A flag manifolds and
//! the finite-difference Toda operator.
//!
//! Variable 0 of every polynomial is `q`; variable `i` is `Λ_i`, with
//! `Λ_0 = (Λ_1⋯Λ_r)^{-1}` eliminated.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod conservation;
pub mod flag;
pub mod hyperquot;
pub mod linalg;
pub mod localization;
pub mod operator;
pub mod qgroup;
pub mod series;

pub use algebra::{MPoly, Monomial, QRational, RatFunc};
pub use error::{Error, Result};
