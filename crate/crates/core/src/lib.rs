//! Composite-particle second quantization on small discrete mode sets.
//!
//! A composite particle is created by `c_f^+ = sum_nm f_nm a_n^+ b_m^+`, where
//! `a` and `b` are two distinguishable constituent species, each bosonic or
//! fermionic. This crate provides:
//!
//! - [`mode_dist`]: discrete and Gaussian two-particle mode distributions,
//!   overlaps, Schmidt coefficients and discretization.
//! - [`fock`]: a brute-force occupation-number Fock space with sparse
//!   operator matrices. Every analytic formula is checked against it.
//! - [`algebra`]: the composite (anti)commutator deviation operators, the
//!   four-fold overlap `Lambda`, two-composite normalization, deviation
//!   expectation values and three-particle normalization constants.
//! - [`gaussian`]: closed forms for the Gaussian mode distribution and an
//!   independent multivariate Gaussian-integral evaluator.
//! - [`pauli`]: exclusion and preparability diagnostics.
//! - [`oracle`]: entrywise comparison of the analytic formulas with the
//!   Fock-space matrices.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
mod error;
pub mod fock;
pub mod gaussian;
pub mod mode_dist;
mod numeric;
pub mod oracle;
pub mod pauli;
#[cfg(feature = "rand")]
pub mod sample;
mod svd;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Absolute tolerance for structural identities (normalization, purity).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Absolute tolerance below which a normalization quantity counts as zero
/// (divergent normalization constant, excluded state).
pub const DIVERGENCE_TOL: f64 = 1e-9;
