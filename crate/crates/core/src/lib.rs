//! Computable machinery around the Fourier coefficients of Hecke–Maass
//! cusp forms on SL(3, Z).
//!
//! The crate is organised by subsystem:
//!
//! * [`hecke`]: Schur polynomials, Satake-to-coefficient conversion, Hecke
//!   relations, symmetric-square lifts and a Ramanujan tau generator.
//! * [`measures`]: Sato-Tate and p-adic Plancherel densities on the torus,
//!   periodic quadrature, rejection sampling, spectral weights.
//! * [`kl_poly`]: Kostant q-partitions and Lusztig q-analogues for A2 and the
//!   Kato identity check.
//! * [`sato_tate`]: exact Schur-basis algebra and the Bernstein-polynomial
//!   equidistribution machinery.
//! * [`sign_stats`]: sign changes, short-interval comparators and
//!   non-vanishing statistics.
//! * [`dirichlet`]: Dirichlet polynomials, Euler factors and mean-value
//!   calibration.
//! * [`cli`]: the command-line front end and its verification suites.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod cli;
pub mod dirichlet;
pub mod error;
pub mod hecke;
pub mod kl_poly;
pub mod measures;
pub mod qpoly;
pub mod rng;
pub mod sato_tate;
pub mod sign_stats;
pub mod weyl;

pub use error::{Error, Result};
pub use num_complex::Complex64;
