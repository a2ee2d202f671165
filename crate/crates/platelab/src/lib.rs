//! Numerical laboratory for the 1D transmission problem coupling an undamped
//! plate to a structurally damped one.
//!
//! The lab discretizes the coupled fourth-order system on Ω = (0, L) with an
//! interior undamped region Ω₂ = (a, b) and a damped complement, using a
//! globally C¹ cubic-Hermite finite-element space with clamped ends. On top of
//! the discrete generator it provides
//!
//! - spectrum computation for the quadratic pencil λ²M + λρD₀ + K,
//! - resolvent-norm scans along the imaginary axis in the energy norm,
//! - implicit-midpoint time stepping with an exact discrete energy ledger,
//! - multiplier (Rellich-type) identity verification on polynomial data,
//! - dense linear-algebra kernels (LU, Cholesky, real Schur, generalized
//!   smallest singular values) with a micro-benchmark harness.
//!
//! The `platelab` binary exposes the pieces as `simulate`, `spectrum`,
//! `scan`, `verify`, and `bench` subcommands; see the README for the config
//! file format and CSV schemas.

// index-based loops match the classical kernel formulations throughout
#![allow(clippy::needless_range_loop)]

pub mod bench;
pub mod cli;
pub mod domain;
pub mod error;
pub mod evolve;
pub mod fem;
pub mod identities;
pub mod linalg;
pub mod operator;
pub mod report;
pub mod spectral;

pub use error::{Error, Result};
