//! Exact Haar integration over the quantum permutation groups `S_n^+`.
//!
//! The crate evaluates monomial integrals and moments of truncated characters
//! `u_11 + … + u_ss` through Gram and Weingarten matrices indexed by
//! non-crossing partitions, all in exact rational arithmetic, and compares
//! them with the classical group `S_n` and with the free Poisson and Poisson
//! limit laws.
//!
//! Modules, bottom-up:
//!
//! - [`partitions`]: set partitions, `NC(k)`, joins.
//! - [`exactla`]: rationals and fraction-free linear algebra.
//! - [`weingarten`]: Gram/Weingarten matrices, integrals, moments.
//! - [`classical`]: fixed points on `S_n` and discrete measures.
//! - [`laws`]: limit laws, cumulants, convergence reports.
//! - [`cli`]: the `qperm` command line.

pub mod classical;
pub mod cli;
pub mod error;
pub mod exactla;
pub mod laws;
pub mod partitions;
pub mod weingarten;

pub use error::{Error, Result};
