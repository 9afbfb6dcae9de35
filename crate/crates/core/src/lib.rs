//! Anisotropic random walks on the square lattice.
//!
//! A walk at row `j` moves to each vertical neighbour with probability `p_j`
//! and to each horizontal neighbour with probability `1/2 - p_j`. This crate
//! holds everything that does not need an operating system:
//!
//! - [`profiles`]: the step-probability families `p_j` and derived sums,
//! - [`classifier`]: recurrence/transience verdicts from cut conductances,
//! - [`engine`]: the direct chain and the geometric-burst construction,
//! - [`oracle`]: exact small-`N` distributions by dynamic programming,
//! - [`theory`]: closed-form asymptotics and evaluatable limit laws,
//! - [`stats`]: goodness-of-fit and scaling-exponent machinery.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod classifier;
pub mod engine;
mod error;
pub mod oracle;
pub mod profiles;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use profiles::{ProfileKind, ProfileSpec, Rational};
