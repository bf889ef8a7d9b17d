//! Exact cake-cutting among agents with unequal entitlements.
//!
//! All arithmetic is over arbitrary-precision rationals. The crate provides
//! the division protocols, an exact consensus splitter for piecewise-constant
//! measures, an independent allocation verifier and a brute-force oracle for
//! the minimal number of cuts.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod feasibility;
pub mod io;
pub mod model;
pub mod protocols;
pub mod random;
pub mod rational;
pub mod split;
pub mod verify;

pub use error::{Error, Result};

/// Exact arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = num_rational::BigRational;
