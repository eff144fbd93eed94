//! Numerical workbench for the adversary-bound analysis of approximate counting.
//!
//! The library builds the Johnson-scheme objects (subset bases, isotypic
//! projectors, transporters), evaluates the closed-form coefficient and norm
//! formulas for the adversary matrix, checks every one of them against
//! explicitly constructed matrices, and simulates the matching upper-bound
//! algorithms with exact query accounting.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adversary;
pub mod bruteforce;
pub mod cli;
pub mod error;
pub mod johnson;
pub mod linalg;
pub mod simulate;

pub use error::{Error, Result};
