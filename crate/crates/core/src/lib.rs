//! Computational tools for quasirandom finite groups.
//!
//! The crate computes the minimal degree `k` of a nontrivial irreducible
//! representation, checks the spectral bound for convolution by symmetric
//! sets, verifies triple-product covering and product-free statements by
//! exhaustive bitset arithmetic, and evaluates word maps on small simple
//! groups.

pub mod chars;
pub mod error;
pub mod group;
pub mod par;
pub mod product;
pub mod seed;
pub mod spectral;
pub mod subset;
pub mod words;

pub use error::{Error, Result};
pub use group::{FiniteGroup, Family};
pub use subset::SubsetMask;

use serde::Serialize;

/// Resource caps shared by all operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest group order that may be enumerated.
    pub enumeration: usize,
    /// Largest order for which the convolution operator is materialized.
    pub dense: usize,
    /// Largest number of tuples a word-value enumeration may visit.
    pub work: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration: 10_000_000,
            dense: 4096,
            work: 1_000_000_000,
        }
    }
}
