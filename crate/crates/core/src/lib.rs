//! Finite Heisenberg groups in exact arithmetic.
//!
//! A finite abelian group `K` carries a non-degenerate alternating bicharacter
//! `e` exactly when its invariant factors pair up, and then `(K, e)` is
//! isomorphic to `A × Â` with the standard form `χ'(x)·χ(x')⁻¹`. This crate
//! decides existence, computes the isomorphism by elementary row/column
//! operations on the exponent matrix of `e`, builds the corresponding central
//! extensions with explicit 2-cocycles, and counts the resulting classes.
//!
//! All form values are exponents of a fixed primitive `d₁`-th root of unity,
//! where `d₁` is the exponent of the group. Only the Weyl operator checks use
//! floating point.

pub mod arith;
pub mod classify;
mod error;
pub mod form;
pub mod group;
pub mod heisenberg;
pub mod io;
pub mod reduction;

pub use error::{Error, Result};
pub use form::AlternatingForm;
pub use group::{FiniteAbelianGroup, GroupElement, HomMatrix};
pub use heisenberg::{HeisenbergElement, HeisenbergGroup};
pub use reduction::{Decomposition, Step};

/// Environment variable overriding [`Limits::max_elements`].
pub const MAX_ORDER_ENV: &str = "HEISEN_MAX_ORDER";

/// Soft bound on exhaustive work: group orders, enumeration sizes and pair
/// scans larger than `max_elements` are refused or fall back to generator
/// checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_elements: 1_000_000 }
    }
}

impl Limits {
    pub fn new(max_elements: u64) -> Self {
        Limits { max_elements }
    }

    /// Default limits, overridden by `HEISEN_MAX_ORDER` when it parses.
    pub fn from_env() -> Self {
        std::env::var(MAX_ORDER_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map_or_else(Limits::default, Limits::new)
    }

    pub(crate) fn check(&self, size: u128) -> Result<()> {
        if size > self.max_elements as u128 {
            Err(Error::BoundExceeded { size, bound: self.max_elements })
        } else {
            Ok(())
        }
    }
}
