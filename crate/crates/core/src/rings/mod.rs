//! Concrete fusion rings and the ring-level constructions.

mod chebyshev;
mod cyclic;
mod free_group;
mod free_product;
mod lattice;
mod unitary;
mod wreath;

pub use chebyshev::ChebyshevRing;
pub use cyclic::CyclicRing;
pub use free_group::FreeGroupRing;
pub use free_product::FreeProductRing;
pub use lattice::LatticeRing;
pub use unitary::UnitaryRing;
pub use wreath::{LambdaReport, WreathRing};

use crate::error::{Error, Result};

pub(crate) fn parse_error<T>(s: &str, msg: impl Into<String>) -> Result<T> {
    let _ = s;
    Err(Error::Parse { pos: 0, msg: msg.into() })
}

/// Splits `base^exp` into its parts, `exp` defaulting to 1.
pub(crate) fn split_power(tok: &str) -> Option<(&str, i64)> {
    match tok.split_once('^') {
        None => Some((tok, 1)),
        Some((b, e)) => e.trim().parse::<i64>().ok().map(|e| (b.trim(), e)),
    }
}

pub(crate) fn is_unit_token(s: &str) -> bool {
    let t = s.trim();
    t.is_empty() || t == "1" || t == "e" || t == "ε"
}
