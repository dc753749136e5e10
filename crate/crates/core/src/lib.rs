//! Exact fusion-ring, based-module and K-theory computations for free products, free
//! wreath products and free complexifications of compact quantum groups.

pub mod cli;
pub mod combo;
pub mod complexification;
pub mod linalg;
pub mod error;
pub(crate) mod json;
pub mod ktheory;
pub mod label;
pub mod module;
pub mod ring;
pub mod rings;
pub mod spec;
pub mod torsion_enum;

pub use combo::ZCombo;
pub use error::{Error, Result};
pub use label::Label;
pub use ring::{FusionRing, RingRef};
pub use spec::{construct_ring, parse_spec, GroupSpec};
