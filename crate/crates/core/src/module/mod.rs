//! Based modules over fusion rings.

mod analysis;
mod basic;
mod induced;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::combo::ZCombo;
use crate::error::Result;
use crate::label::Label;
use crate::ring::RingRef;

pub use analysis::{
    check_module_axioms, check_pairing_equivariance, components, decompose_restriction, detect_standard,
    module_isomorphic, pairing, pairing_dimension, stabilizer, wreath_submodule_scan, Component, DecompositionReport,
    IsoVerdict, ModuleReport, PairingReport, StandardVerdict, WreathScan,
};
pub use basic::{spin_module, ClosedFormModule, FiniteModule, StandardModule, TrivialModule};
pub use induced::{InducedModule, RestrictedModule, SubModule};

/// A based module: a free abelian group on a (possibly infinite) basis with a non-negative
/// action of the ring basis.
pub trait BasedModule: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn ring(&self) -> RingRef;
    /// Basis elements of degree at most `bound`, in a deterministic order.
    fn basis(&self, bound: usize) -> Result<Vec<Label>>;
    fn degree(&self, j: &Label) -> usize;
    fn contains(&self, j: &Label) -> bool;
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo>;
    /// A dimension function, if the module carries one.
    fn dim(&self, _j: &Label) -> Option<Result<BigInt>> {
        None
    }
    fn format(&self, j: &Label) -> String {
        j.to_string()
    }
    fn is_finite(&self) -> bool {
        false
    }
}

pub type ModuleRef = Arc<dyn BasedModule>;

/// Action of a ring label on a combination of basis elements.
pub fn act_combo(m: &dyn BasedModule, i: &Label, x: &ZCombo) -> Result<ZCombo> {
    let mut out = ZCombo::new();
    for (j, c) in x.iter() {
        out.add_scaled(&m.act(i, j)?, c);
    }
    Ok(out)
}

pub fn format_module_combo(m: &dyn BasedModule, x: &ZCombo) -> String {
    if x.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = x
        .iter()
        .map(|(l, c)| {
            let s = m.format(l);
            if c == &BigInt::from(1) {
                s
            } else {
                format!("{c}·{s}")
            }
        })
        .collect();
    parts.join(" + ")
}
