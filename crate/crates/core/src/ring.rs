//! Fusion-ring interface and the based-ring axiom verifier.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combo::ZCombo;
use crate::error::Result;
use crate::label::Label;

/// A based ring with a (classical, integer valued) dimension function.
///
/// Implementations are immutable after construction. All structure constants are
/// computed on demand by `tensor`.
pub trait FusionRing: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    fn unit(&self) -> Label;
    fn contains(&self, a: &Label) -> bool;
    fn conj(&self, a: &Label) -> Result<Label>;
    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo>;
    fn dim(&self, a: &Label) -> Result<BigInt>;
    /// Degree used for enumeration and truncation. Only the unit has degree zero, and the
    /// degree is subadditive over tensor components.
    fn degree(&self, a: &Label) -> usize;
    fn generators(&self) -> Vec<Label>;
    /// All labels of degree at most `bound`, sorted by `(degree, label)`.
    fn enumerate(&self, bound: usize) -> Vec<Label>;
    fn format(&self, a: &Label) -> String;
    fn parse(&self, s: &str) -> Result<Label>;
    /// True when the label set is finite (cyclic groups and the trivial group).
    fn is_finite(&self) -> bool {
        false
    }
}

pub type RingRef = Arc<dyn FusionRing>;

/// Exact ring identity check used to match modules with the rings they live over.
pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || a.name() == b.name()
}

pub fn tensor_combo(ring: &dyn FusionRing, x: &ZCombo, y: &ZCombo) -> Result<ZCombo> {
    let mut out = ZCombo::new();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let t = ring.tensor(a, b)?;
            out.add_scaled(&t, &(ca * cb));
        }
    }
    Ok(out)
}

pub fn dim_combo(ring: &dyn FusionRing, x: &ZCombo) -> Result<BigInt> {
    let mut d = BigInt::zero();
    for (l, c) in x.iter() {
        d += c * ring.dim(l)?;
    }
    Ok(d)
}

/// Formats a combination with the highest-degree terms first, e.g. `s u2 s + 1`.
pub fn format_combo(ring: &dyn FusionRing, x: &ZCombo) -> String {
    let mut terms: Vec<(&Label, &BigInt)> = x.iter().collect();
    terms.sort_by(|(a, _), (b, _)| {
        ring.degree(b).cmp(&ring.degree(a)).then_with(|| a.cmp(b))
    });
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (l, c)) in terms.iter().enumerate() {
        let name = ring.format(l);
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&name);
        } else {
            out.push_str(&format!("{mag} {name}"));
        }
    }
    out
}

/// Outcome of [`verify_based_ring_axioms`].
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct RingReport {
    pub ring: String,
    pub bound: usize,
    pub labels_checked: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub sampled: bool,
    pub passed: bool,
    /// First counterexample found, if any.
    pub violation: Option<String>,
}

/// Above this many triples associativity is checked on a seeded random sample.
pub const ASSOCIATIVITY_TRIPLE_LIMIT: usize = 30_000;

/// Checks the based-ring and dimension-function axioms on every label of degree at most
/// `bound`. Stops at the first counterexample.
pub fn verify_based_ring_axioms(ring: &dyn FusionRing, bound: usize) -> Result<RingReport> {
    let labels = ring.enumerate(bound);
    let mut rep = RingReport {
        ring: ring.name(),
        bound,
        labels_checked: labels.len(),
        ..Default::default()
    };
    match check_ring(ring, &labels, &mut rep)? {
        Some(v) => {
            rep.passed = false;
            rep.violation = Some(v);
        }
        None => rep.passed = true,
    }
    Ok(rep)
}

fn check_ring(ring: &dyn FusionRing, labels: &[Label], rep: &mut RingReport) -> Result<Option<String>> {
    let unit = ring.unit();
    let f = |l: &Label| ring.format(l);
    if ring.conj(&unit)? != unit {
        return Ok(Some("conj(unit) != unit".into()));
    }
    if !ring.dim(&unit)?.is_one() {
        return Ok(Some("dim(unit) != 1".into()));
    }
    for a in labels {
        let ca = ring.conj(a)?;
        if ring.conj(&ca)? != *a {
            return Ok(Some(format!("conj is not involutive at {}", f(a))));
        }
        let d = ring.dim(a)?;
        if !d.is_positive() {
            return Ok(Some(format!("dim({}) = {d} is not positive", f(a))));
        }
        if ring.dim(&ca)? != d {
            return Ok(Some(format!("dim({}) != dim(conj)", f(a))));
        }
    }
    for a in labels {
        let ca = ring.conj(a)?;
        for b in labels {
            rep.pairs_checked += 1;
            let ab = ring.tensor(a, b)?;
            if !ab.is_nonnegative() {
                return Ok(Some(format!("negative structure constant in {} ⊗ {}", f(a), f(b))));
            }
            let frob = ring.tensor(&ca, b)?.coeff(&unit);
            let expect = if a == b { BigInt::one() } else { BigInt::zero() };
            if frob != expect {
                return Ok(Some(format!(
                    "Frobenius unit condition fails: coefficient of unit in conj({}) ⊗ {} is {frob}",
                    f(a),
                    f(b)
                )));
            }
            let lhs = ab.map_labels(|l| ring.conj(l).unwrap_or_else(|_| l.clone()));
            let rhs = ring.tensor(&ring.conj(b)?, &ca)?;
            if lhs != rhs {
                return Ok(Some(format!("conj({} ⊗ {}) != conj(b) ⊗ conj(a)", f(a), f(b))));
            }
            let dab = ring.dim(a)? * ring.dim(b)?;
            if dim_combo(ring, &ab)? != dab {
                return Ok(Some(format!("dim is not multiplicative on {} ⊗ {}", f(a), f(b))));
            }
        }
    }
    let n = labels.len();
    let total = n * n * n;
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    if total <= ASSOCIATIVITY_TRIPLE_LIMIT {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    triples.push((i, j, k));
                }
            }
        }
    } else {
        rep.sampled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let idx: Vec<usize> = (0..n).collect();
        for _ in 0..ASSOCIATIVITY_TRIPLE_LIMIT {
            let i = *idx.choose(&mut rng).unwrap();
            let j = *idx.choose(&mut rng).unwrap();
            let k = *idx.choose(&mut rng).unwrap();
            triples.push((i, j, k));
        }
    }
    for (i, j, k) in triples {
        rep.triples_checked += 1;
        let (a, b, c) = (&labels[i], &labels[j], &labels[k]);
        let left = tensor_combo(ring, &ring.tensor(a, b)?, &ZCombo::single(c.clone()))?;
        let right = tensor_combo(ring, &ZCombo::single(a.clone()), &ring.tensor(b, c)?)?;
        if left != right {
            return Ok(Some(format!(
                "associativity fails on ({} ⊗ {}) ⊗ {}: {} vs {}",
                f(a),
                f(b),
                f(c),
                format_combo(ring, &left),
                format_combo(ring, &right)
            )));
        }
    }
    Ok(None)
}
