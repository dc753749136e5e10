use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::label::Label;

/// Finitely supported integer combination of labels. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ZCombo {
    terms: BTreeMap<Label, BigInt>,
}

impl ZCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(l: Label) -> Self {
        let mut c = Self::new();
        c.add(l, BigInt::one());
        c
    }

    pub fn add(&mut self, l: Label, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(l);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_i(&mut self, l: Label, c: i64) {
        self.add(l, BigInt::from(c));
    }

    pub fn add_scaled(&mut self, other: &ZCombo, c: &BigInt) {
        for (l, v) in &other.terms {
            self.add(l.clone(), v * c);
        }
    }

    pub fn add_combo(&mut self, other: &ZCombo) {
        for (l, v) in &other.terms {
            self.add(l.clone(), v.clone());
        }
    }

    pub fn sub_combo(&mut self, other: &ZCombo) {
        for (l, v) in &other.terms {
            self.add(l.clone(), -v);
        }
    }

    pub fn coeff(&self, l: &Label) -> BigInt {
        self.terms.get(l).cloned().unwrap_or_default()
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.terms.contains_key(l)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Label, &BigInt)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|v| !v.is_negative())
    }

    /// The label if this combination is a single basis element with coefficient one.
    pub fn as_basis_element(&self) -> Option<&Label> {
        if self.terms.len() != 1 {
            return None;
        }
        let (l, c) = self.terms.iter().next()?;
        c.is_one().then_some(l)
    }

    pub fn map_labels(&self, mut f: impl FnMut(&Label) -> Label) -> ZCombo {
        let mut out = ZCombo::new();
        for (l, c) in &self.terms {
            out.add(f(l), c.clone());
        }
        out
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&Label) -> bool) {
        self.terms.retain(|l, _| keep(l));
    }
}

impl FromIterator<(Label, BigInt)> for ZCombo {
    fn from_iter<T: IntoIterator<Item = (Label, BigInt)>>(iter: T) -> Self {
        let mut c = ZCombo::new();
        for (l, v) in iter {
            c.add(l, v);
        }
        c
    }
}
