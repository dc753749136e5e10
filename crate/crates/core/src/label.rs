use std::fmt;

use serde::{Deserialize, Serialize};

/// Canonical name of an irreducible representation, or of a basis element of a based module.
///
/// Which variants are meaningful depends on the ring: a Chebyshev ring uses `Spin`, a free
/// product uses `Alt` whose letters are labels of the two factors, and so on. Every
/// constructor in this crate produces labels in canonical reduced form, so structural
/// equality is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    /// `u^k` / `v^k` in a Chebyshev (SU_q(2)-type) ring; `Spin(0)` is the unit.
    Spin(u32),
    /// Element `g^r` of a cyclic group.
    Residue(u32),
    /// Reduced word in a free group; letter `±(i+1)` is generator `i` or its inverse.
    Group(Vec<i32>),
    /// Element of a free abelian group `Z^n`.
    Lattice(Vec<i64>),
    /// Word over `{v, v̄}` in a free unitary ring (`true` is `v̄`).
    Unitary(Vec<bool>),
    /// Alternating word of a free product: `(side, letter)`, letters never units.
    Alt(Vec<(u8, Label)>),
    /// Word of the free wreath product ring; letters are labels of the base ring, units allowed.
    Wreath(Vec<Label>),
    /// Basis element `j_k` of a finite or closed-form module.
    Point(u32),
    /// Basis element `w j` of an induced module.
    Pair(Box<Label>, Box<Label>),
}

impl Label {
    pub fn pair(w: Label, j: Label) -> Label {
        Label::Pair(Box::new(w), Box::new(j))
    }

    /// Letters of an alternating word; empty for anything else.
    pub fn alt_letters(&self) -> &[(u8, Label)] {
        match self {
            Label::Alt(v) => v,
            _ => &[],
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Spin(k) => write!(f, "u{k}"),
            Label::Residue(r) => write!(f, "g^{r}"),
            Label::Group(w) => {
                if w.is_empty() {
                    return write!(f, "1");
                }
                let s: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "F[{}]", s.join(","))
            }
            Label::Lattice(v) => write!(f, "Z{v:?}"),
            Label::Unitary(w) => {
                let s: Vec<&str> = w.iter().map(|b| if *b { "vb" } else { "v" }).collect();
                write!(f, "U[{}]", s.join(" "))
            }
            Label::Alt(w) => {
                if w.is_empty() {
                    return write!(f, "1");
                }
                let s: Vec<String> = w.iter().map(|(_, l)| l.to_string()).collect();
                write!(f, "{}", s.join(" "))
            }
            Label::Wreath(w) => {
                let s: Vec<String> = w.iter().map(|l| l.to_string()).collect();
                write!(f, "({})", s.join("|"))
            }
            Label::Point(k) => write!(f, "j{k}"),
            Label::Pair(w, j) => write!(f, "{w}.{j}"),
        }
    }
}
