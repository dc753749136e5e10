use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::ring::{FusionRing, RingRef};
use crate::rings::{ChebyshevRing, FreeProductRing};
use crate::spec::{construct_ring, GroupSpec};

/// Orbit class of an irreducible of `G * SU_q(2)` under the wreath subring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrbitClass {
    Empty,
    /// The class of the blocks obtained by tensoring the subring with `u`.
    U,
    /// An alternating word starting with a letter of `G`.
    Word(Label),
}

/// How one tensor summand of the resolution acts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SummandKind {
    /// The fundamental `u` of `SU_q(2)`.
    Su,
    /// A fundamental (or group generator) of `G`.
    Base,
}

/// One summand `∂_γ - dim(γ) id` of the boundary map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summand {
    pub name: String,
    pub kind: SummandKind,
    /// `γ` as a label of `G * SU_q(2)`.
    pub gamma: Label,
    pub dim: BigInt,
}

/// Closed-form coefficients for `p(e_{w x}) = c(x) p(e_w)` on letters of `G`.
#[derive(Clone, Debug)]
pub(crate) enum LetterRule {
    /// Chebyshev-type letters with fundamental dimension `n`: `c(x^k) = b_{k-1}`.
    Chebyshev(u32),
    /// Group-like letters: `c = 1`.
    Group,
    Product(Box<LetterRule>, Box<LetterRule>),
    Unsupported(String),
}

/// The wreath model `H_q = G ≀_* SO_q(3)` inside `G * SU_q(2)` together with its resolution data.
#[derive(Clone, Debug)]
pub struct WreathModel {
    pub spec: GroupSpec,
    pub base: RingRef,
    pub ambient: Arc<FreeProductRing>,
    pub summands: Vec<Summand>,
    pub(crate) letter_rule: LetterRule,
}

impl WreathModel {
    /// Accepts `wreath(G)` with `G` a free product of `O+(n)`, `U+(m)`, `SUq2`, `F(n)` and `S1`.
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let GroupSpec::Wreath(g) = spec else {
            return Err(Error::Construction(format!(
                "K-theory needs a wreath model wreath(G); got {spec}"
            )));
        };
        let base = construct_ring(g)?;
        let su: RingRef = Arc::new(ChebyshevRing::suq2());
        let ambient = Arc::new(FreeProductRing::new(base.clone(), su));
        let mut summands: Vec<Summand> = base_fundamentals(g)?
            .into_iter()
            .map(|(gamma, dim)| Summand {
                name: base.format(&gamma),
                kind: SummandKind::Base,
                gamma: Label::Alt(vec![(0, gamma)]),
                dim,
            })
            .collect();
        summands.push(Summand {
            name: "u".into(),
            kind: SummandKind::Su,
            gamma: Label::Alt(vec![(1, Label::Spin(1))]),
            dim: BigInt::from(2),
        });
        Ok(Self { spec: spec.clone(), base, ambient, summands, letter_rule: letter_rule(g) })
    }

    pub fn degree(&self, c: &OrbitClass) -> usize {
        match c {
            OrbitClass::Empty | OrbitClass::U => 0,
            OrbitClass::Word(w) => self.ambient.degree(w),
        }
    }

    /// A representative irreducible of the class.
    pub fn representative(&self, c: &OrbitClass) -> Label {
        match c {
            OrbitClass::Empty => Label::Alt(vec![]),
            OrbitClass::U => Label::Alt(vec![(1, Label::Spin(1))]),
            OrbitClass::Word(w) => w.clone(),
        }
    }

    /// The class of an irreducible of `G * SU_q(2)`.
    ///
    /// A word starting with `u^a`, `a` even, has the class of its remainder. For `a` odd the
    /// prefix up to the first interior `u^c` with `c` odd lies in the subring and the class is
    /// the word after it; without such a letter the class is `∅` when the word ends in an odd
    /// power of `u` (and has a `G` letter) and `U` otherwise.
    pub fn class_of(&self, x: &Label) -> OrbitClass {
        let Label::Alt(w) = x else { return OrbitClass::Empty };
        let mut i = 0;
        loop {
            let Some((side, letter)) = w.get(i) else { return OrbitClass::Empty };
            if *side == 0 {
                return OrbitClass::Word(Label::Alt(w[i..].to_vec()));
            }
            let Label::Spin(a) = letter else { return OrbitClass::Empty };
            if a % 2 == 0 {
                i += 1;
                continue;
            }
            // odd leading power: scan interior SU letters
            let rest = &w[i + 1..];
            if rest.is_empty() {
                return OrbitClass::U;
            }
            for (j, (s, l)) in rest.iter().enumerate() {
                if *s == 1 && j + 1 < rest.len() {
                    if let Label::Spin(c) = l {
                        if c % 2 == 1 {
                            return OrbitClass::Word(Label::Alt(rest[j + 1..].to_vec()));
                        }
                    }
                }
            }
            return match rest.last() {
                Some((1, Label::Spin(c))) if c % 2 == 1 => OrbitClass::Empty,
                _ => OrbitClass::U,
            };
        }
    }

    /// `∅`, `U`, then words starting in `G` of degree at most `bound`, by (degree, label).
    pub fn orbit_basis(&self, bound: usize) -> Vec<OrbitClass> {
        let mut out = vec![OrbitClass::Empty, OrbitClass::U];
        out.extend(
            self.ambient
                .enumerate(bound)
                .into_iter()
                .filter(|l| matches!(l, Label::Alt(w) if w.first().is_some_and(|x| x.0 == 0)))
                .map(OrbitClass::Word),
        );
        out
    }

    pub fn format_class(&self, c: &OrbitClass) -> String {
        match c {
            OrbitClass::Empty => "∅".into(),
            OrbitClass::U => "u".into(),
            OrbitClass::Word(w) => self.ambient.format(w),
        }
    }
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitClass::Empty => write!(f, "∅"),
            OrbitClass::U => write!(f, "u"),
            OrbitClass::Word(w) => write!(f, "{w}"),
        }
    }
}

/// Fundamentals of a supported torsion-free `G`, as labels of its own fusion ring.
fn base_fundamentals(spec: &GroupSpec) -> Result<Vec<(Label, BigInt)>> {
    Ok(match spec {
        GroupSpec::OPlus(n) => vec![(Label::Spin(1), BigInt::from(*n))],
        GroupSpec::SUq2 => vec![(Label::Spin(1), BigInt::from(2))],
        GroupSpec::UPlus(m) => vec![
            (Label::Unitary(vec![false]), BigInt::from(*m)),
            (Label::Unitary(vec![true]), BigInt::from(*m)),
        ],
        GroupSpec::FreeGroup(n) => (1..=*n as i32).map(|i| (Label::Group(vec![i]), BigInt::from(1))).collect(),
        GroupSpec::Circle => vec![(Label::Group(vec![1]), BigInt::from(1))],
        GroupSpec::FreeProduct(a, b) => {
            let mut out: Vec<(Label, BigInt)> =
                base_fundamentals(a)?.into_iter().map(|(l, d)| (Label::Alt(vec![(0, l)]), d)).collect();
            out.extend(base_fundamentals(b)?.into_iter().map(|(l, d)| (Label::Alt(vec![(1, l)]), d)));
            out
        }
        GroupSpec::Cyclic(_) => {
            return Err(Error::Unsupported(format!(
                "{spec} has torsion; the length-one resolution needs a torsion-free G"
            )))
        }
        GroupSpec::Wreath(_) | GroupSpec::Tilde(..) => {
            return Err(Error::Unsupported(format!("no length-one resolution is known for {spec}")))
        }
    })
}

fn letter_rule(spec: &GroupSpec) -> LetterRule {
    match spec {
        GroupSpec::OPlus(n) => LetterRule::Chebyshev(*n),
        GroupSpec::SUq2 => LetterRule::Chebyshev(2),
        GroupSpec::FreeGroup(_) | GroupSpec::Circle => LetterRule::Group,
        GroupSpec::FreeProduct(a, b) => LetterRule::Product(Box::new(letter_rule(a)), Box::new(letter_rule(b))),
        other => LetterRule::Unsupported(format!("no closed-form rewriting for letters of {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn model(s: &str) -> WreathModel {
        WreathModel::new(&parse_spec(s).unwrap()).unwrap()
    }

    #[test]
    fn basis_examples() {
        let m = model("wreath(O+(3))");
        let b: Vec<String> = m.orbit_basis(1).iter().map(|c| m.format_class(c)).collect();
        assert_eq!(b, ["∅", "u", "v1"]);
        assert_eq!(m.orbit_basis(0).len(), 2);
        let f1 = model("wreath(F(1))");
        let b: Vec<String> = f1.orbit_basis(2).iter().map(|c| f1.format_class(c)).collect();
        assert_eq!(b, ["∅", "u", "a^-1", "a", "a^-1 u1", "a^-2", "a u1", "a^2"]);
    }

    #[test]
    fn classes() {
        let m = model("wreath(O+(3))");
        let p = |s: &str| m.ambient.parse(s).unwrap();
        let c = |s: &str| m.format_class(&m.class_of(&p(s)));
        assert_eq!(c("1"), "∅");
        assert_eq!(c("u1"), "u");
        assert_eq!(c("u2"), "∅");
        assert_eq!(c("u1 v1 u1"), "∅");
        assert_eq!(c("u1 v1"), "u");
        assert_eq!(c("u1 v1 u2"), "u");
        assert_eq!(c("u2 v1 u1"), "v1 u1");
        assert_eq!(c("u1 v1 u3 v2"), "v2");
        assert_eq!(c("u1 v1 u2 v2 u1"), "∅");
        assert_eq!(c("v1 u3"), "v1 u3");
    }

    #[test]
    fn unsupported() {
        assert!(WreathModel::new(&parse_spec("wreath(Z/2)").unwrap()).is_err());
        assert!(WreathModel::new(&parse_spec("O+(3)").unwrap()).is_err());
    }
}
