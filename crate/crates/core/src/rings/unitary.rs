use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::FusionRing;

use super::is_unit_token;

/// Representation ring of the free unitary quantum group `U_m^+`.
///
/// Labels are words in `v` (`false`) and `vb` (`true`), with
/// `r ⊗ s = Σ_{r = x g, s = conj(g) y} x y`.
#[derive(Debug, Clone)]
pub struct UnitaryRing {
    m: u32,
}

impl UnitaryRing {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Construction(format!("U+({m}) requires m >= 2")));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn word<'a>(&self, a: &'a Label) -> Result<&'a [bool]> {
        match a {
            Label::Unitary(w) => Ok(w),
            _ => domain(format!("{a} is not a label of {}", self.name())),
        }
    }
}

fn conj_word(w: &[bool]) -> Vec<bool> {
    w.iter().rev().map(|b| !b).collect()
}

impl FusionRing for UnitaryRing {
    fn name(&self) -> String {
        format!("U+({})", self.m)
    }

    fn unit(&self) -> Label {
        Label::Unitary(vec![])
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Unitary(_))
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        Ok(Label::Unitary(conj_word(self.word(a)?)))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (r, s) = (self.word(a)?, self.word(b)?);
        let mut out = ZCombo::new();
        for k in 0..=r.len().min(s.len()) {
            let g = &r[r.len() - k..];
            if k > 0 && conj_word(g) != s[..k] {
                break;
            }
            let mut w = r[..r.len() - k].to_vec();
            w.extend_from_slice(&s[k..]);
            out.add(Label::Unitary(w), BigInt::one());
        }
        Ok(out)
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        let w = self.word(a)?;
        // dims[i] = dim of the prefix of length i; w[..i] ⊗ w[i] = w[..=i] + [w[i-1] = conj w[i]] w[..i-1]
        let m = BigInt::from(self.m);
        let mut dims: Vec<BigInt> = vec![BigInt::one()];
        for i in 0..w.len() {
            let mut d = &dims[i] * &m;
            if i > 0 && w[i - 1] != w[i] {
                d -= &dims[i - 1];
            }
            dims.push(d);
        }
        Ok(dims.pop().unwrap_or_else(BigInt::zero))
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Unitary(w) => w.len(),
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        vec![Label::Unitary(vec![false]), Label::Unitary(vec![true])]
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        let mut out = vec![Label::Unitary(vec![])];
        let mut layer: Vec<Vec<bool>> = vec![vec![]];
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &layer {
                for b in [false, true] {
                    let mut v = w.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            let mut labels: Vec<Label> = next.iter().cloned().map(Label::Unitary).collect();
            labels.sort();
            out.extend(labels);
            layer = next;
        }
        out
    }

    fn format(&self, a: &Label) -> String {
        match a {
            Label::Unitary(w) if w.is_empty() => "1".into(),
            Label::Unitary(w) => {
                w.iter().map(|b| if *b { "vb" } else { "v" }).collect::<Vec<_>>().join(" ")
            }
            other => other.to_string(),
        }
    }

    fn parse(&self, s: &str) -> Result<Label> {
        if is_unit_token(s) {
            return Ok(self.unit());
        }
        let mut w = Vec::new();
        for tok in s.split_whitespace() {
            match tok {
                "v" => w.push(false),
                "vb" | "v̄" => w.push(true),
                _ => {
                    return Err(Error::Parse { pos: 0, msg: format!("expected v or vb, got {tok:?}") })
                }
            }
        }
        Ok(Label::Unitary(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_based_ring_axioms;

    #[test]
    fn junction_rule() {
        let r = UnitaryRing::new(3).unwrap();
        let v = r.parse("v").unwrap();
        let vb = r.parse("vb").unwrap();
        let t = r.tensor(&v, &vb).unwrap();
        assert_eq!(t, [r.parse("v vb").unwrap(), r.unit()].into_iter().map(|l| (l, BigInt::one())).collect());
        assert_eq!(r.tensor(&v, &v).unwrap(), ZCombo::single(r.parse("v v").unwrap()));
        assert_eq!(r.dim(&r.parse("v vb").unwrap()).unwrap(), BigInt::from(8));
        assert_eq!(r.conj(&r.parse("v v vb").unwrap()).unwrap(), r.parse("v vb vb").unwrap());
    }

    #[test]
    fn axioms() {
        assert!(verify_based_ring_axioms(&UnitaryRing::new(2).unwrap(), 5).unwrap().passed);
    }
}
