use num_bigint::BigInt;
use num_traits::One;

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::FusionRing;

use super::{is_unit_token, split_power};

/// Group ring of `Z/k` (the dual of the cyclic group). For `k = 2` the generator prints as `s`.
#[derive(Debug, Clone)]
pub struct CyclicRing {
    order: u32,
}

impl CyclicRing {
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::Construction("Z/0 is not a finite cyclic group".into()));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn residue(&self, a: &Label) -> Result<u32> {
        match a {
            Label::Residue(r) if *r < self.order => Ok(*r),
            _ => domain(format!("{a} is not a label of Z/{}", self.order)),
        }
    }

    fn symbol(&self) -> &'static str {
        if self.order == 2 {
            "s"
        } else {
            "g"
        }
    }
}

impl FusionRing for CyclicRing {
    fn name(&self) -> String {
        format!("Z/{}", self.order)
    }

    fn unit(&self) -> Label {
        Label::Residue(0)
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Residue(r) if *r < self.order)
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        let r = self.residue(a)?;
        Ok(Label::Residue((self.order - r) % self.order))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.residue(a)?, self.residue(b)?);
        Ok(ZCombo::single(Label::Residue((x + y) % self.order)))
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        self.residue(a)?;
        Ok(BigInt::one())
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Residue(0) => 0,
            _ => 1,
        }
    }

    fn generators(&self) -> Vec<Label> {
        if self.order > 1 {
            vec![Label::Residue(1)]
        } else {
            vec![]
        }
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        if bound == 0 {
            return vec![Label::Residue(0)];
        }
        (0..self.order).map(Label::Residue).collect()
    }

    fn format(&self, a: &Label) -> String {
        match a {
            Label::Residue(0) => "1".into(),
            Label::Residue(1) => self.symbol().into(),
            Label::Residue(r) => format!("{}^{r}", self.symbol()),
            other => other.to_string(),
        }
    }

    fn parse(&self, s: &str) -> Result<Label> {
        let t = s.trim();
        if is_unit_token(t) {
            return Ok(Label::Residue(0));
        }
        let bad = || Error::Parse { pos: 0, msg: format!("not an element of Z/{}: {t:?}", self.order) };
        let (base, e) = split_power(t).ok_or_else(bad)?;
        if base != self.symbol() && base != "g" {
            return Err(bad());
        }
        let r = e.rem_euclid(self.order as i64) as u32;
        Ok(Label::Residue(r))
    }

    fn is_finite(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_based_ring_axioms;

    #[test]
    fn z2() {
        let r = CyclicRing::new(2).unwrap();
        let s = Label::Residue(1);
        assert_eq!(r.tensor(&s, &s).unwrap(), ZCombo::single(r.unit()));
        assert_eq!(r.enumerate(5), vec![Label::Residue(0), s.clone()]);
        assert_eq!(r.format(&s), "s");
        assert_eq!(r.parse("s").unwrap(), s);
        assert_eq!(r.conj(&r.unit()).unwrap(), r.unit());
    }

    #[test]
    fn z4() {
        let r = CyclicRing::new(4).unwrap();
        assert_eq!(r.conj(&Label::Residue(1)).unwrap(), Label::Residue(3));
        assert_eq!(r.parse("g^-1").unwrap(), Label::Residue(3));
        assert_eq!(r.format(&Label::Residue(2)), "g^2");
        assert!(verify_based_ring_axioms(&r, 3).unwrap().passed);
        assert!(r.dim(&Label::Residue(4)).is_err());
    }
}
