use num_bigint::BigInt;
use num_traits::One;

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::FusionRing;

use super::is_unit_token;

/// Group ring of the free abelian group `Z^n`, written multiplicatively in `a, b, ...`.
#[derive(Debug, Clone)]
pub struct LatticeRing {
    rank: usize,
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";

impl LatticeRing {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > LETTERS.len() {
            return Err(Error::Construction(format!("Z^{rank} is not supported")));
        }
        Ok(Self { rank })
    }

    pub fn basis_vector(&self, i: usize, e: i64) -> Label {
        let mut v = vec![0; self.rank];
        v[i] = e;
        Label::Lattice(v)
    }

    fn vector<'a>(&self, a: &'a Label) -> Result<&'a [i64]> {
        match a {
            Label::Lattice(v) if v.len() == self.rank => Ok(v),
            _ => domain(format!("{a} is not a label of Z^{}", self.rank)),
        }
    }
}

impl FusionRing for LatticeRing {
    fn name(&self) -> String {
        format!("Z^{}", self.rank)
    }

    fn unit(&self) -> Label {
        Label::Lattice(vec![0; self.rank])
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Lattice(v) if v.len() == self.rank)
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        Ok(Label::Lattice(self.vector(a)?.iter().map(|x| -x).collect()))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.vector(a)?, self.vector(b)?);
        Ok(ZCombo::single(Label::Lattice(x.iter().zip(y).map(|(p, q)| p + q).collect())))
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        self.vector(a)?;
        Ok(BigInt::one())
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Lattice(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        (0..self.rank).map(|i| self.basis_vector(i, 1)).collect()
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        let mut out = Vec::new();
        let b = bound as i64;
        let mut cur = vec![-b; self.rank];
        loop {
            let l = Label::Lattice(cur.clone());
            if self.degree(&l) <= bound {
                out.push(l);
            }
            let mut i = 0;
            loop {
                if i == self.rank {
                    out.sort_by_key(|l| (self.degree(l), l.clone()));
                    return out;
                }
                if cur[i] < b {
                    cur[i] += 1;
                    break;
                }
                cur[i] = -b;
                i += 1;
            }
        }
    }

    fn format(&self, a: &Label) -> String {
        let Label::Lattice(v) = a else { return a.to_string() };
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, e)| **e != 0)
            .map(|(i, e)| {
                let c = LETTERS[i] as char;
                if *e == 1 {
                    c.to_string()
                } else {
                    format!("{c}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    fn parse(&self, s: &str) -> Result<Label> {
        if is_unit_token(s) {
            return Ok(self.unit());
        }
        let mut v = vec![0i64; self.rank];
        for tok in s.split_whitespace() {
            let (base, e) = super::split_power(tok)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("bad token {tok:?}") })?;
            let i = LETTERS
                .iter()
                .position(|&c| base.len() == 1 && c as char == base.chars().next().unwrap())
                .filter(|&i| i < self.rank)
                .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown generator {base:?}") })?;
            v[i] += e;
        }
        Ok(Label::Lattice(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_based_ring_axioms;

    #[test]
    fn commutative() {
        let z2 = LatticeRing::new(2).unwrap();
        let ab = z2.tensor(&z2.parse("a").unwrap(), &z2.parse("b").unwrap()).unwrap();
        let ba = z2.tensor(&z2.parse("b").unwrap(), &z2.parse("a").unwrap()).unwrap();
        assert_eq!(ab, ba);
        assert_eq!(z2.enumerate(1).len(), 5);
        assert_eq!(z2.format(&z2.parse("a b^-1").unwrap()), "a b^-1");
        assert!(verify_based_ring_axioms(&z2, 2).unwrap().passed);
    }
}
