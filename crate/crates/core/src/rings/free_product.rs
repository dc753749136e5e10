use num_bigint::BigInt;
use num_traits::One;

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::{FusionRing, RingRef};

use super::is_unit_token;

/// Free product of two based rings. Labels are alternating words of non-unit letters,
/// side 0 from the left factor and side 1 from the right factor.
#[derive(Debug, Clone)]
pub struct FreeProductRing {
    left: RingRef,
    right: RingRef,
}

pub type Letter = (u8, Label);

impl FreeProductRing {
    pub fn new(left: RingRef, right: RingRef) -> Self {
        Self { left, right }
    }

    pub fn left(&self) -> &RingRef {
        &self.left
    }

    pub fn right(&self) -> &RingRef {
        &self.right
    }

    pub fn factor(&self, side: u8) -> &RingRef {
        if side == 0 {
            &self.left
        } else {
            &self.right
        }
    }

    /// The one-letter word for a label of one factor, or the unit word if `l` is that
    /// factor's unit.
    pub fn embed(&self, side: u8, l: Label) -> Label {
        if l == self.factor(side).unit() {
            Label::Alt(vec![])
        } else {
            Label::Alt(vec![(side, l)])
        }
    }

    fn word<'a>(&self, a: &'a Label) -> Result<&'a [Letter]> {
        match a {
            Label::Alt(w) if self.valid(w) => Ok(w),
            _ => domain(format!("{a} is not a label of {}", self.name())),
        }
    }

    fn valid(&self, w: &[Letter]) -> bool {
        w.iter().all(|(s, l)| *s <= 1 && self.factor(*s).contains(l) && *l != self.factor(*s).unit())
            && w.windows(2).all(|p| p[0].0 != p[1].0)
    }

    /// Tensor product of two alternating words.
    pub fn tensor_words(&self, x: &[Letter], y: &[Letter]) -> Result<ZCombo> {
        let mut out = ZCombo::new();
        self.tensor_into(x, y, &BigInt::one(), &mut out)?;
        Ok(out)
    }

    fn tensor_into(&self, x: &[Letter], y: &[Letter], coeff: &BigInt, out: &mut ZCombo) -> Result<()> {
        let (Some(a), Some(b)) = (x.last(), y.first()) else {
            let mut w = x.to_vec();
            w.extend_from_slice(y);
            out.add(Label::Alt(w), coeff.clone());
            return Ok(());
        };
        if a.0 != b.0 {
            let mut w = x.to_vec();
            w.extend_from_slice(y);
            out.add(Label::Alt(w), coeff.clone());
            return Ok(());
        }
        let ring = self.factor(a.0);
        let unit = ring.unit();
        let (xs, ys) = (&x[..x.len() - 1], &y[1..]);
        for (c, m) in ring.tensor(&a.1, &b.1)?.iter() {
            let cm = coeff * m;
            if *c == unit {
                self.tensor_into(xs, ys, &cm, out)?;
            } else {
                let mut w = xs.to_vec();
                w.push((a.0, c.clone()));
                w.extend_from_slice(ys);
                out.add(Label::Alt(w), cm);
            }
        }
        Ok(())
    }

    fn extend_words(&self, prefix: &mut Vec<Letter>, deg: usize, bound: usize, letters: &[Vec<(usize, Label)>; 2], out: &mut Vec<Label>) {
        out.push(Label::Alt(prefix.clone()));
        for side in 0..2u8 {
            if prefix.last().map(|l| l.0) == Some(side) {
                continue;
            }
            for (d, l) in &letters[side as usize] {
                if deg + d > bound {
                    continue;
                }
                prefix.push((side, l.clone()));
                self.extend_words(prefix, deg + d, bound, letters, out);
                prefix.pop();
            }
        }
    }
}

impl FusionRing for FreeProductRing {
    fn name(&self) -> String {
        format!("{} * {}", self.left.name(), self.right.name())
    }

    fn unit(&self) -> Label {
        Label::Alt(vec![])
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Alt(w) if self.valid(w))
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        let w = self.word(a)?;
        let mut out = Vec::with_capacity(w.len());
        for (s, l) in w.iter().rev() {
            out.push((*s, self.factor(*s).conj(l)?));
        }
        Ok(Label::Alt(out))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.word(a)?, self.word(b)?);
        self.tensor_words(x, y)
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        let mut d = BigInt::one();
        for (s, l) in self.word(a)? {
            d *= self.factor(*s).dim(l)?;
        }
        Ok(d)
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Alt(w) => w.iter().map(|(s, l)| self.factor(*s).degree(l)).sum(),
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.left.generators().into_iter().map(|g| Label::Alt(vec![(0, g)])).collect();
        out.extend(self.right.generators().into_iter().map(|g| Label::Alt(vec![(1, g)])));
        out
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        let letters = [0u8, 1].map(|s| {
            let r = self.factor(s);
            let unit = r.unit();
            r.enumerate(bound)
                .into_iter()
                .filter(|l| *l != unit)
                .map(|l| (r.degree(&l).max(1), l))
                .collect::<Vec<_>>()
        });
        let mut out = Vec::new();
        self.extend_words(&mut Vec::new(), 0, bound, &letters, &mut out);
        out.sort_by_cached_key(|l| (self.degree(l), l.clone()));
        out
    }

    fn format(&self, a: &Label) -> String {
        match a {
            Label::Alt(w) if w.is_empty() => "1".into(),
            Label::Alt(w) => w
                .iter()
                .map(|(s, l)| self.factor(*s).format(l))
                .collect::<Vec<_>>()
                .join(" "),
            other => other.to_string(),
        }
    }

    /// Parses whitespace-separated letters; maximal runs of tokens accepted by the same
    /// factor are parsed together as one letter of that factor.
    fn parse(&self, s: &str) -> Result<Label> {
        if is_unit_token(s) {
            return Ok(self.unit());
        }
        let mut runs: Vec<(u8, Vec<&str>)> = Vec::new();
        for tok in s.split_whitespace() {
            let side = if self.left.parse(tok).is_ok() {
                0
            } else if self.right.parse(tok).is_ok() {
                1
            } else {
                return Err(Error::Parse { pos: 0, msg: format!("{tok:?} is not a letter of {}", self.name()) });
            };
            match runs.last_mut() {
                Some((s, toks)) if *s == side => toks.push(tok),
                _ => runs.push((side, vec![tok])),
            }
        }
        let mut out = ZCombo::single(self.unit());
        for (side, toks) in runs {
            let l = self.factor(side).parse(&toks.join(" "))?;
            let letter = ZCombo::single(self.embed(side, l));
            out = crate::ring::tensor_combo(self, &out, &letter)?;
        }
        out.as_basis_element()
            .cloned()
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("{s:?} does not denote a single basis element") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{format_combo, verify_based_ring_axioms};
    use crate::rings::{ChebyshevRing, CyclicRing};
    use std::sync::Arc;

    fn z2_su() -> FreeProductRing {
        FreeProductRing::new(Arc::new(CyclicRing::new(2).unwrap()), Arc::new(ChebyshevRing::suq2()))
    }

    fn fuse(r: &FreeProductRing, a: &str, b: &str) -> String {
        let t = r.tensor(&r.parse(a).unwrap(), &r.parse(b).unwrap()).unwrap();
        format_combo(r, &t)
    }

    #[test]
    fn same_and_different_factor() {
        let r = z2_su();
        assert_eq!(fuse(&r, "s u1", "u1 s"), "s u2 s + 1");
        assert_eq!(fuse(&r, "s", "s"), "1");
        assert_eq!(fuse(&r, "u1", "u1 s"), "u2 s + s");
        assert_eq!(fuse(&r, "s", "u3"), "s u3");
    }

    #[test]
    fn axioms_and_corruption() {
        let r = z2_su();
        assert!(verify_based_ring_axioms(&r, 5).unwrap().passed);
        let rep = verify_based_ring_axioms(&NoDelta(r), 4).unwrap();
        assert!(!rep.passed);
        assert!(rep.violation.is_some());
    }

    #[test]
    fn factor_fusion_is_reproduced() {
        let r = z2_su();
        let su = ChebyshevRing::suq2();
        for a in 1..5 {
            for b in 1..5 {
                let lhs = r.tensor(&r.embed(1, Label::Spin(a)), &r.embed(1, Label::Spin(b))).unwrap();
                let rhs = su.tensor(&Label::Spin(a), &Label::Spin(b)).unwrap().map_labels(|l| r.embed(1, l.clone()));
                assert_eq!(lhs, rhs);
            }
        }
    }

    /// The free-product rule with the recursive unit term dropped.
    #[derive(Debug)]
    struct NoDelta(FreeProductRing);

    impl FusionRing for NoDelta {
        fn name(&self) -> String {
            self.0.name()
        }
        fn unit(&self) -> Label {
            self.0.unit()
        }
        fn contains(&self, a: &Label) -> bool {
            self.0.contains(a)
        }
        fn conj(&self, a: &Label) -> Result<Label> {
            self.0.conj(a)
        }
        fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
            let (Label::Alt(x), Label::Alt(y)) = (a, b) else { unreachable!() };
            match (x.last(), y.first()) {
                (Some(p), Some(q)) if p.0 == q.0 && !x.is_empty() && x.len() + y.len() > 2 => {
                    let mut out = self.0.tensor(a, b)?;
                    let unit_part = self.0.tensor_words(&x[..x.len() - 1], &y[1..])?;
                    let m = self.0.factor(p.0).tensor(&p.1, &q.1)?.coeff(&self.0.factor(p.0).unit());
                    out.add_scaled(&unit_part, &-m);
                    Ok(out)
                }
                _ => self.0.tensor(a, b),
            }
        }
        fn dim(&self, a: &Label) -> Result<BigInt> {
            self.0.dim(a)
        }
        fn degree(&self, a: &Label) -> usize {
            self.0.degree(a)
        }
        fn generators(&self) -> Vec<Label> {
            self.0.generators()
        }
        fn enumerate(&self, bound: usize) -> Vec<Label> {
            self.0.enumerate(bound)
        }
        fn format(&self, a: &Label) -> String {
            self.0.format(a)
        }
        fn parse(&self, s: &str) -> Result<Label> {
            self.0.parse(s)
        }
    }
}
