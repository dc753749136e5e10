use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::{format_combo, FusionRing, RingRef};

use super::{is_unit_token, ChebyshevRing, FreeProductRing};

/// Fusion ring of the free wreath product `Ĝ ≀_* S_2^+`.
///
/// Labels are words over `Irr(G)` in which the unit letter `ε` is allowed. Fusion is
/// `(xγ) ⊗ (γ'y) = xγγ'y + Σ_{β ⊂ γ⊗γ'} m_β · xβy + [ε ⊂ γ⊗γ'] · (x ⊗ y)`.
/// [`WreathRing::lambda`] embeds this ring into `R(G) * R(SU_q(2))`.
/// Outcome of [`WreathRing::check_lambda`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaReport {
    pub ring: String,
    pub bound: usize,
    pub pairs_checked: usize,
    pub passed: bool,
    pub violation: Option<String>,
}

#[derive(Debug, Clone)]
pub struct WreathRing {
    base: RingRef,
    ambient: Arc<FreeProductRing>,
}

impl WreathRing {
    pub fn new(base: RingRef) -> Self {
        let su: RingRef = Arc::new(ChebyshevRing::suq2());
        let ambient = Arc::new(FreeProductRing::new(base.clone(), su));
        Self { base, ambient }
    }

    pub fn base(&self) -> &RingRef {
        &self.base
    }

    /// The free product `R(G) * R(SU_q(2))` containing the image of [`WreathRing::lambda`].
    pub fn ambient(&self) -> &Arc<FreeProductRing> {
        &self.ambient
    }

    fn word<'a>(&self, a: &'a Label) -> Result<&'a [Label]> {
        match a {
            Label::Wreath(w) if w.iter().all(|l| self.base.contains(l)) => Ok(w),
            _ => domain(format!("{a} is not a label of {}", self.name())),
        }
    }

    fn tensor_into(&self, x: &[Label], y: &[Label], coeff: &BigInt, out: &mut ZCombo) -> Result<()> {
        let mut cat = x.to_vec();
        cat.extend_from_slice(y);
        out.add(Label::Wreath(cat), coeff.clone());
        let (Some((g, xs)), Some((h, ys))) = (x.split_last(), y.split_first()) else {
            return Ok(());
        };
        let unit = self.base.unit();
        for (b, m) in self.base.tensor(g, h)?.iter() {
            let cm = coeff * m;
            let mut w = xs.to_vec();
            w.push(b.clone());
            w.extend_from_slice(ys);
            out.add(Label::Wreath(w), cm.clone());
            if *b == unit {
                self.tensor_into(xs, ys, &cm, out)?;
            }
        }
        Ok(())
    }

    /// The embedding into `R(G) * R(SU_q(2))`.
    ///
    /// A word of `n` unit letters maps to `u^{2n}`. Otherwise, with non-unit letters
    /// `β_1, ..., β_p`, `a` leading units, `b` trailing units and `m_i` units between
    /// `β_i` and `β_{i+1}`, the image is
    /// `u^{2a+1} β_1 u^{2m_1+2} β_2 ... β_p u^{2b+1}`.
    pub fn lambda(&self, a: &Label) -> Result<Label> {
        let w = self.word(a)?;
        let unit = self.base.unit();
        let mut letters: Vec<(u8, Label)> = Vec::new();
        let mut run = 0u32;
        let mut seen = false;
        for l in w {
            if *l == unit {
                run += 1;
                continue;
            }
            let e = if seen { 2 * run + 2 } else { 2 * run + 1 };
            letters.push((1, Label::Spin(e)));
            letters.push((0, l.clone()));
            seen = true;
            run = 0;
        }
        if seen {
            letters.push((1, Label::Spin(2 * run + 1)));
        } else if run > 0 {
            letters.push((1, Label::Spin(2 * run)));
        }
        Ok(Label::Alt(letters))
    }

    pub fn lambda_combo(&self, x: &ZCombo) -> Result<ZCombo> {
        let mut out = ZCombo::new();
        for (l, c) in x.iter() {
            out.add(self.lambda(l)?, c.clone());
        }
        Ok(out)
    }

    /// Checks `Λ(a ⊗ b) = Λ(a) ⊗ Λ(b)` and `Λ(ā) = conj Λ(a)` on labels of degree at most `bound`.
    pub fn check_lambda(&self, bound: usize) -> Result<LambdaReport> {
        let labels = self.enumerate(bound);
        let mut rep = LambdaReport { ring: self.name(), bound, pairs_checked: 0, passed: false, violation: None };
        for a in &labels {
            let la = self.lambda(a)?;
            if self.lambda(&self.conj(a)?)? != self.ambient.conj(&la)? {
                rep.violation = Some(format!("Λ does not commute with conjugation at {}", self.format(a)));
                return Ok(rep);
            }
            for b in &labels {
                let lhs = self.lambda_combo(&self.tensor(a, b)?)?;
                let rhs = self.ambient.tensor(&la, &self.lambda(b)?)?;
                rep.pairs_checked += 1;
                if lhs != rhs {
                    rep.violation = Some(format!(
                        "Λ({} ⊗ {}) = {} but Λ({}) ⊗ Λ({}) = {}",
                        self.format(a),
                        self.format(b),
                        format_combo(self.ambient.as_ref(), &lhs),
                        self.format(a),
                        self.format(b),
                        format_combo(self.ambient.as_ref(), &rhs)
                    ));
                    return Ok(rep);
                }
            }
        }
        rep.passed = true;
        Ok(rep)
    }

    fn extend_words(&self, prefix: &mut Vec<Label>, deg: usize, bound: usize, letters: &[(usize, Label)], out: &mut Vec<Label>) {
        out.push(Label::Wreath(prefix.clone()));
        for (d, l) in letters {
            if deg + d <= bound {
                prefix.push(l.clone());
                self.extend_words(prefix, deg + d, bound, letters, out);
                prefix.pop();
            }
        }
    }
}

impl FusionRing for WreathRing {
    fn name(&self) -> String {
        format!("wreath({})", self.base.name())
    }

    fn unit(&self) -> Label {
        Label::Wreath(vec![])
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Wreath(w) if w.iter().all(|l| self.base.contains(l)))
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        let w = self.word(a)?;
        let mut out = Vec::with_capacity(w.len());
        for l in w.iter().rev() {
            out.push(self.base.conj(l)?);
        }
        Ok(Label::Wreath(out))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.word(a)?, self.word(b)?);
        let mut out = ZCombo::new();
        self.tensor_into(x, y, &BigInt::one(), &mut out)?;
        Ok(out)
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        self.ambient.dim(&self.lambda(a)?)
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Wreath(w) => w.iter().map(|l| self.base.degree(l) + 1).sum(),
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        let mut out = vec![Label::Wreath(vec![self.base.unit()])];
        out.extend(self.base.generators().into_iter().map(|g| Label::Wreath(vec![g])));
        out
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        let letters: Vec<(usize, Label)> = self
            .base
            .enumerate(bound.saturating_sub(1))
            .into_iter()
            .map(|l| (self.base.degree(&l) + 1, l))
            .collect();
        let mut out = Vec::new();
        self.extend_words(&mut Vec::new(), 0, bound, &letters, &mut out);
        out.sort_by_cached_key(|l| (self.degree(l), l.clone()));
        out
    }

    fn format(&self, a: &Label) -> String {
        match a {
            Label::Wreath(w) if w.is_empty() => "1".into(),
            Label::Wreath(w) => {
                let s: Vec<String> = w.iter().map(|l| self.base.format(l)).collect();
                format!("({})", s.join("|"))
            }
            other => other.to_string(),
        }
    }

    fn parse(&self, s: &str) -> Result<Label> {
        let t = s.trim();
        if t == "1" || t.is_empty() {
            return Ok(self.unit());
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected (x|y|...), got {t:?}") })?;
        let mut w = Vec::new();
        for part in inner.split('|') {
            w.push(if is_unit_token(part) { self.base.unit() } else { self.base.parse(part)? });
        }
        Ok(Label::Wreath(w))
    }

    fn is_finite(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{tensor_combo, verify_based_ring_axioms};
    use crate::rings::{CyclicRing, FreeGroupRing};

    fn z2() -> WreathRing {
        WreathRing::new(Arc::new(CyclicRing::new(2).unwrap()))
    }

    fn fuse(r: &WreathRing, a: &str, b: &str) -> String {
        format_combo(r, &r.tensor(&r.parse(a).unwrap(), &r.parse(b).unwrap()).unwrap())
    }

    #[test]
    fn wreath_fusion() {
        let r = z2();
        assert_eq!(fuse(&r, "(s)", "(s)"), "(s|s) + (1) + 1");
        assert_eq!(fuse(&r, "(1)", "(s)"), "(1|s) + (s)");
        let f1 = WreathRing::new(Arc::new(FreeGroupRing::new(1).unwrap()));
        assert_eq!(fuse(&f1, "(a)", "(a^-1)"), "(a|a^-1) + (1) + 1");
        assert_eq!(fuse(&f1, "(a)", "(a)"), "(a|a) + (a^2)");
    }

    #[test]
    fn lambda_cases() {
        let r = z2();
        let amb = r.ambient();
        let show = |w: &str| amb.format(&r.lambda(&r.parse(w).unwrap()).unwrap());
        assert_eq!(show("(1|1)"), "u4");
        assert_eq!(show("(s|s)"), "u1 s u2 s u1");
        assert_eq!(show("(1|s)"), "u3 s u1");
        assert_eq!(show("(s|1|s|1)"), "u1 s u4 s u3");
        assert_eq!(show("1"), "1");
    }

    #[test]
    fn lambda_is_a_homomorphism() {
        for base in [
            Arc::new(CyclicRing::new(2).unwrap()) as RingRef,
            Arc::new(CyclicRing::new(3).unwrap()),
            Arc::new(FreeGroupRing::new(1).unwrap()),
            Arc::new(ChebyshevRing::oplus(3).unwrap()),
        ] {
            let r = WreathRing::new(base);
            let labels = r.enumerate(4);
            for a in &labels {
                for b in &labels {
                    let lhs = r.lambda_combo(&r.tensor(a, b).unwrap()).unwrap();
                    let rhs = tensor_combo(
                        r.ambient().as_ref(),
                        &ZCombo::single(r.lambda(a).unwrap()),
                        &ZCombo::single(r.lambda(b).unwrap()),
                    )
                    .unwrap();
                    assert_eq!(lhs, rhs, "{} ⊗ {}", r.format(a), r.format(b));
                }
            }
        }
    }

    #[test]
    fn trivial_base_is_so3() {
        let r = WreathRing::new(Arc::new(CyclicRing::new(1).unwrap()));
        let so3 = ChebyshevRing::suq2();
        let word = |n: usize| Label::Wreath(vec![Label::Residue(0); n]);
        for a in 0..5 {
            for b in 0..5 {
                let lhs = r.tensor(&word(a), &word(b)).unwrap();
                let rhs = so3
                    .tensor(&Label::Spin(2 * a as u32), &Label::Spin(2 * b as u32))
                    .unwrap()
                    .map_labels(|l| match l {
                        Label::Spin(k) => word(*k as usize / 2),
                        _ => unreachable!(),
                    });
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn axioms() {
        assert!(verify_based_ring_axioms(&z2(), 5).unwrap().passed);
        assert!(z2().check_lambda(4).unwrap().passed);
        assert_eq!(z2().dim(&z2().parse("(s)").unwrap()).unwrap(), BigInt::from(4));
    }
}
