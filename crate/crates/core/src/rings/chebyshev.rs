use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::FusionRing;

use super::parse_error;

/// Ring with SU(2)-type fusion `x^a ⊗ x^b = x^{|a-b|} + x^{|a-b|+2} + ... + x^{a+b}`.
///
/// With fundamental dimension 2 this is the representation ring of `SU_q(2)`; with
/// fundamental dimension `n` it is that of `O_n^+`. Dimensions follow
/// `d_{k+1} = n d_k - d_{k-1}`.
#[derive(Debug, Clone)]
pub struct ChebyshevRing {
    symbol: char,
    fundamental_dim: u32,
    name: String,
}

impl ChebyshevRing {
    pub fn suq2() -> Self {
        Self { symbol: 'u', fundamental_dim: 2, name: "SUq2".into() }
    }

    pub fn oplus(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Construction(format!("O+({n}) requires n >= 2")));
        }
        Ok(Self { symbol: 'v', fundamental_dim: n, name: format!("O+({n})") })
    }

    pub fn fundamental_dim(&self) -> u32 {
        self.fundamental_dim
    }

    pub fn symbol(&self) -> char {
        self.symbol
    }

    fn spin(&self, a: &Label) -> Result<u32> {
        match a {
            Label::Spin(k) => Ok(*k),
            _ => domain(format!("{a} is not a label of {}", self.name)),
        }
    }
}

/// `d_k` for `d_0 = 1`, `d_1 = n`, `d_{k+1} = n d_k - d_{k-1}`.
pub(crate) fn chebyshev_dim(n: u32, k: u32) -> BigInt {
    let n = BigInt::from(n);
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    for _ in 0..k {
        let next = &n * &cur - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

impl FusionRing for ChebyshevRing {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn unit(&self) -> Label {
        Label::Spin(0)
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Spin(_))
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        self.spin(a)?;
        Ok(a.clone())
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.spin(a)?, self.spin(b)?);
        let mut out = ZCombo::new();
        let mut k = x.abs_diff(y);
        while k <= x + y {
            out.add(Label::Spin(k), BigInt::one());
            k += 2;
        }
        Ok(out)
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        Ok(chebyshev_dim(self.fundamental_dim, self.spin(a)?))
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Spin(k) => *k as usize,
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        vec![Label::Spin(1)]
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        (0..=bound as u32).map(Label::Spin).collect()
    }

    fn format(&self, a: &Label) -> String {
        match a {
            Label::Spin(k) => format!("{}{k}", self.symbol),
            other => other.to_string(),
        }
    }

    fn parse(&self, s: &str) -> Result<Label> {
        let t = s.trim();
        if t == "1" {
            return Ok(Label::Spin(0));
        }
        let rest = t
            .strip_prefix(self.symbol)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("expected {}<k>, got {t:?}", self.symbol) })?;
        match rest.parse::<u32>() {
            Ok(k) => Ok(Label::Spin(k)),
            Err(_) => parse_error(t, format!("expected {}<k>, got {t:?}", self.symbol)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_based_ring_axioms;

    fn spins(ks: &[u32]) -> ZCombo {
        ks.iter().map(|k| (Label::Spin(*k), BigInt::one())).collect()
    }

    #[test]
    fn clebsch_gordan() {
        let r = ChebyshevRing::suq2();
        assert_eq!(r.tensor(&Label::Spin(1), &Label::Spin(1)).unwrap(), spins(&[0, 2]));
        assert_eq!(r.tensor(&Label::Spin(2), &Label::Spin(1)).unwrap(), spins(&[1, 3]));
        assert_eq!(r.conj(&Label::Spin(3)).unwrap(), Label::Spin(3));
        assert_eq!(r.enumerate(3), (0..4).map(Label::Spin).collect::<Vec<_>>());
    }

    #[test]
    fn dimensions() {
        let su = ChebyshevRing::suq2();
        for k in 0..10 {
            assert_eq!(su.dim(&Label::Spin(k)).unwrap(), BigInt::from(k + 1));
        }
        let o3 = ChebyshevRing::oplus(3).unwrap();
        let d: Vec<BigInt> = (0..5).map(|k| o3.dim(&Label::Spin(k)).unwrap()).collect();
        assert_eq!(d, [1, 3, 8, 21, 55].map(BigInt::from));
        // 3·3 = dim(v0) + dim(v2)
        assert_eq!(o3.tensor(&Label::Spin(1), &Label::Spin(1)).unwrap(), spins(&[0, 2]));
    }

    #[test]
    fn axioms() {
        assert!(verify_based_ring_axioms(&ChebyshevRing::suq2(), 6).unwrap().passed);
        assert!(verify_based_ring_axioms(&ChebyshevRing::oplus(5).unwrap(), 6).unwrap().passed);
        assert!(ChebyshevRing::oplus(1).is_err());
    }

    #[test]
    fn parse_format() {
        let r = ChebyshevRing::oplus(3).unwrap();
        assert_eq!(r.parse("v4").unwrap(), Label::Spin(4));
        assert_eq!(r.format(&Label::Spin(4)), "v4");
        assert!(r.parse("u4").is_err());
        assert!(r.tensor(&Label::Residue(1), &Label::Spin(0)).is_err());
    }
}
