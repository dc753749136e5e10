use num_bigint::BigInt;
use num_traits::One;

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::FusionRing;

use super::is_unit_token;

/// Group ring of the free group `F_n`. Letters are `±1..=±n`; labels are reduced words.
#[derive(Debug, Clone)]
pub struct FreeGroupRing {
    rank: u32,
    circle: bool,
}

const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxy";

impl FreeGroupRing {
    pub fn new(rank: u32) -> Result<Self> {
        if rank == 0 || rank as usize > LETTERS.len() {
            return Err(Error::Construction(format!("F({rank}) needs 1 <= n <= {}", LETTERS.len())));
        }
        Ok(Self { rank, circle: false })
    }

    /// The circle group `S^1`, i.e. `F_1` with generator written `z`.
    pub fn circle() -> Self {
        Self { rank: 1, circle: true }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letter(&self, l: i32) -> Label {
        Label::Group(vec![l])
    }

    fn word<'a>(&self, a: &'a Label) -> Result<&'a [i32]> {
        match a {
            Label::Group(w) if self.valid(w) => Ok(w),
            _ => domain(format!("{a} is not a label of {}", self.name())),
        }
    }

    fn valid(&self, w: &[i32]) -> bool {
        w.iter().all(|&x| x != 0 && x.unsigned_abs() <= self.rank)
            && w.windows(2).all(|p| p[0] != -p[1])
    }

    fn symbol(&self, x: i32) -> char {
        if self.circle {
            'z'
        } else {
            LETTERS[x.unsigned_abs() as usize - 1] as char
        }
    }

    fn index_of(&self, c: char) -> Option<i32> {
        if self.circle {
            return (c == 'z').then_some(1);
        }
        let i = LETTERS.iter().position(|&b| b as char == c)? as u32 + 1;
        (i <= self.rank).then_some(i as i32)
    }
}

pub(crate) fn reduce_concat(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut out = a.to_vec();
    for &x in b {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

impl FusionRing for FreeGroupRing {
    fn name(&self) -> String {
        if self.circle {
            "S1".into()
        } else {
            format!("F({})", self.rank)
        }
    }

    fn unit(&self) -> Label {
        Label::Group(vec![])
    }

    fn contains(&self, a: &Label) -> bool {
        matches!(a, Label::Group(w) if self.valid(w))
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        let w = self.word(a)?;
        Ok(Label::Group(w.iter().rev().map(|x| -x).collect()))
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        let (x, y) = (self.word(a)?, self.word(b)?);
        Ok(ZCombo::single(Label::Group(reduce_concat(x, y))))
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        self.word(a)?;
        Ok(BigInt::one())
    }

    fn degree(&self, a: &Label) -> usize {
        match a {
            Label::Group(w) => w.len(),
            _ => 0,
        }
    }

    fn generators(&self) -> Vec<Label> {
        (1..=self.rank as i32).map(|i| self.letter(i)).collect()
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        let r = self.rank as i32;
        let letters: Vec<i32> = (1..=r).flat_map(|i| [i, -i]).collect();
        let mut layer: Vec<Vec<i32>> = vec![vec![]];
        let mut out: Vec<Label> = vec![Label::Group(vec![])];
        for _ in 0..bound {
            let mut next = Vec::new();
            for w in &layer {
                for &x in &letters {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
            let mut labels: Vec<Label> = next.iter().cloned().map(Label::Group).collect();
            labels.sort();
            out.extend(labels);
            layer = next;
        }
        out
    }

    fn format(&self, a: &Label) -> String {
        let Label::Group(w) = a else { return a.to_string() };
        if w.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let e = (j - i) as i64 * w[i].signum() as i64;
            let c = self.symbol(w[i]);
            parts.push(if e == 1 { c.to_string() } else { format!("{c}^{e}") });
            i = j;
        }
        parts.join(" ")
    }

    fn parse(&self, s: &str) -> Result<Label> {
        if is_unit_token(s) {
            return Ok(self.unit());
        }
        let chars: Vec<char> = s.chars().collect();
        let mut w: Vec<i32> = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let idx = self.index_of(c).ok_or_else(|| Error::Parse {
                pos: i,
                msg: format!("unexpected {c:?} in element of {}", self.name()),
            })?;
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                let start = i + 1;
                let mut j = start;
                if j < chars.len() && chars[j] == '-' {
                    j += 1;
                }
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let t: String = chars[start..j].iter().collect();
                exp = t
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: format!("bad exponent {t:?}") })?;
                i = j;
            }
            let x = if exp < 0 { -idx } else { idx };
            let run = vec![x; exp.unsigned_abs() as usize];
            w = reduce_concat(&w, &run);
        }
        Ok(Label::Group(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::verify_based_ring_axioms;

    #[test]
    fn conj_and_enumerate() {
        let f2 = FreeGroupRing::new(2).unwrap();
        let w = f2.parse("a b").unwrap();
        assert_eq!(f2.conj(&w).unwrap(), Label::Group(vec![-2, -1]));
        assert_eq!(f2.format(&f2.conj(&w).unwrap()), "b^-1 a^-1");
        let f1 = FreeGroupRing::new(1).unwrap();
        let e: Vec<String> = f1.enumerate(2).iter().map(|l| f1.format(l)).collect();
        assert_eq!(e, ["1", "a^-1", "a", "a^-2", "a^2"]);
        assert_eq!(f2.enumerate(3).len(), 1 + 4 + 12 + 36);
    }

    #[test]
    fn circle() {
        let s1 = FreeGroupRing::circle();
        let z = s1.parse("z").unwrap();
        let zi = s1.parse("z^-1").unwrap();
        assert_eq!(s1.tensor(&z, &zi).unwrap(), ZCombo::single(s1.unit()));
        assert_eq!(s1.conj(&s1.parse("z^3").unwrap()).unwrap(), s1.parse("z^-3").unwrap());
        assert_eq!(s1.dim(&s1.parse("z^7").unwrap()).unwrap(), BigInt::one());
    }

    #[test]
    fn parse_reduces() {
        let f2 = FreeGroupRing::new(2).unwrap();
        assert_eq!(f2.parse("a b b^-1 a").unwrap(), Label::Group(vec![1, 1]));
        assert_eq!(f2.parse("ab^-1a").unwrap(), Label::Group(vec![1, -2, 1]));
        assert!(f2.parse("c").is_err());
        assert!(verify_based_ring_axioms(&f2, 3).unwrap().passed);
    }
}
