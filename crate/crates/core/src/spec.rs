//! Group specifications: text grammar and ring construction.
//!
//! ```text
//! spec  := term ('*' term)*
//! term  := 'Z/' k | 'F(' n ')' | 'SUq2' | 'O+(' n ')' | 'U+(' m ')' | 'S1'
//!        | 'wreath(' spec ')' | 'tilde(' spec [';' label] ')' | '(' spec ')'
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexification::TildeRing;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::ring::RingRef;
use crate::rings::{ChebyshevRing, CyclicRing, FreeGroupRing, FreeProductRing, UnitaryRing, WreathRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(u32),
    FreeGroup(u32),
    SUq2,
    OPlus(u32),
    UPlus(u32),
    Circle,
    FreeProduct(Box<GroupSpec>, Box<GroupSpec>),
    Wreath(Box<GroupSpec>),
    /// Free complexification with an optional explicit self-conjugate fundamental.
    Tilde(Box<GroupSpec>, Option<String>),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(k) => write!(f, "Z/{k}"),
            GroupSpec::FreeGroup(n) => write!(f, "F({n})"),
            GroupSpec::SUq2 => write!(f, "SUq2"),
            GroupSpec::OPlus(n) => write!(f, "O+({n})"),
            GroupSpec::UPlus(m) => write!(f, "U+({m})"),
            GroupSpec::Circle => write!(f, "S1"),
            GroupSpec::FreeProduct(a, b) => {
                let rhs = match **b {
                    GroupSpec::FreeProduct(..) => format!("({b})"),
                    _ => b.to_string(),
                };
                write!(f, "{a} * {rhs}")
            }
            GroupSpec::Wreath(a) => write!(f, "wreath({a})"),
            GroupSpec::Tilde(a, None) => write!(f, "tilde({a})"),
            GroupSpec::Tilde(a, Some(u)) => write!(f, "tilde({a}; {u})"),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.chars().take_while(|c| c.is_ascii_digit()).count();
        if len == 0 {
            return self.err("expected a number");
        }
        let n = rest[..len].parse::<u32>().or_else(|_| self.err("number out of range"))?;
        self.pos += len;
        Ok(n)
    }

    fn expr(&mut self) -> Result<GroupSpec> {
        let mut lhs = self.term()?;
        while self.eat("*") {
            let rhs = self.term()?;
            lhs = GroupSpec::FreeProduct(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<GroupSpec> {
        self.skip_ws();
        if self.eat("Z/") {
            return Ok(GroupSpec::Cyclic(self.number()?));
        }
        if self.eat("F(") {
            let n = self.number()?;
            self.expect(")")?;
            return Ok(GroupSpec::FreeGroup(n));
        }
        if self.eat("SUq2") {
            return Ok(GroupSpec::SUq2);
        }
        if self.eat("O+(") {
            let n = self.number()?;
            self.expect(")")?;
            return Ok(GroupSpec::OPlus(n));
        }
        if self.eat("U+(") {
            let n = self.number()?;
            self.expect(")")?;
            return Ok(GroupSpec::UPlus(n));
        }
        if self.eat("S1") {
            return Ok(GroupSpec::Circle);
        }
        if self.eat("wreath(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(GroupSpec::Wreath(Box::new(inner)));
        }
        if self.eat("tilde(") {
            let inner = self.expr()?;
            let fundamental = if self.eat(";") {
                self.skip_ws();
                let start = self.pos;
                let mut depth = 0usize;
                for (i, c) in self.src[start..].char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' if depth == 0 => {
                            self.pos = start + i;
                            break;
                        }
                        ')' => depth -= 1,
                        _ => {}
                    }
                }
                if self.pos == start {
                    return self.err("expected a fundamental label");
                }
                Some(self.src[start..self.pos].trim().to_string())
            } else {
                None
            };
            self.expect(")")?;
            return Ok(GroupSpec::Tilde(Box::new(inner), fundamental));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        self.err("expected a group: Z/k, F(n), SUq2, O+(n), U+(m), S1, wreath(..), tilde(..)")
    }
}

pub fn parse_spec(s: &str) -> Result<GroupSpec> {
    let mut p = Parser { src: s, pos: 0 };
    let spec = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return p.err("unexpected trailing input");
    }
    Ok(spec)
}

pub fn construct_ring(spec: &GroupSpec) -> Result<RingRef> {
    Ok(match spec {
        GroupSpec::Cyclic(k) => Arc::new(CyclicRing::new(*k)?),
        GroupSpec::FreeGroup(n) => Arc::new(FreeGroupRing::new(*n)?),
        GroupSpec::SUq2 => Arc::new(ChebyshevRing::suq2()),
        GroupSpec::OPlus(n) => Arc::new(ChebyshevRing::oplus(*n)?),
        GroupSpec::UPlus(m) => Arc::new(UnitaryRing::new(*m)?),
        GroupSpec::Circle => Arc::new(FreeGroupRing::circle()),
        GroupSpec::FreeProduct(a, b) => {
            Arc::new(FreeProductRing::new(construct_ring(a)?, construct_ring(b)?))
        }
        GroupSpec::Wreath(a) => Arc::new(construct_wreath(a)?),
        GroupSpec::Tilde(a, u) => Arc::new(construct_tilde(a, u.as_deref())?),
    })
}

pub fn construct_wreath(base: &GroupSpec) -> Result<WreathRing> {
    Ok(WreathRing::new(construct_ring(base)?))
}

pub fn construct_tilde(base: &GroupSpec, fundamental: Option<&str>) -> Result<TildeRing> {
    let ring = construct_ring(base)?;
    let u = match fundamental {
        Some(text) => ring.parse(text)?,
        None => default_fundamental(base)?,
    };
    TildeRing::new(ring, u)
}

/// The self-conjugate fundamental used by `tilde(..)` when none is given.
pub fn default_fundamental(spec: &GroupSpec) -> Result<Label> {
    match spec {
        GroupSpec::SUq2 | GroupSpec::OPlus(_) => Ok(Label::Spin(1)),
        GroupSpec::Cyclic(2) => Ok(Label::Residue(1)),
        GroupSpec::Wreath(base) => {
            let g = construct_ring(base)?;
            let letter = g
                .generators()
                .into_iter()
                .find(|x| g.conj(x).ok().as_ref() == Some(x))
                .unwrap_or_else(|| g.unit());
            Ok(Label::Wreath(vec![letter]))
        }
        _ => Err(Error::Construction(format!(
            "{spec} has no default self-conjugate fundamental; use tilde({spec}; <label>)"
        ))),
    }
}
