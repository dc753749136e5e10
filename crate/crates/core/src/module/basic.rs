use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::BasedModule;
use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::linalg::IntegerMatrix;
use crate::ring::RingRef;
use crate::rings::{CyclicRing, WreathRing};

/// The ring acting on itself.
#[derive(Debug, Clone)]
pub struct StandardModule {
    ring: RingRef,
}

impl StandardModule {
    pub fn new(ring: RingRef) -> Self {
        Self { ring }
    }
}

impl BasedModule for StandardModule {
    fn name(&self) -> String {
        format!("standard({})", self.ring.name())
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, bound: usize) -> Result<Vec<Label>> {
        Ok(self.ring.enumerate(bound))
    }
    fn degree(&self, j: &Label) -> usize {
        self.ring.degree(j)
    }
    fn contains(&self, j: &Label) -> bool {
        self.ring.contains(j)
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        self.ring.tensor(i, j)
    }
    fn dim(&self, j: &Label) -> Option<Result<BigInt>> {
        Some(self.ring.dim(j))
    }
    fn format(&self, j: &Label) -> String {
        self.ring.format(j)
    }
    fn is_finite(&self) -> bool {
        self.ring.is_finite()
    }
}

/// `Z j_0` with `i ⊗ j_0 = dim(i) j_0`.
#[derive(Debug, Clone)]
pub struct TrivialModule {
    ring: RingRef,
}

impl TrivialModule {
    pub fn new(ring: RingRef) -> Self {
        Self { ring }
    }
}

impl BasedModule for TrivialModule {
    fn name(&self) -> String {
        format!("trivial({})", self.ring.name())
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, _bound: usize) -> Result<Vec<Label>> {
        Ok(vec![Label::Point(0)])
    }
    fn degree(&self, _j: &Label) -> usize {
        0
    }
    fn contains(&self, j: &Label) -> bool {
        *j == Label::Point(0)
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        if !self.contains(j) {
            return domain(format!("{j} is not a basis element of {}", self.name()));
        }
        let mut out = ZCombo::new();
        out.add(j.clone(), self.ring.dim(i)?);
        Ok(out)
    }
    fn dim(&self, _j: &Label) -> Option<Result<BigInt>> {
        Some(Ok(BigInt::from(1)))
    }
    fn is_finite(&self) -> bool {
        true
    }
}

/// A finite-rank module over a finite ring, given by one matrix per ring label
/// (column `j` is `i ⊗ j_j`).
#[derive(Clone)]
pub struct FiniteModule {
    ring: RingRef,
    name: String,
    names: Vec<String>,
    matrices: BTreeMap<Label, IntegerMatrix>,
}

impl fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteModule({}, rank {})", self.name, self.names.len())
    }
}

impl FiniteModule {
    pub fn new(ring: RingRef, name: impl Into<String>, matrices: BTreeMap<Label, IntegerMatrix>) -> Result<Self> {
        if !ring.is_finite() {
            return Err(Error::Construction(format!("{} has infinitely many labels", ring.name())));
        }
        let rank = matrices.values().next().map(|m| m.rows()).unwrap_or(0);
        if rank == 0 {
            return Err(Error::Construction("a based module needs a non-empty basis".into()));
        }
        for l in ring.enumerate(usize::MAX) {
            match matrices.get(&l) {
                Some(m) if m.rows() == rank && m.cols() == rank => {}
                _ => return Err(Error::Construction(format!("missing or malformed matrix for {}", ring.format(&l)))),
            }
        }
        let names = (0..rank).map(|k| format!("j{k}")).collect();
        Ok(Self { ring, name: name.into(), names, matrices })
    }

    /// The module over `Z/k` where the chosen generator `g^t` acts by `m`.
    pub fn cyclic(ring: Arc<CyclicRing>, generator: u32, m: &IntegerMatrix, name: impl Into<String>) -> Result<Self> {
        let k = ring.order();
        if num_integer::gcd(generator, k) != 1 {
            return domain(format!("g^{generator} does not generate Z/{k}"));
        }
        let mut matrices = BTreeMap::new();
        let mut p = IntegerMatrix::identity(m.rows());
        for r in 0..k {
            matrices.insert(Label::Residue((r * generator) % k), p.clone());
            p = p.mul(m);
        }
        if p != IntegerMatrix::identity(m.rows()) {
            return domain(format!("the generator matrix does not have order dividing {k}"));
        }
        Self::new(ring, name, matrices)
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        if names.len() == self.names.len() {
            self.names = names.iter().map(|s| s.to_string()).collect();
        }
        self
    }

    /// `Z/2` acting on `{j+, j-}` by exchanging them.
    pub fn swap() -> Self {
        let ring = Arc::new(CyclicRing::new(2).unwrap());
        let m = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        Self::cyclic(ring, 1, &m, "swap(Z/2)").unwrap().with_names(&["j+", "j-"])
    }

    /// `Z/4` on two points: even elements fix both, odd elements exchange them.
    pub fn two_class_z4() -> Self {
        let ring = Arc::new(CyclicRing::new(4).unwrap());
        let m = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        Self::cyclic(ring, 1, &m, "two-class(Z/4)").unwrap()
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn matrix(&self, i: &Label) -> Option<&IntegerMatrix> {
        self.matrices.get(i)
    }

    fn index(&self, j: &Label) -> Option<usize> {
        match j {
            Label::Point(k) if (*k as usize) < self.rank() => Some(*k as usize),
            _ => None,
        }
    }
}

impl BasedModule for FiniteModule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, _bound: usize) -> Result<Vec<Label>> {
        Ok((0..self.rank() as u32).map(Label::Point).collect())
    }
    fn degree(&self, _j: &Label) -> usize {
        0
    }
    fn contains(&self, j: &Label) -> bool {
        self.index(j).is_some()
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        let Some(c) = self.index(j) else {
            return domain(format!("{j} is not a basis element of {}", self.name));
        };
        let Some(m) = self.matrices.get(i) else {
            return domain(format!("{i} is not a label of {}", self.ring.name()));
        };
        let mut out = ZCombo::new();
        for r in 0..self.rank() {
            if !m[(r, c)].is_zero() {
                out.add(Label::Point(r as u32), m[(r, c)].clone());
            }
        }
        Ok(out)
    }
    fn dim(&self, _j: &Label) -> Option<Result<BigInt>> {
        // every label of a group ring acts by a permutation
        let perm = self.matrices.keys().all(|l| self.ring.dim(l).map(|d| d == BigInt::from(1)).unwrap_or(false));
        perm.then(|| Ok(BigInt::from(1)))
    }
    fn format(&self, j: &Label) -> String {
        self.index(j).map(|k| self.names[k].clone()).unwrap_or_else(|| j.to_string())
    }
    fn is_finite(&self) -> bool {
        true
    }
}

type Rule = dyn Fn(&Label, &Label) -> Result<ZCombo> + Send + Sync;

/// A module on `{j_0, j_1, ...}` whose action is given by a closed-form rule.
#[derive(Clone)]
pub struct ClosedFormModule {
    ring: RingRef,
    name: String,
    rule: Arc<Rule>,
    dim: Option<Arc<dyn Fn(u32) -> BigInt + Send + Sync>>,
}

impl fmt::Debug for ClosedFormModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedFormModule({})", self.name)
    }
}

impl ClosedFormModule {
    pub fn new(ring: RingRef, name: impl Into<String>, rule: Arc<Rule>) -> Self {
        Self { ring, name: name.into(), rule, dim: None }
    }

    pub fn with_dim(mut self, dim: Arc<dyn Fn(u32) -> BigInt + Send + Sync>) -> Self {
        self.dim = Some(dim);
        self
    }

    /// Replaces the action of one ring label; the result usually violates the axioms.
    pub fn overriding(&self, i: Label, rule: Arc<Rule>, name: impl Into<String>) -> Self {
        let base = self.rule.clone();
        let combined: Arc<Rule> = Arc::new(move |x: &Label, j: &Label| if *x == i { rule(x, j) } else { base(x, j) });
        Self { ring: self.ring.clone(), name: name.into(), rule: combined, dim: None }
    }
}

impl BasedModule for ClosedFormModule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, bound: usize) -> Result<Vec<Label>> {
        Ok((0..=bound as u32).map(Label::Point).collect())
    }
    fn degree(&self, j: &Label) -> usize {
        match j {
            Label::Point(k) => *k as usize,
            _ => usize::MAX,
        }
    }
    fn contains(&self, j: &Label) -> bool {
        matches!(j, Label::Point(_))
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        if !self.contains(j) {
            return domain(format!("{j} is not a basis element of {}", self.name));
        }
        if !self.ring.contains(i) {
            return domain(format!("{i} is not a label of {}", self.ring.name()));
        }
        (self.rule)(i, j)
    }
    fn dim(&self, j: &Label) -> Option<Result<BigInt>> {
        let f = self.dim.as_ref()?;
        match j {
            Label::Point(k) => Some(Ok(f(*k))),
            _ => Some(domain(format!("{j} is not a basis element"))),
        }
    }
}

/// The spin module over the `SO_q(3)` ring, realised as the free wreath ring over the
/// trivial group: `j_k` plays the role of `u^{2k+1}`, so
/// `u^{2n} ⊗ j_k = j_{|n-k|'} + ... + j_{n+k}` and in particular `u^2 ⊗ j_k = j_{k-1} + j_k + j_{k+1}`.
pub fn spin_module() -> ClosedFormModule {
    let ring: RingRef = Arc::new(WreathRing::new(Arc::new(CyclicRing::new(1).unwrap())));
    let rule: Arc<Rule> = Arc::new(|i: &Label, j: &Label| {
        let (Label::Wreath(w), Label::Point(k)) = (i, j) else {
            return domain(format!("{i} ⊗ {j} is outside the spin module"));
        };
        let (n, k) = (w.len() as i64, *k as i64);
        // u^{2n} ⊗ u^{2k+1} = Σ_{t} u^{t}, t = |2n-2k-1|, ..., 2n+2k+1 in steps of 2
        let lo = (2 * n - 2 * k - 1).abs();
        let hi = 2 * n + 2 * k + 1;
        let mut out = ZCombo::new();
        let mut t = lo;
        while t <= hi {
            out.add_i(Label::Point(((t - 1) / 2) as u32), 1);
            t += 2;
        }
        Ok(out)
    });
    ClosedFormModule::new(ring, "spin(SOq3)", rule).with_dim(Arc::new(|k| BigInt::from(2 * k + 2)))
}
