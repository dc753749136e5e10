use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;

use super::{BasedModule, ModuleRef};
use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::ring::{FusionRing, RingRef};
use crate::rings::{FreeProductRing, WreathRing};

/// `Ind(N)` from one factor of a free product: basis `w j` with `w` empty or an
/// alternating word not ending in that factor.
#[derive(Debug, Clone)]
pub struct InducedModule {
    ring: Arc<FreeProductRing>,
    side: u8,
    inner: ModuleRef,
}

impl InducedModule {
    pub fn new(ring: Arc<FreeProductRing>, side: u8, inner: ModuleRef) -> Result<Self> {
        if side > 1 || !Arc::ptr_eq(ring.factor(side), &inner.ring()) && ring.factor(side).name() != inner.ring().name() {
            return Err(Error::Construction(format!(
                "{} is not a module over a factor of {}",
                inner.name(),
                ring.name()
            )));
        }
        if inner.basis(0)?.is_empty() && inner.basis(4)?.is_empty() {
            return Err(Error::Construction("cannot induce the zero module".into()));
        }
        Ok(Self { ring, side, inner })
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.inner
    }

    pub fn side(&self) -> u8 {
        self.side
    }

    pub fn free_product(&self) -> &Arc<FreeProductRing> {
        &self.ring
    }

    /// The basis element `w j`.
    pub fn element(&self, w: Label, j: Label) -> Label {
        Label::pair(w, j)
    }

    fn split<'a>(&self, x: &'a Label) -> Result<(&'a Label, &'a Label)> {
        match x {
            Label::Pair(w, j) if self.is_admissible_word(w) && self.inner.contains(j) => Ok((w, j)),
            _ => domain(format!("{x} is not a basis element of {}", self.name())),
        }
    }

    fn is_admissible_word(&self, w: &Label) -> bool {
        self.ring.contains(w) && w.alt_letters().last().is_none_or(|(s, _)| *s != self.side)
    }
}

impl BasedModule for InducedModule {
    fn name(&self) -> String {
        format!("Ind({} -> {})", self.inner.name(), self.ring.name())
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, bound: usize) -> Result<Vec<Label>> {
        let mut out = Vec::new();
        for w in self.ring.enumerate(bound) {
            if !self.is_admissible_word(&w) {
                continue;
            }
            let d = self.ring.degree(&w);
            for j in self.inner.basis(bound - d)? {
                out.push(Label::pair(w.clone(), j));
            }
        }
        out.sort_by_cached_key(|x| (self.degree(x), x.clone()));
        Ok(out)
    }
    fn degree(&self, x: &Label) -> usize {
        match x {
            Label::Pair(w, j) => self.ring.degree(w) + self.inner.degree(j),
            _ => usize::MAX,
        }
    }
    fn contains(&self, x: &Label) -> bool {
        self.split(x).is_ok()
    }
    fn act(&self, i: &Label, x: &Label) -> Result<ZCombo> {
        let (w, j) = self.split(x)?;
        let mut out = ZCombo::new();
        for (v, m) in self.ring.tensor(i, w)?.iter() {
            let letters = v.alt_letters();
            match letters.split_last() {
                Some(((s, beta), rest)) if *s == self.side => {
                    let prefix = Label::Alt(rest.to_vec());
                    for (j2, c) in self.inner.act(beta, j)?.iter() {
                        out.add(Label::pair(prefix.clone(), j2.clone()), m * c);
                    }
                }
                _ => out.add(Label::pair(v.clone(), j.clone()), m.clone()),
            }
        }
        Ok(out)
    }
    fn dim(&self, x: &Label) -> Option<Result<BigInt>> {
        let (w, j) = match self.split(x) {
            Ok(p) => p,
            Err(e) => return Some(Err(e)),
        };
        let dj = self.inner.dim(j)?;
        Some(dj.and_then(|d| Ok(d * self.ring.dim(w)?)))
    }
    fn format(&self, x: &Label) -> String {
        match x {
            Label::Pair(w, j) if w.alt_letters().is_empty() => self.inner.format(j),
            Label::Pair(w, j) => format!("{} {}", self.ring.format(w), self.inner.format(j)),
            _ => x.to_string(),
        }
    }
}

type LabelMap = dyn Fn(&Label) -> Result<Label> + Send + Sync;

/// Restriction of a module along a based-ring inclusion given on labels.
#[derive(Clone)]
pub struct RestrictedModule {
    ring: RingRef,
    inner: ModuleRef,
    map: Arc<LabelMap>,
    name: String,
}

impl fmt::Debug for RestrictedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RestrictedModule({})", self.name)
    }
}

impl RestrictedModule {
    pub fn new(ring: RingRef, inner: ModuleRef, map: Arc<LabelMap>) -> Self {
        let name = format!("Res_{}({})", ring.name(), inner.name());
        Self { ring, inner, map, name }
    }

    /// Restriction along the embedding of the wreath ring into `R(G) * R(SU_q(2))`.
    pub fn along_lambda(wreath: Arc<WreathRing>, inner: ModuleRef) -> Self {
        let w = wreath.clone();
        Self::new(wreath, inner, Arc::new(move |l: &Label| w.lambda(l)))
    }

    /// Restriction to a subring whose labels are labels of the ambient ring.
    pub fn to_subring(ring: RingRef, inner: ModuleRef) -> Self {
        Self::new(ring, inner, Arc::new(|l: &Label| Ok(l.clone())))
    }

    /// Restriction of a module over `R_1 * R_2` to the factor `R_side`.
    pub fn to_factor(fp: Arc<FreeProductRing>, side: u8, inner: ModuleRef) -> Self {
        let f = fp.clone();
        Self::new(fp.factor(side).clone(), inner, Arc::new(move |l: &Label| Ok(f.embed(side, l.clone()))))
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.inner
    }
}

impl BasedModule for RestrictedModule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ring(&self) -> RingRef {
        self.ring.clone()
    }
    fn basis(&self, bound: usize) -> Result<Vec<Label>> {
        self.inner.basis(bound)
    }
    fn degree(&self, j: &Label) -> usize {
        self.inner.degree(j)
    }
    fn contains(&self, j: &Label) -> bool {
        self.inner.contains(j)
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        if !self.ring.contains(i) {
            return domain(format!("{i} is not a label of {}", self.ring.name()));
        }
        self.inner.act(&(self.map)(i)?, j)
    }
    fn dim(&self, j: &Label) -> Option<Result<BigInt>> {
        self.inner.dim(j)
    }
    fn format(&self, j: &Label) -> String {
        self.inner.format(j)
    }
    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }
}

/// The submodule generated by a set of basis elements.
///
/// Its basis is found by breadth-first search under the ring generators and their
/// conjugates. On infinite modules the search explores elements up to `slack` degrees
/// above the requested window, so the window is exact only when every element of the
/// window is reachable through elements of degree at most `bound + slack`.
pub struct SubModule {
    inner: ModuleRef,
    seeds: Vec<Label>,
    slack: usize,
    name: String,
    cache: Mutex<BTreeMap<usize, Arc<Vec<Label>>>>,
}

impl fmt::Debug for SubModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubModule({})", self.name)
    }
}

pub const DEFAULT_SLACK: usize = 4;

impl SubModule {
    pub fn new(inner: ModuleRef, seeds: Vec<Label>) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Construction("a generated submodule needs at least one seed".into()));
        }
        for s in &seeds {
            if !inner.contains(s) {
                return domain(format!("{s} is not a basis element of {}", inner.name()));
            }
        }
        let names: Vec<String> = seeds.iter().map(|s| inner.format(s)).collect();
        let name = format!("<{}> in {}", names.join(", "), inner.name());
        Ok(Self { inner, seeds, slack: DEFAULT_SLACK, name, cache: Mutex::new(BTreeMap::new()) })
    }

    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack;
        self
    }

    pub fn seeds(&self) -> &[Label] {
        &self.seeds
    }

    pub fn inner(&self) -> &ModuleRef {
        &self.inner
    }

    fn window(&self, bound: usize) -> Result<Arc<Vec<Label>>> {
        if let Some(w) = self.cache.lock().unwrap().get(&bound) {
            return Ok(w.clone());
        }
        let ring = self.inner.ring();
        let mut gens: Vec<Label> = Vec::new();
        for g in ring.generators() {
            let c = ring.conj(&g)?;
            for x in [g, c] {
                if !gens.contains(&x) {
                    gens.push(x);
                }
            }
        }
        let limit = bound.saturating_add(self.slack);
        let mut seen: BTreeSet<Label> = BTreeSet::new();
        let mut queue: VecDeque<Label> = VecDeque::new();
        for s in &self.seeds {
            if self.inner.degree(s) <= limit && seen.insert(s.clone()) {
                queue.push_back(s.clone());
            }
        }
        while let Some(j) = queue.pop_front() {
            for g in &gens {
                for (x, _) in self.inner.act(g, &j)?.iter() {
                    if self.inner.degree(x) <= limit && !seen.contains(x) {
                        seen.insert(x.clone());
                        queue.push_back(x.clone());
                    }
                }
            }
        }
        let mut out: Vec<Label> = seen.into_iter().filter(|x| self.inner.degree(x) <= bound).collect();
        out.sort_by_cached_key(|x| (self.inner.degree(x), x.clone()));
        let out = Arc::new(out);
        self.cache.lock().unwrap().insert(bound, out.clone());
        Ok(out)
    }
}

impl BasedModule for SubModule {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn ring(&self) -> RingRef {
        self.inner.ring()
    }
    fn basis(&self, bound: usize) -> Result<Vec<Label>> {
        Ok(self.window(bound)?.as_ref().clone())
    }
    fn degree(&self, j: &Label) -> usize {
        self.inner.degree(j)
    }
    fn contains(&self, j: &Label) -> bool {
        self.inner.contains(j) && self.window(self.inner.degree(j)).map(|w| w.contains(j)).unwrap_or(false)
    }
    fn act(&self, i: &Label, j: &Label) -> Result<ZCombo> {
        self.inner.act(i, j)
    }
    fn dim(&self, j: &Label) -> Option<Result<BigInt>> {
        self.inner.dim(j)
    }
    fn format(&self, j: &Label) -> String {
        self.inner.format(j)
    }
    fn is_finite(&self) -> bool {
        self.inner.is_finite()
    }
}
