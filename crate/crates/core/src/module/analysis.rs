use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{format_module_combo, BasedModule, InducedModule, ModuleRef, RestrictedModule, SubModule};
use crate::combo::ZCombo;
use crate::error::{domain, Result};
use crate::label::Label;
use crate::ring::{format_combo, tensor_combo, FusionRing, ASSOCIATIVITY_TRIPLE_LIMIT};
use crate::rings::WreathRing;

/// `Stab(j) = {i : j ⊂ i ⊗ j}` among ring labels of degree at most `bound`.
pub fn stabilizer(m: &dyn BasedModule, j: &Label, bound: usize) -> Result<Vec<Label>> {
    let mut out = Vec::new();
    for i in m.ring().enumerate(bound) {
        if m.act(&i, j)?.contains(j) {
            out.push(i);
        }
    }
    Ok(out)
}

/// `<j1, j2> = Σ_i λ_{ī, j1}^{j2} i` over ring labels of degree at most `bound`.
pub fn pairing(m: &dyn BasedModule, j1: &Label, j2: &Label, bound: usize) -> Result<ZCombo> {
    let ring = m.ring();
    let mut out = ZCombo::new();
    for i in ring.enumerate(bound) {
        let c = m.act(&ring.conj(&i)?, j1)?.coeff(j2);
        if !c.is_zero() {
            out.add(i, c);
        }
    }
    Ok(out)
}

/// The dimension function `j ↦ dim <j, j0>` attached to a base point `j0`.
pub fn pairing_dimension(m: &dyn BasedModule, j0: &Label, j: &Label, bound: usize) -> Result<BigInt> {
    crate::ring::dim_combo(m.ring().as_ref(), &pairing(m, j, j0, bound)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum StandardVerdict {
    /// `witness` has trivial stabilizer and every label maps it to a distinct basis element.
    Standard { witness: String },
    /// Every element of the window has a non-trivial stabilizer; one pair is reported.
    NonStandard { element: String, stabilizer: String },
    Unknown { reason: String },
}

impl StandardVerdict {
    pub fn is_standard(&self) -> bool {
        matches!(self, StandardVerdict::Standard { .. })
    }
    pub fn is_non_standard(&self) -> bool {
        matches!(self, StandardVerdict::NonStandard { .. })
    }
}

fn first_nontrivial_stabilizer(m: &dyn BasedModule, j: &Label, labels: &[Label]) -> Result<Option<Label>> {
    let unit = m.ring().unit();
    for i in labels {
        if *i != unit && m.act(i, j)?.contains(j) {
            return Ok(Some(i.clone()));
        }
    }
    Ok(None)
}

/// Whether `β ↦ β ⊗ j` sends every enumerated label to a distinct basis element.
fn regular_at(m: &dyn BasedModule, j: &Label, labels: &[Label]) -> Result<Option<String>> {
    let mut images: BTreeSet<Label> = BTreeSet::new();
    let ring = m.ring();
    for b in labels {
        let img = m.act(b, j)?;
        match img.as_basis_element() {
            Some(x) if images.insert(x.clone()) => {}
            Some(_) => return Ok(Some(format!("{} ⊗ {} repeats an image", ring.format(b), m.format(j)))),
            None => {
                return Ok(Some(format!(
                    "{} ⊗ {} = {} is not a basis element",
                    ring.format(b),
                    m.format(j),
                    format_module_combo(m, &img)
                )))
            }
        }
    }
    Ok(None)
}

fn classify(m: &dyn BasedModule, window: &[Label], labels: &[Label]) -> Result<StandardVerdict> {
    let ring = m.ring();
    let mut first = None;
    let mut trouble = None;
    for j in window {
        match first_nontrivial_stabilizer(m, j, labels)? {
            Some(i) => {
                if first.is_none() {
                    first = Some((j.clone(), i));
                }
            }
            None => match regular_at(m, j, labels)? {
                None => return Ok(StandardVerdict::Standard { witness: m.format(j) }),
                Some(why) => {
                    trouble.get_or_insert(why);
                }
            },
        }
    }
    Ok(match (first, trouble) {
        (Some((j, i)), None) => StandardVerdict::NonStandard { element: m.format(&j), stabilizer: ring.format(&i) },
        (None, None) => StandardVerdict::Unknown { reason: "empty window".into() },
        (_, Some(why)) => StandardVerdict::Unknown { reason: why },
    })
}

/// Three-valued standardness test on the window of degree `bound`.
pub fn detect_standard(m: &dyn BasedModule, bound: usize) -> Result<StandardVerdict> {
    classify(m, &m.basis(bound)?, &m.ring().enumerate(bound))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub module: String,
    pub bound: usize,
    pub ring_labels: usize,
    pub basis_size: usize,
    pub triples_checked: usize,
    pub sampled: bool,
    pub dim_checked: bool,
    pub passed: bool,
    pub violation: Option<String>,
}

/// Unit action, non-negativity, Frobenius symmetry `λ_{i,j1}^{j2} = λ_{ī,j2}^{j1}`,
/// associativity against the ring structure constants and, when present, multiplicativity
/// of the dimension function, on ring labels and basis elements of degree at most `bound`.
pub fn check_module_axioms(m: &dyn BasedModule, bound: usize) -> Result<ModuleReport> {
    let ring = m.ring();
    let labels = ring.enumerate(bound);
    let basis = m.basis(bound)?;
    let mut rep = ModuleReport {
        module: m.name(),
        bound,
        ring_labels: labels.len(),
        basis_size: basis.len(),
        ..Default::default()
    };
    rep.violation = module_violation(m, &labels, &basis, &mut rep)?;
    rep.passed = rep.violation.is_none();
    Ok(rep)
}

fn module_violation(m: &dyn BasedModule, labels: &[Label], basis: &[Label], rep: &mut ModuleReport) -> Result<Option<String>> {
    let ring = m.ring();
    let unit = ring.unit();
    let mut cache: HashMap<(Label, Label), ZCombo> = HashMap::new();
    let mut act = |i: &Label, j: &Label| -> Result<ZCombo> {
        if let Some(x) = cache.get(&(i.clone(), j.clone())) {
            return Ok(x.clone());
        }
        let x = m.act(i, j)?;
        cache.insert((i.clone(), j.clone()), x.clone());
        Ok(x)
    };
    for j in basis {
        if act(&unit, j)? != ZCombo::single(j.clone()) {
            return Ok(Some(format!("ε ⊗ {} ≠ {}", m.format(j), m.format(j))));
        }
    }
    for i in labels {
        let ic = ring.conj(i)?;
        for j in basis {
            let img = act(i, j)?;
            if !img.is_nonnegative() {
                return Ok(Some(format!("{} ⊗ {} = {} has a negative coefficient", ring.format(i), m.format(j), format_module_combo(m, &img))));
            }
            for (j2, c) in img.iter() {
                let back = act(&ic, j2)?.coeff(j);
                if &back != c {
                    return Ok(Some(format!(
                        "Frobenius: [{} ⊗ {} : {}] = {c} but [{} ⊗ {} : {}] = {back}",
                        ring.format(i),
                        m.format(j),
                        m.format(j2),
                        ring.format(&ic),
                        m.format(j2),
                        m.format(j)
                    )));
                }
            }
            if let Some(dj) = m.dim(j) {
                rep.dim_checked = true;
                let mut total = BigInt::zero();
                for (j2, c) in img.iter() {
                    match m.dim(j2) {
                        Some(d) => total += c * d?,
                        None => return Ok(Some(format!("no dimension for {}", m.format(j2)))),
                    }
                }
                let expected = ring.dim(i)? * dj?;
                if total != expected {
                    return Ok(Some(format!("dim({} ⊗ {}) = {total} ≠ {expected}", ring.format(i), m.format(j))));
                }
            }
        }
    }
    let total = labels.len() * labels.len() * basis.len();
    let triples: Vec<(usize, usize, usize)> = if total <= ASSOCIATIVITY_TRIPLE_LIMIT {
        let mut v = Vec::with_capacity(total);
        for a in 0..labels.len() {
            for b in 0..labels.len() {
                for c in 0..basis.len() {
                    v.push((a, b, c));
                }
            }
        }
        v
    } else {
        rep.sampled = true;
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f64);
        (0..ASSOCIATIVITY_TRIPLE_LIMIT)
            .map(|_| (rng.gen_range(0..labels.len()), rng.gen_range(0..labels.len()), rng.gen_range(0..basis.len())))
            .collect()
    };
    for (a, b, c) in triples {
        let (i, k, j) = (&labels[a], &labels[b], &basis[c]);
        let inner = act(k, j)?;
        let mut lhs = ZCombo::new();
        for (x, v) in inner.iter() {
            lhs.add_scaled(&act(i, x)?, v);
        }
        let mut rhs = ZCombo::new();
        for (l, v) in ring.tensor(i, k)?.iter() {
            rhs.add_scaled(&act(l, j)?, v);
        }
        rep.triples_checked += 1;
        if lhs != rhs {
            return Ok(Some(format!(
                "associativity at ({}, {}, {}): {} ≠ {}",
                ring.format(i),
                ring.format(k),
                m.format(j),
                format_module_combo(m, &lhs),
                format_module_combo(m, &rhs)
            )));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingReport {
    pub module: String,
    pub bound: usize,
    pub checked: usize,
    pub passed: bool,
    pub violation: Option<String>,
}

/// Checks `<i ⊗ j1, j2> = i ⊗ <j1, j2>` and that `ε` occurs once in `<j, j>`, comparing
/// coefficients of degree at most `bound - deg(i)` so that truncation cannot interfere.
pub fn check_pairing_equivariance(m: &dyn BasedModule, bound: usize, max_elements: usize) -> Result<PairingReport> {
    let ring = m.ring();
    let basis: Vec<Label> = m.basis(bound)?.into_iter().take(max_elements).collect();
    let labels = ring.enumerate(bound);
    let mut rep = PairingReport { module: m.name(), bound, ..Default::default() };
    let mut pcache: HashMap<(Label, Label), ZCombo> = HashMap::new();
    let mut pair = |a: &Label, b: &Label| -> Result<ZCombo> {
        if let Some(x) = pcache.get(&(a.clone(), b.clone())) {
            return Ok(x.clone());
        }
        let x = pairing(m, a, b, bound)?;
        pcache.insert((a.clone(), b.clone()), x.clone());
        Ok(x)
    };
    for j in &basis {
        let c = pair(j, j)?.coeff(&ring.unit());
        if c != BigInt::from(1) {
            rep.violation = Some(format!("ε occurs {c} times in <{0}, {0}>", m.format(j)));
            return Ok(rep);
        }
    }
    for i in labels.iter().filter(|i| 2 * ring.degree(i) <= bound) {
        let keep = bound - ring.degree(i);
        for j1 in &basis {
            let img = m.act(i, j1)?;
            for j2 in &basis {
                let mut lhs = ZCombo::new();
                for (x, v) in img.iter() {
                    lhs.add_scaled(&pair(x, j2)?, v);
                }
                let mut rhs = tensor_combo(ring.as_ref(), &ZCombo::single(i.clone()), &pair(j1, j2)?)?;
                lhs.retain(|l| ring.degree(l) <= keep);
                rhs.retain(|l| ring.degree(l) <= keep);
                rep.checked += 1;
                if lhs != rhs {
                    rep.violation = Some(format!(
                        "<{} ⊗ {}, {}> = {} but {} ⊗ <{}, {}> = {}",
                        ring.format(i),
                        m.format(j1),
                        m.format(j2),
                        format_combo(ring.as_ref(), &lhs),
                        ring.format(i),
                        m.format(j1),
                        m.format(j2),
                        format_combo(ring.as_ref(), &rhs)
                    ));
                    return Ok(rep);
                }
            }
        }
    }
    rep.passed = true;
    Ok(rep)
}

fn closed_generators(m: &dyn BasedModule) -> Result<Vec<Label>> {
    let ring = m.ring();
    let mut gens = Vec::new();
    for g in ring.generators() {
        let c = ring.conj(&g)?;
        for x in [g, c] {
            if !gens.contains(&x) {
                gens.push(x);
            }
        }
    }
    Ok(gens)
}

/// Connected components of `window` under the action of the ring generators and their
/// conjugates, keeping only edges inside the window.
pub fn components(m: &dyn BasedModule, window: &[Label]) -> Result<Vec<Vec<Label>>> {
    let gens = closed_generators(m)?;
    let index: HashMap<&Label, usize> = window.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..window.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, j) in window.iter().enumerate() {
        for g in &gens {
            for (x, _) in m.act(g, j)?.iter() {
                if let Some(&b) = index.get(x) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for (a, j) in window.iter().enumerate() {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(j.clone());
    }
    Ok(groups.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub elements: Vec<String>,
    pub verdict: StandardVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub module: String,
    pub factor: String,
    pub bound: usize,
    pub components: Vec<Component>,
    pub standard: usize,
    pub non_standard: usize,
    pub unknown: usize,
    /// Index of the component holding the empty-word elements `∅ j`.
    pub inner_component: Option<usize>,
    /// The empty-word component is exactly the window of the induced module `N`.
    pub recovers_inner: bool,
}

/// Splits the window of an induced module into orbits of one free-product factor and
/// classifies each orbit.
pub fn decompose_restriction(ind: &Arc<InducedModule>, side: u8, bound: usize) -> Result<DecompositionReport> {
    let fp = ind.free_product().clone();
    let inner_ref: ModuleRef = ind.clone();
    let res = RestrictedModule::to_factor(fp.clone(), side, inner_ref);
    let window = ind.basis(bound)?;
    let labels = fp.factor(side).enumerate(bound);
    let comps = components(&res, &window)?;
    let empty = Label::Alt(vec![]);
    let inner_set: BTreeSet<Label> =
        ind.inner().basis(bound)?.into_iter().map(|j| Label::pair(empty.clone(), j)).collect();
    let mut rep = DecompositionReport {
        module: ind.name(),
        factor: fp.factor(side).name(),
        bound,
        components: Vec::new(),
        standard: 0,
        non_standard: 0,
        unknown: 0,
        inner_component: None,
        recovers_inner: false,
    };
    for (k, c) in comps.iter().enumerate() {
        let verdict = classify(&res, c, &labels)?;
        match &verdict {
            StandardVerdict::Standard { .. } => rep.standard += 1,
            StandardVerdict::NonStandard { .. } => rep.non_standard += 1,
            StandardVerdict::Unknown { .. } => rep.unknown += 1,
        }
        if c.iter().any(|x| inner_set.contains(x)) {
            let set: BTreeSet<Label> = c.iter().cloned().collect();
            rep.recovers_inner = rep.inner_component.is_none() && side == ind.side() && set == inner_set;
            rep.inner_component = Some(k);
        }
        rep.components.push(Component { elements: c.iter().map(|x| ind.format(x)).collect(), verdict });
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathScan {
    pub input: String,
    pub ring: String,
    pub bound: usize,
    /// The generators `u^1 j`, one per basis element `j` of `N`.
    pub seeds: Vec<String>,
    pub submodule_window: Vec<String>,
    /// All `u^1 j` generate the same submodule.
    pub independent: bool,
    /// `u^2`, the image of the one-letter unit word, stabilizes every `u^1 j`.
    pub u2_stabilizes: bool,
    pub verdict: StandardVerdict,
    pub other_orbits: usize,
    pub other_standard: usize,
    pub other_unknown: usize,
    pub non_standard_submodules: usize,
    pub passed: bool,
}

/// Induces `N` to `G * SU_q(2)`, restricts along the wreath embedding and isolates the
/// submodule generated by `u^1 j`, checking on the window of degree `bound` that it does
/// not depend on `j`, that `u^2` stabilizes its generators and that every other orbit is
/// standard.
pub fn wreath_submodule_scan(n: ModuleRef, bound: usize) -> Result<(Arc<SubModule>, WreathScan)> {
    let g = n.ring();
    let wreath = Arc::new(WreathRing::new(g.clone()));
    let ind: ModuleRef = Arc::new(InducedModule::new(wreath.ambient().clone(), 0, n.clone())?);
    let res: ModuleRef = Arc::new(RestrictedModule::along_lambda(wreath.clone(), ind.clone()));
    let n_window = n.basis(bound.saturating_sub(1))?;
    if n_window.is_empty() {
        return domain("the window of N is empty");
    }
    let u1 = Label::Alt(vec![(1, Label::Spin(1))]);
    let seeds: Vec<Label> = n_window.iter().map(|j| Label::pair(u1.clone(), j.clone())).collect();
    let sub = Arc::new(SubModule::new(res.clone(), vec![seeds[0].clone()])?);
    let window = sub.basis(bound)?;
    let mut independent = true;
    for s in &seeds[1..] {
        let other = SubModule::new(res.clone(), vec![s.clone()])?;
        if !sub.contains(s) || !other.contains(&seeds[0]) {
            independent = false;
        }
    }
    let u2 = Label::Wreath(vec![g.unit()]);
    let mut u2_stabilizes = true;
    for s in &seeds {
        if !res.act(&u2, s)?.contains(s) {
            u2_stabilizes = false;
        }
    }
    let labels = wreath.enumerate(bound);
    let verdict = classify(sub.as_ref(), &window, &labels)?;
    let in_sub: BTreeSet<&Label> = window.iter().collect();
    let rest: Vec<Label> = res.basis(bound)?.into_iter().filter(|x| !in_sub.contains(x)).collect();
    let comps = components(res.as_ref(), &rest)?;
    let (mut other_standard, mut other_unknown, mut other_ns) = (0, 0, 0);
    for c in &comps {
        match classify(res.as_ref(), c, &labels)? {
            StandardVerdict::Standard { .. } => other_standard += 1,
            StandardVerdict::NonStandard { .. } => other_ns += 1,
            StandardVerdict::Unknown { .. } => other_unknown += 1,
        }
    }
    let non_standard_submodules = usize::from(verdict.is_non_standard()) + other_ns;
    let scan = WreathScan {
        input: n.name(),
        ring: wreath.name(),
        bound,
        seeds: seeds.iter().map(|s| res.format(s)).collect(),
        submodule_window: window.iter().map(|s| res.format(s)).collect(),
        independent,
        u2_stabilizes,
        passed: independent && u2_stabilizes && non_standard_submodules == 1 && other_unknown == 0,
        verdict,
        other_orbits: comps.len(),
        other_standard,
        other_unknown,
        non_standard_submodules,
    };
    Ok((sub, scan))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    /// A bijection of the windows commuting with every enumerated ring label.
    Yes { pairs: Vec<(String, String)> },
    No { reason: String },
    Unknown { reason: String },
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes { .. })
    }
}

const ISO_SEARCH_BUDGET: usize = 20_000;

struct IsoSearch<'a> {
    m1: &'a dyn BasedModule,
    m2: &'a dyn BasedModule,
    w1: Vec<Label>,
    w2: BTreeSet<Label>,
    labels: Vec<Label>,
    act1: HashMap<(usize, Label), ZCombo>,
    act2: HashMap<(usize, Label), ZCombo>,
    stab1: HashMap<Label, Vec<usize>>,
    stab2: HashMap<Label, Vec<usize>>,
    budget: usize,
}

impl IsoSearch<'_> {
    fn act(&mut self, side: u8, g: usize, j: &Label) -> Result<ZCombo> {
        let (m, cache) = if side == 1 { (self.m1, &mut self.act1) } else { (self.m2, &mut self.act2) };
        if let Some(x) = cache.get(&(g, j.clone())) {
            return Ok(x.clone());
        }
        let x = m.act(&self.labels[g], j)?;
        cache.insert((g, j.clone()), x.clone());
        Ok(x)
    }

    fn stab(&mut self, side: u8, j: &Label) -> Result<Vec<usize>> {
        if let Some(s) = (if side == 1 { &self.stab1 } else { &self.stab2 }).get(j) {
            return Ok(s.clone());
        }
        let mut s = Vec::new();
        for g in 0..self.labels.len() {
            if self.act(side, g, j)?.contains(j) {
                s.push(g);
            }
        }
        if side == 1 { &mut self.stab1 } else { &mut self.stab2 }.insert(j.clone(), s.clone());
        Ok(s)
    }

    /// Extends `phi` by forced assignments; `Ok(None)` on contradiction, otherwise the first
    /// ambiguous `(x, candidates)` if one remains.
    #[allow(clippy::type_complexity)]
    fn propagate(&mut self, phi: &mut BTreeMap<Label, Label>, queue: &mut VecDeque<Label>) -> Result<Option<Option<(Label, Vec<Label>)>>> {
        let mut ambiguous = None;
        while let Some(a) = queue.pop_front() {
            let b = phi[&a].clone();
            for g in 0..self.labels.len() {
                let x = self.act(1, g, &a)?;
                let y = self.act(2, g, &b)?;
                let mut cx: Vec<&BigInt> = x.iter().map(|(_, c)| c).collect();
                let mut cy: Vec<&BigInt> = y.iter().map(|(_, c)| c).collect();
                cx.sort();
                cy.sort();
                if cx != cy {
                    return Ok(None);
                }
                let used: BTreeSet<Label> = phi.values().cloned().collect();
                let mut pending: Vec<(&Label, &BigInt)> = Vec::new();
                for (l, c) in x.iter() {
                    match phi.get(l) {
                        Some(t) if &y.coeff(t) != c => return Ok(None),
                        Some(_) => {}
                        None if self.w1.contains(l) => pending.push((l, c)),
                        None => {}
                    }
                }
                for (l, c) in pending {
                    let mut cands = Vec::new();
                    for (t, d) in y.iter() {
                        if d == c && !used.contains(t) && self.w2.contains(t) && self.stab(1, l)? == self.stab(2, t)? {
                            cands.push(t.clone());
                        }
                    }
                    match cands.len() {
                        0 => return Ok(None),
                        1 => {
                            let t = cands.pop().unwrap();
                            if phi.values().any(|v| *v == t) {
                                return Ok(None);
                            }
                            phi.insert(l.clone(), t);
                            queue.push_back(l.clone());
                        }
                        _ => {
                            if ambiguous.is_none() {
                                ambiguous = Some((l.clone(), cands));
                            }
                        }
                    }
                }
            }
        }
        Ok(Some(ambiguous))
    }

    fn verify(&mut self, phi: &BTreeMap<Label, Label>) -> Result<bool> {
        for a in self.w1.clone() {
            let b = phi[&a].clone();
            for g in 0..self.labels.len() {
                let x = self.act(1, g, &a)?;
                let y = self.act(2, g, &b)?;
                for (l, c) in x.iter() {
                    if let Some(t) = phi.get(l) {
                        if &y.coeff(t) != c {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    fn search(&mut self, phi: BTreeMap<Label, Label>, queue: VecDeque<Label>) -> Result<Option<BTreeMap<Label, Label>>> {
        if self.budget == 0 {
            return Ok(None);
        }
        self.budget -= 1;
        let (mut phi, mut queue) = (phi, queue);
        let Some(ambiguous) = self.propagate(&mut phi, &mut queue)? else {
            return Ok(None);
        };
        let (x, cands) = match ambiguous.filter(|(x, _)| !phi.contains_key(x)) {
            Some(p) => p,
            None => {
                let Some(x) = self.w1.iter().find(|l| !phi.contains_key(*l)).cloned() else {
                    return Ok(if self.verify(&phi)? { Some(phi) } else { None });
                };
                let used: BTreeSet<Label> = phi.values().cloned().collect();
                let sx = self.stab(1, &x)?;
                let mut cands = Vec::new();
                for t in self.w2.clone() {
                    if !used.contains(&t) && self.stab(2, &t)? == sx {
                        cands.push(t);
                    }
                }
                (x, cands)
            }
        };
        for t in cands {
            if phi.values().any(|v| *v == t) {
                continue;
            }
            let mut next = phi.clone();
            next.insert(x.clone(), t);
            let mut q = queue.clone();
            q.push_back(x.clone());
            if let Some(found) = self.search(next, q)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Searches for a bijection between the basis windows of degree `basis_bound` commuting
/// with the action of every ring label of degree at most `degree_bound`.
///
/// `No` is only returned for finite modules, where the windows are the whole bases and
/// the search is exhaustive.
pub fn module_isomorphic(m1: &dyn BasedModule, m2: &dyn BasedModule, degree_bound: usize, basis_bound: usize) -> Result<IsoVerdict> {
    let (r1, r2) = (m1.ring(), m2.ring());
    if r1.name() != r2.name() {
        return domain(format!("{} and {} are modules over different rings", m1.name(), m2.name()));
    }
    let finite = m1.is_finite() && m2.is_finite();
    let labels = if finite && r1.is_finite() { r1.enumerate(usize::MAX) } else { r1.enumerate(degree_bound) };
    let w1 = m1.basis(basis_bound)?;
    let w2v = m2.basis(basis_bound)?;
    if w1.len() != w2v.len() {
        let reason = format!("window sizes differ: {} vs {}", w1.len(), w2v.len());
        return Ok(if finite { IsoVerdict::No { reason } } else { IsoVerdict::Unknown { reason } });
    }
    if w1.is_empty() {
        return Ok(IsoVerdict::Yes { pairs: vec![] });
    }
    let mut s = IsoSearch {
        m1,
        m2,
        w2: w2v.iter().cloned().collect(),
        w1,
        labels,
        act1: HashMap::new(),
        act2: HashMap::new(),
        stab1: HashMap::new(),
        stab2: HashMap::new(),
        budget: ISO_SEARCH_BUDGET,
    };
    let mut st1: Vec<Vec<usize>> = Vec::new();
    let mut st2: Vec<Vec<usize>> = Vec::new();
    for j in s.w1.clone() {
        st1.push(s.stab(1, &j)?);
    }
    for j in w2v.iter() {
        st2.push(s.stab(2, j)?);
    }
    st1.sort();
    st2.sort();
    if st1 != st2 {
        let reason = "stabilizer multisets differ".to_string();
        return Ok(if finite { IsoVerdict::No { reason } } else { IsoVerdict::Unknown { reason } });
    }
    let found = s.search(BTreeMap::new(), VecDeque::new())?;
    Ok(match found {
        Some(phi) => IsoVerdict::Yes {
            pairs: s.w1.iter().map(|a| (m1.format(a), m2.format(&phi[a]))).collect(),
        },
        None if s.budget == 0 => IsoVerdict::Unknown { reason: "search budget exhausted".into() },
        None if finite => IsoVerdict::No { reason: "no bijection commutes with the action".into() },
        None => IsoVerdict::Unknown { reason: "no bijection of the windows commutes with the action".into() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{spin_module, FiniteModule, StandardModule, TrivialModule};
    use crate::ring::RingRef;
    use crate::rings::{ChebyshevRing, CyclicRing, FreeGroupRing, FreeProductRing};

    fn z(n: u32) -> RingRef {
        Arc::new(CyclicRing::new(n).unwrap())
    }

    fn su2() -> RingRef {
        Arc::new(ChebyshevRing::suq2())
    }

    fn show(m: &dyn BasedModule, x: &ZCombo) -> String {
        format_module_combo(m, x)
    }

    #[test]
    fn standard_and_trivial_actions() {
        let r = z(2);
        let s = r.parse("s").unwrap();
        let std = StandardModule::new(r.clone());
        assert_eq!(show(&std, &std.act(&s, &r.unit()).unwrap()), "s");
        assert_eq!(stabilizer(&std, &r.unit(), 3).unwrap(), vec![r.unit()]);
        assert_eq!(format_combo(r.as_ref(), &pairing(&std, &r.unit(), &r.unit(), 3).unwrap()), "1");
        assert_eq!(format_combo(r.as_ref(), &pairing(&std, &s, &r.unit(), 3).unwrap()), "s");
        assert!(detect_standard(&std, 3).unwrap().is_standard());

        let triv = TrivialModule::new(r.clone());
        let j0 = triv.basis(0).unwrap()[0].clone();
        assert_eq!(triv.act(&s, &j0).unwrap(), ZCombo::single(j0.clone()));
        assert_eq!(stabilizer(&triv, &j0, 1).unwrap().len(), 2);
        assert_eq!(format_combo(r.as_ref(), &pairing(&triv, &j0, &j0, 1).unwrap()), "s + 1");
        assert_eq!(
            detect_standard(&triv, 1).unwrap(),
            StandardVerdict::NonStandard { element: triv.format(&j0), stabilizer: "s".into() }
        );

        let su = su2();
        let u1 = su.parse("u1").unwrap();
        let std = StandardModule::new(su.clone());
        assert_eq!(format_module_combo(&std, &std.act(&u1, &u1).unwrap()), "u0 + u2");
    }

    #[test]
    fn two_class_module() {
        let m = FiniteModule::two_class_z4();
        let g = m.ring().parse("g").unwrap();
        assert_eq!(m.act(&g, &Label::Point(0)).unwrap(), ZCombo::single(Label::Point(1)));
        assert!(check_module_axioms(&m, 4).unwrap().passed);
        assert!(detect_standard(&m, 4).unwrap().is_non_standard());
    }

    #[test]
    fn spin_module_and_corruptions() {
        let m = spin_module();
        let u2 = Label::Wreath(vec![Label::Residue(0)]);
        assert_eq!(show(&m, &m.act(&u2, &Label::Point(0)).unwrap()), "j0 + j1");
        let rep = check_module_axioms(&m, 4).unwrap();
        assert!(rep.passed && rep.dim_checked, "{rep:?}");
        assert!(check_pairing_equivariance(&m, 6, 5).unwrap().passed);

        let flat = m.overriding(u2.clone(), Arc::new(|_: &Label, j: &Label| Ok(ZCombo::single(j.clone()))), "flat");
        assert!(!check_module_axioms(&flat, 4).unwrap().passed);
        let doubled = m.overriding(
            u2,
            Arc::new(|_: &Label, j: &Label| {
                let mut c = ZCombo::new();
                c.add_i(j.clone(), 2);
                Ok(c)
            }),
            "doubled",
        );
        assert!(!check_module_axioms(&doubled, 4).unwrap().passed);
    }

    fn induced_trivial(side: u8) -> Arc<InducedModule> {
        let fp = Arc::new(FreeProductRing::new(z(2), su2()));
        let inner: ModuleRef = Arc::new(TrivialModule::new(fp.factor(side).clone()));
        Arc::new(InducedModule::new(fp, side, inner).unwrap())
    }

    #[test]
    fn induced_module_axioms() {
        let m = induced_trivial(0);
        assert!(check_module_axioms(m.as_ref(), 4).unwrap().passed);
        assert!(check_pairing_equivariance(m.as_ref(), 4, 8).unwrap().passed);
        let fp = m.free_product().clone();
        let x = fp.parse("u1").unwrap();
        let j = m.basis(0).unwrap()[0].clone();
        assert_eq!(show(m.as_ref(), &m.act(&x, &j).unwrap()), "u1 j0");
        let s = fp.parse("s").unwrap();
        assert_eq!(m.act(&s, &j).unwrap(), ZCombo::single(j));
    }

    #[test]
    fn decomposition() {
        let m = induced_trivial(0);
        let rep = decompose_restriction(&m, 0, 3).unwrap();
        assert_eq!(rep.non_standard, 1);
        assert_eq!(rep.unknown, 0);
        assert!(rep.recovers_inner);
        assert_eq!(rep.components[rep.inner_component.unwrap()].elements, vec!["j0".to_string()]);

        let rep = decompose_restriction(&m, 1, 3).unwrap();
        assert_eq!((rep.non_standard, rep.unknown), (0, 0));
        assert!(rep.standard > 0);

        let fp = m.free_product().clone();
        let std = Arc::new(InducedModule::new(fp, 0, Arc::new(StandardModule::new(z(2)))).unwrap());
        let rep = decompose_restriction(&std, 0, 3).unwrap();
        assert_eq!((rep.non_standard, rep.unknown), (0, 0));
    }

    #[test]
    fn wreath_scans() {
        for n in [
            Arc::new(TrivialModule::new(z(2))) as ModuleRef,
            Arc::new(StandardModule::new(z(2))),
            Arc::new(TrivialModule::new(Arc::new(FreeGroupRing::new(1).unwrap()))),
        ] {
            let name = n.name();
            let (sub, scan) = wreath_submodule_scan(n, 4).unwrap();
            assert!(scan.passed, "{name}: {scan:?}");
            assert!(scan.verdict.is_non_standard());
            assert!(check_module_axioms(sub.as_ref(), 4).unwrap().passed, "{name}");
        }
    }

    #[test]
    fn isomorphism_verdicts() {
        let r = z(2);
        let triv = TrivialModule::new(r.clone());
        let std = StandardModule::new(r.clone());
        assert!(module_isomorphic(&std, &std, 2, 2).unwrap().is_yes());
        assert!(matches!(module_isomorphic(&triv, &std, 2, 2).unwrap(), IsoVerdict::No { .. }));
        let swap = FiniteModule::swap();
        let std2 = StandardModule::new(swap.ring());
        assert!(module_isomorphic(&swap, &std2, 2, 2).unwrap().is_yes());
        let m = spin_module();
        assert!(module_isomorphic(&m, &m, 3, 3).unwrap().is_yes());
    }
}
