//! Even parts, free complexifications and the even-class analysis of torsion modules.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combo::ZCombo;
use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::module::{
    detect_standard, module_isomorphic, BasedModule, InducedModule, IsoVerdict, ModuleRef, RestrictedModule,
    StandardVerdict, SubModule,
};
use crate::ring::{FusionRing, RingRef};
use crate::rings::{FreeGroupRing, FreeProductRing};

/// The even part of `(G, u)`: labels contained in some `u^{⊗2k}`.
///
/// `u` is an irreducible self-conjugate label, or a reducible `u = u_1 ⊕ ... ⊕ u_r` given
/// by a conjugation-closed list of summands.
#[derive(Debug)]
pub struct EvenPart {
    ring: RingRef,
    u: Vec<Label>,
    cache: Mutex<Option<(usize, Arc<BTreeSet<Label>>)>>,
}

impl EvenPart {
    pub fn new(ring: RingRef, u: Label) -> Result<Self> {
        if !ring.contains(&u) || ring.conj(&u)? != u {
            return domain(format!("{} is not a self-conjugate label of {}", ring.format(&u), ring.name()));
        }
        Ok(Self { ring, u: vec![u], cache: Mutex::new(None) })
    }

    pub fn from_summands(ring: RingRef, summands: Vec<Label>) -> Result<Self> {
        if summands.is_empty() {
            return domain("the fundamental needs at least one summand");
        }
        for l in &summands {
            if !ring.contains(l) || !summands.contains(&ring.conj(l)?) {
                return domain(format!("the summands of u are not closed under conjugation at {}", ring.format(l)));
            }
        }
        Ok(Self { ring, u: summands, cache: Mutex::new(None) })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// The first summand of `u`; the fundamental itself when it is irreducible.
    pub fn fundamental(&self) -> &Label {
        &self.u[0]
    }

    pub fn summands(&self) -> &[Label] {
        &self.u
    }

    fn max_summand_degree(&self) -> usize {
        self.u.iter().map(|l| self.ring.degree(l)).max().unwrap_or(0)
    }

    /// Closure of `{ε}` under `x ↦ components of x⊗u⊗u`, restricted to degree at most
    /// `bound`; intermediate odd labels may exceed the bound by `deg(u)`.
    pub fn even_labels(&self, bound: usize) -> Result<Arc<BTreeSet<Label>>> {
        if let Some((b, set)) = self.cache.lock().unwrap().as_ref() {
            if *b >= bound {
                let kept: BTreeSet<Label> =
                    set.iter().filter(|l| self.ring.degree(l) <= bound).cloned().collect();
                return Ok(Arc::new(kept));
            }
        }
        let du = self.max_summand_degree();
        let mut seen: BTreeSet<Label> = BTreeSet::new();
        let mut queue = vec![self.ring.unit()];
        seen.insert(self.ring.unit());
        while let Some(x) = queue.pop() {
            for a in &self.u {
                for (c, _) in self.ring.tensor(&x, a)?.iter() {
                    if self.ring.degree(c) > bound + du {
                        continue;
                    }
                    for b in &self.u {
                        for (d, _) in self.ring.tensor(c, b)?.iter() {
                            if self.ring.degree(d) <= bound && seen.insert(d.clone()) {
                                queue.push(d.clone());
                            }
                        }
                    }
                }
            }
        }
        let set = Arc::new(seen);
        *self.cache.lock().unwrap() = Some((bound, set.clone()));
        Ok(set)
    }

    pub fn is_even(&self, a: &Label) -> Result<bool> {
        let bound = self.ring.degree(a) + 2 * self.max_summand_degree();
        if let Some((b, set)) = self.cache.lock().unwrap().as_ref() {
            if *b >= bound {
                return Ok(set.contains(a));
            }
        }
        Ok(self.even_labels(bound)?.contains(a))
    }

    /// True when every label is even, i.e. `u` itself lies in the even part.
    pub fn is_everything(&self) -> Result<bool> {
        for l in &self.u {
            if !self.is_even(l)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The free complexification of `(G, u)` inside `G * S^1`, with label set
/// `W = { z^{[ε_0]_-} β_1 z^{ε_1} ... z^{ε_{p-1}} β_p z^{[ε_p]_+} }` where
/// `ε_i = ε_{i-1}` for odd `β_i` and `ε_i = -ε_{i-1}` for even `β_i`.
#[derive(Debug)]
pub struct TildeRing {
    even: EvenPart,
    ambient: Arc<FreeProductRing>,
    everything: bool,
}

impl TildeRing {
    pub fn new(base: RingRef, u: Label) -> Result<Self> {
        let even = EvenPart::new(base.clone(), u)?;
        if even.ring().unit() == *even.fundamental() {
            return Err(Error::Construction("the fundamental of tilde(..) must not be the unit".into()));
        }
        let circle: RingRef = Arc::new(FreeGroupRing::circle());
        let ambient = Arc::new(FreeProductRing::new(base, circle));
        let everything = even.is_everything()?;
        Ok(Self { even, ambient, everything })
    }

    pub fn ambient(&self) -> &Arc<FreeProductRing> {
        &self.ambient
    }

    pub fn even_part(&self) -> &EvenPart {
        &self.even
    }

    pub fn base(&self) -> &RingRef {
        self.even.ring()
    }

    /// The generator `uz`.
    pub fn generator(&self) -> Label {
        Label::Alt(vec![(0, self.even.fundamental().clone()), (1, Label::Group(vec![1]))])
    }

    /// Membership in the W-pattern set; every word qualifies when the even part is all of G.
    pub fn is_member(&self, a: &Label) -> Result<bool> {
        if !self.ambient.contains(a) {
            return Ok(false);
        }
        if self.everything {
            return Ok(true);
        }
        let Label::Alt(w) = a else { return Ok(false) };
        if w.is_empty() {
            return Ok(true);
        }
        let z = |l: &Label| match l {
            Label::Group(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        };
        let mut i = 0;
        let mut eps = 1;
        if w[0].0 == 1 {
            if z(&w[0].1) != Some(-1) {
                return Ok(false);
            }
            eps = -1;
            i = 1;
        }
        loop {
            let Some((side, beta)) = w.get(i) else { return Ok(false) };
            if *side != 0 {
                return Ok(false);
            }
            if self.even.is_even(beta)? {
                eps = -eps;
            }
            i += 1;
            match w.get(i) {
                None => return Ok(eps == -1),
                Some((_, l)) => {
                    let last = i + 1 == w.len();
                    if last {
                        return Ok(eps == 1 && z(l) == Some(1));
                    }
                    if z(l) != Some(eps) {
                        return Ok(false);
                    }
                    i += 1;
                }
            }
        }
    }
}

impl TildeRing {
    /// Labels of degree at most `bound` that do not occur in any tensor power of `uz` and
    /// its conjugate, searched through intermediate degree `bound + 2 deg(uz)`.
    pub fn unreachable_labels(&self, bound: usize) -> Result<Vec<Label>> {
        let gens = self.generators();
        let window = bound + 2 * gens.iter().map(|g| self.degree(g)).max().unwrap_or(0);
        let mut seen: BTreeSet<Label> = BTreeSet::from([self.unit()]);
        let mut queue = vec![self.unit()];
        while let Some(x) = queue.pop() {
            for g in &gens {
                for (c, _) in self.ambient.tensor(&x, g)?.iter() {
                    if self.degree(c) <= window && seen.insert(c.clone()) {
                        queue.push(c.clone());
                    }
                }
            }
        }
        Ok(self.enumerate(bound).into_iter().filter(|l| !seen.contains(l)).collect())
    }
}

impl FusionRing for TildeRing {
    fn name(&self) -> String {
        format!("tilde({}; {})", self.base().name(), self.base().format(self.even.fundamental()))
    }

    fn unit(&self) -> Label {
        self.ambient.unit()
    }

    fn contains(&self, a: &Label) -> bool {
        self.is_member(a).unwrap_or(false)
    }

    fn conj(&self, a: &Label) -> Result<Label> {
        if !self.contains(a) {
            return domain(format!("{a} is not a label of {}", self.name()));
        }
        self.ambient.conj(a)
    }

    fn tensor(&self, a: &Label, b: &Label) -> Result<ZCombo> {
        if !self.contains(a) || !self.contains(b) {
            return domain(format!("{a} or {b} is not a label of {}", self.name()));
        }
        self.ambient.tensor(a, b)
    }

    fn dim(&self, a: &Label) -> Result<BigInt> {
        self.ambient.dim(a)
    }

    fn degree(&self, a: &Label) -> usize {
        self.ambient.degree(a)
    }

    fn generators(&self) -> Vec<Label> {
        let g = self.generator();
        let c = self.ambient.conj(&g).unwrap_or_else(|_| g.clone());
        vec![g, c]
    }

    fn enumerate(&self, bound: usize) -> Vec<Label> {
        self.ambient.enumerate(bound).into_iter().filter(|l| self.contains(l)).collect()
    }

    fn format(&self, a: &Label) -> String {
        self.ambient.format(a)
    }

    fn parse(&self, s: &str) -> Result<Label> {
        let l = self.ambient.parse(s)?;
        if !self.contains(&l) {
            return domain(format!("{s:?} is not a label of {}", self.name()));
        }
        Ok(l)
    }
}

/// Outcome of [`divisibility_check`].
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct DivisibilityReport {
    pub bound: usize,
    pub classes: usize,
    pub verified: usize,
    pub failed: usize,
    /// Classes meeting the window only at its top degree.
    pub indeterminate: usize,
    /// One failing `(representative, γ)` pair per failed class.
    pub failures: Vec<(String, String)>,
}

/// Partitions ambient labels of degree at most `bound` into classes `w ~ w'` whenever
/// `w' ⊂ w ⊗ γ` for a subring label `γ`, then checks on each class that some representative
/// of minimal word length stays irreducible after tensoring with every enumerated `γ`.
pub fn divisibility_check(
    is_member: &dyn Fn(&Label) -> bool,
    ambient: &dyn FusionRing,
    bound: usize,
) -> Result<DivisibilityReport> {
    let labels = ambient.enumerate(bound);
    let index: BTreeMap<&Label, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let sub: Vec<&Label> = labels.iter().filter(|l| is_member(l)).collect();
    let mut parent: Vec<usize> = (0..labels.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (i, w) in labels.iter().enumerate() {
        for g in &sub {
            for (c, _) in ambient.tensor(w, g)?.iter() {
                if let Some(&j) = index.get(c) {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..labels.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(i);
    }
    let word_len = |l: &Label| match l {
        Label::Alt(w) => w.len(),
        _ => usize::from(*l != ambient.unit()),
    };
    let mut rep = DivisibilityReport { bound, classes: classes.len(), ..Default::default() };
    for members in classes.values() {
        if members.iter().all(|&i| ambient.degree(&labels[i]) == bound) && bound > 0 {
            rep.indeterminate += 1;
            continue;
        }
        let min_len = members.iter().map(|&i| word_len(&labels[i])).min().unwrap_or(0);
        let mut first_failure = None;
        let mut ok = false;
        for &i in members.iter().filter(|&&i| word_len(&labels[i]) == min_len) {
            let beta = &labels[i];
            let mut bad = None;
            for g in &sub {
                if ambient.tensor(beta, g)?.as_basis_element().is_none() {
                    bad = Some(*g);
                    break;
                }
            }
            match bad {
                None => {
                    ok = true;
                    break;
                }
                Some(g) if first_failure.is_none() => {
                    first_failure = Some((ambient.format(beta), ambient.format(g)));
                }
                Some(_) => {}
            }
        }
        if ok {
            rep.verified += 1;
        } else {
            rep.failed += 1;
            rep.failures.extend(first_failure);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct TrichotomyReport {
    pub module: String,
    /// The window actually used, after any retry at a larger bound.
    pub bound: usize,
    pub classes: usize,
    pub class_sizes: Vec<usize>,
    pub representatives: Vec<String>,
    pub odd_stabilizer_found: bool,
    /// A basis element together with an odd label stabilizing it.
    pub odd_witness: Option<(String, String)>,
    /// Odd stabilizer found exactly when there is a single class.
    pub consistent: bool,
}

fn even_classes(m: &dyn BasedModule, even: &EvenPart, bound: usize) -> Result<Vec<Vec<Label>>> {
    let window = m.basis(bound)?;
    let evens = even.even_labels(bound)?;
    let index: BTreeMap<&Label, usize> = window.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut parent: Vec<usize> = (0..window.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (a, j) in window.iter().enumerate() {
        for e in evens.iter() {
            for (x, _) in m.act(e, j)?.iter() {
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

/// Classes of basis elements under the action of the even part, with a search for odd
/// stabilizers. More than two classes at `bound` triggers one retry at `bound + 2`; if the
/// count is still above two the result is an invariant violation.
pub fn even_class_trichotomy(m: &dyn BasedModule, even: &EvenPart, bound: usize) -> Result<TrichotomyReport> {
    let ring = m.ring();
    if ring.name() != even.ring().name() {
        return domain(format!("{} is not a module over {}", m.name(), even.ring().name()));
    }
    let mut used = bound;
    let mut classes = even_classes(m, even, used)?;
    if classes.len() > 2 {
        used = bound + 2;
        classes = even_classes(m, even, used)?;
    }
    if classes.len() > 2 {
        return Err(Error::Invariant(format!(
            "{} splits into {} even classes on the window of degree {used}",
            m.name(),
            classes.len()
        )));
    }
    let evens = even.even_labels(used)?;
    let mut odd_witness = None;
    'search: for j in m.basis(used)? {
        for i in ring.enumerate(used) {
            if !evens.contains(&i) && m.act(&i, &j)?.contains(&j) {
                odd_witness = Some((m.format(&j), ring.format(&i)));
                break 'search;
            }
        }
    }
    let odd = odd_witness.is_some();
    Ok(TrichotomyReport {
        module: m.name(),
        bound: used,
        classes: classes.len(),
        class_sizes: classes.iter().map(Vec::len).collect(),
        representatives: classes.iter().map(|c| m.format(&c[0])).collect(),
        odd_stabilizer_found: odd,
        odd_witness,
        consistent: odd == (classes.len() == 1),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexifiedCount {
    pub module: String,
    pub ring: String,
    pub bound: usize,
    /// Number of distinct submodules `P_j` generated by the empty-word elements `∅ j`.
    pub count: usize,
    pub generators: Vec<String>,
    pub verdicts: Vec<StandardVerdict>,
    /// Isomorphism verdict between `P` and `P'` when they differ.
    pub iso_between: Option<IsoVerdict>,
}

/// Induces a non-standard `N` to `G * S^1`, restricts to the free complexification and
/// counts the distinct submodules generated by the elements of `N`, one per even class.
pub fn complexified_submodule_count(n: ModuleRef, u: Label, bound: usize) -> Result<ComplexifiedCount> {
    if !detect_standard(n.as_ref(), bound)?.is_non_standard() {
        return domain(format!("{} is not certified non-standard on the window of degree {bound}", n.name()));
    }
    let g = n.ring();
    let tilde = Arc::new(TildeRing::new(g.clone(), u.clone())?);
    let trich = even_class_trichotomy(n.as_ref(), tilde.even_part(), bound)?;
    let ind: ModuleRef = Arc::new(InducedModule::new(tilde.ambient().clone(), 0, n.clone())?);
    let res: ModuleRef = Arc::new(RestrictedModule::to_subring(tilde.clone(), ind));
    let empty = Label::Alt(vec![]);
    let reps = even_classes(n.as_ref(), tilde.even_part(), trich.bound)?;
    let mut subs: Vec<SubModule> = Vec::new();
    for class in &reps {
        let seed = Label::pair(empty.clone(), class[0].clone());
        if subs.iter().any(|p| p.contains(&seed)) {
            continue;
        }
        subs.push(SubModule::new(res.clone(), vec![seed])?);
    }
    let mut verdicts = Vec::new();
    for p in &subs {
        verdicts.push(detect_standard(p, bound)?);
    }
    let iso_between = match subs.as_slice() {
        [p, q] => Some(module_isomorphic(p, q, bound, bound)?),
        _ => None,
    };
    Ok(ComplexifiedCount {
        module: n.name(),
        ring: tilde.name(),
        bound,
        count: subs.len(),
        generators: subs.iter().map(|p| res.format(&p.seeds()[0])).collect(),
        verdicts,
        iso_between,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{wreath_submodule_scan, FiniteModule, StandardModule, TrivialModule};
    use crate::rings::{ChebyshevRing, CyclicRing, WreathRing};

    fn su2() -> RingRef {
        Arc::new(ChebyshevRing::suq2())
    }

    fn hn_model() -> RingRef {
        Arc::new(WreathRing::new(Arc::new(CyclicRing::new(2).unwrap())))
    }

    #[test]
    fn even_parts() {
        let o3: RingRef = Arc::new(ChebyshevRing::oplus(3).unwrap());
        let e = EvenPart::new(o3.clone(), o3.parse("v1").unwrap()).unwrap();
        assert!(!e.is_even(&o3.parse("v1").unwrap()).unwrap());
        assert!(e.is_even(&o3.parse("v2").unwrap()).unwrap());
        assert!(!e.is_everything().unwrap());

        let su = su2();
        let e = EvenPart::new(su.clone(), su.parse("u1").unwrap()).unwrap();
        for k in 0..6 {
            assert_eq!(e.is_even(&Label::Spin(k)).unwrap(), k % 2 == 0);
        }

        let h = hn_model();
        let e = EvenPart::new(h.clone(), h.parse("(s)").unwrap()).unwrap();
        assert!(e.is_even(&h.parse("(1)").unwrap()).unwrap());
        assert!(!e.is_even(&h.parse("(s)").unwrap()).unwrap());

        let z4: RingRef = Arc::new(CyclicRing::new(4).unwrap());
        assert!(EvenPart::new(z4.clone(), z4.parse("g").unwrap()).is_err());
        assert!(EvenPart::from_summands(z4.clone(), vec![z4.parse("g").unwrap()]).is_err());
    }

    #[test]
    fn tilde_membership_and_closure() {
        let t = TildeRing::new(su2(), Label::Spin(1)).unwrap();
        let g = t.generator();
        assert!(t.contains(&g));
        assert!(t.contains(&t.ambient().conj(&g).unwrap()));
        assert!(!t.contains(&t.ambient().parse("z").unwrap()));
        assert!(t.unreachable_labels(4).unwrap().is_empty());
        let labels = t.enumerate(4);
        for a in &labels {
            assert!(t.contains(&t.conj(a).unwrap()));
            for b in &labels {
                for (c, _) in t.tensor(a, b).unwrap().iter() {
                    assert!(t.contains(c), "{} in {} ⊗ {}", t.format(c), t.format(a), t.format(b));
                }
            }
        }
    }

    #[test]
    fn divisibility() {
        let o3: RingRef = Arc::new(ChebyshevRing::oplus(3).unwrap());
        let t = TildeRing::new(o3, Label::Spin(1)).unwrap();
        let rep = divisibility_check(&|l| t.contains(l), t.ambient().as_ref(), 4).unwrap();
        assert_eq!(rep.failed, 0);
        assert!(rep.verified > 0);

        let su = ChebyshevRing::suq2();
        let even = |l: &Label| matches!(l, Label::Spin(k) if k % 2 == 0);
        let rep = divisibility_check(&even, &su, 4).unwrap();
        assert!(rep.failed >= 1);

        let unit_only = |l: &Label| *l == Label::Spin(0);
        let rep = divisibility_check(&unit_only, &su, 4).unwrap();
        assert_eq!((rep.classes, rep.verified, rep.failed, rep.indeterminate), (5, 4, 0, 1));
    }

    #[test]
    fn trichotomy_examples() {
        let m = FiniteModule::two_class_z4();
        let r = m.ring();
        let e = EvenPart::from_summands(r.clone(), vec![r.parse("g").unwrap(), r.parse("g^3").unwrap()]).unwrap();
        let rep = even_class_trichotomy(&m, &e, 4).unwrap();
        assert_eq!((rep.classes, rep.odd_stabilizer_found, rep.consistent), (2, false, true));

        let z2: RingRef = Arc::new(CyclicRing::new(2).unwrap());
        let e = EvenPart::new(z2.clone(), z2.parse("s").unwrap()).unwrap();
        let rep = even_class_trichotomy(&TrivialModule::new(z2.clone()), &e, 2).unwrap();
        assert_eq!((rep.classes, rep.odd_stabilizer_found, rep.consistent), (1, true, true));
        assert_eq!(rep.odd_witness.unwrap().1, "s");
        let rep = even_class_trichotomy(&StandardModule::new(z2), &e, 2).unwrap();
        assert_eq!((rep.classes, rep.odd_stabilizer_found, rep.consistent), (2, false, true));
    }

    #[test]
    fn complexified_counts() {
        let u = hn_model().parse("(s)").unwrap();
        let (trivial, _) = wreath_submodule_scan(Arc::new(TrivialModule::new(Arc::new(CyclicRing::new(2).unwrap()))), 4).unwrap();
        let one = complexified_submodule_count(trivial, u.clone(), 3).unwrap();
        assert_eq!(one.count, 1);
        assert!(one.iso_between.is_none());

        let (swap, _) = wreath_submodule_scan(Arc::new(FiniteModule::swap()), 4).unwrap();
        let two = complexified_submodule_count(swap, u, 3).unwrap();
        assert_eq!(two.count, 2);
        assert!(two.iso_between.as_ref().unwrap().is_yes(), "{two:?}");

        let z2: RingRef = Arc::new(CyclicRing::new(2).unwrap());
        let std: ModuleRef = Arc::new(StandardModule::new(z2.clone()));
        assert!(complexified_submodule_count(std, z2.parse("s").unwrap(), 3).is_err());
    }
}
