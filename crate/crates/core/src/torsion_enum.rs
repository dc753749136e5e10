//! Exhaustive enumeration of connected finite-rank modules over finite group rings, and an
//! axiom check for closed-form infinite modules.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::label::Label;
use crate::linalg::IntegerMatrix;
use crate::module::{check_module_axioms, components, BasedModule, FiniteModule, ModuleReport};
use crate::ring::RingRef;

/// Default cap on the number of search nodes visited by [`enumerate_modules`].
pub const DEFAULT_BUDGET: u64 = 5_000_000;

type Mat = Vec<Vec<u32>>;

/// A connected module of rank `rank`, given by the matrix of each ring generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleCandidate {
    pub ring: String,
    pub rank: usize,
    pub matrices: BTreeMap<String, Mat>,
    /// Sizes of the orbits of the basis under the full ring, i.e. stabilizer indices.
    pub stabilizer_orders: Vec<usize>,
    pub axioms_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub ring: String,
    pub generator: String,
    pub max_rank: usize,
    pub max_entry: u32,
    pub nodes: u64,
    pub modules: Vec<ModuleCandidate>,
}

/// Labels of a finite group ring as powers of `generator`: `powers[r] = generator^r`.
fn powers_of(ring: &RingRef, generator: &Label) -> Result<Vec<Label>> {
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!("{} has infinitely many labels", ring.name())));
    }
    let labels = ring.enumerate(usize::MAX);
    for l in &labels {
        if ring.dim(l)? != 1.into() {
            return Err(Error::Unsupported(format!("{} is not a group ring", ring.name())));
        }
    }
    let mut powers = vec![ring.unit()];
    loop {
        let next = ring.tensor(powers.last().unwrap(), generator)?;
        let next = next.as_basis_element().cloned().ok_or_else(|| Error::Domain("not a group ring".into()))?;
        if next == ring.unit() {
            break;
        }
        powers.push(next);
    }
    if powers.len() != labels.len() {
        return domain(format!("{} does not generate {}", ring.format(generator), ring.name()));
    }
    Ok(powers)
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![0u32; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect()
}

fn is_connected(m: &Mat) -> bool {
    let n = m.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if (m[i][j] != 0 || m[j][i] != 0) && !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Lexicographically least simultaneous conjugate `P M P^T`.
fn canonical(m: &Mat) -> Mat {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| (0..n).map(|i| (0..n).map(|j| m[p[i]][p[j]]).collect::<Vec<u32>>()).collect::<Mat>())
        .min()
        .unwrap_or_default()
}

struct Search {
    rank: usize,
    max_entry: u32,
    order: usize,
    nodes: u64,
    budget: u64,
    found: BTreeSet<Mat>,
}

impl Search {
    /// Rows are filled one at a time; for a group ring `M_g M_g^T = M_ε = I`, so every
    /// partial matrix must have orthonormal rows.
    fn rows(&mut self, m: &mut Mat) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("more than {} search nodes at rank {}", self.budget, self.rank)));
        }
        if m.len() == self.rank {
            let mut p = identity(self.rank);
            for _ in 0..self.order {
                p = mat_mul(&p, m);
            }
            if p == identity(self.rank) && is_connected(m) {
                self.found.insert(canonical(m));
            }
            return Ok(());
        }
        let mut row = vec![0u32; self.rank];
        self.fill(m, &mut row, 0)
    }

    fn fill(&mut self, m: &mut Mat, row: &mut Vec<u32>, k: usize) -> Result<()> {
        let norm: u32 = row[..k].iter().map(|x| x * x).sum();
        if norm > 1 {
            return Ok(());
        }
        if k == self.rank {
            if norm != 1 {
                return Ok(());
            }
            for prev in m.iter() {
                if prev.iter().zip(row.iter()).any(|(a, b)| a * b != 0) {
                    return Ok(());
                }
            }
            m.push(row.clone());
            let r = self.rows(m);
            m.pop();
            return r;
        }
        for v in 0..=self.max_entry {
            row[k] = v;
            self.fill(m, row, k + 1)?;
        }
        row[k] = 0;
        Ok(())
    }
}

fn to_integer(m: &Mat) -> IntegerMatrix {
    IntegerMatrix::from_rows(m)
}

/// The module over a finite group ring on which `generator` acts by `m`.
pub fn module_from_matrix(ring: &RingRef, generator: &Label, m: &Mat, name: impl Into<String>) -> Result<FiniteModule> {
    let powers = powers_of(ring, generator)?;
    let mut matrices = BTreeMap::new();
    let mut p = identity(m.len());
    for l in powers {
        matrices.insert(l, to_integer(&p));
        p = mat_mul(&p, m);
    }
    if p != identity(m.len()) {
        return domain("the generator matrix has the wrong order");
    }
    FiniteModule::new(ring.clone(), name, matrices)
}

/// Connected modules of rank at most `max_rank` with generator entries at most `max_entry`,
/// up to simultaneous permutation, described through the matrix of `generator`.
pub fn enumerate_modules_with(
    ring: &RingRef,
    generator: &Label,
    max_rank: usize,
    max_entry: u32,
    budget: u64,
) -> Result<Enumeration> {
    let powers = powers_of(ring, generator)?;
    let mut out = Enumeration {
        ring: ring.name(),
        generator: ring.format(generator),
        max_rank,
        max_entry,
        nodes: 0,
        modules: Vec::new(),
    };
    for rank in 1..=max_rank {
        let mut s = Search { rank, max_entry, order: powers.len(), nodes: 0, budget: budget - out.nodes, found: BTreeSet::new() };
        s.rows(&mut Vec::new())?;
        out.nodes += s.nodes;
        for m in s.found {
            let module = module_from_matrix(ring, generator, &m, format!("rank-{rank} module"))?;
            let report = check_module_axioms(&module, 0)?;
            let stabilizer_orders = (0..rank)
                .map(|j| {
                    let mut p = identity(rank);
                    let mut count = 0;
                    for _ in 0..powers.len() {
                        count += usize::from(p[j][j] != 0);
                        p = mat_mul(&p, &m);
                    }
                    count
                })
                .collect();
            out.modules.push(ModuleCandidate {
                ring: ring.name(),
                rank,
                matrices: BTreeMap::from([(ring.format(generator), m)]),
                stabilizer_orders,
                axioms_passed: report.passed,
            });
        }
    }
    Ok(out)
}

/// [`enumerate_modules_with`] for the first generator of the ring.
pub fn enumerate_modules(ring: &RingRef, max_rank: usize, max_entry: u32) -> Result<Enumeration> {
    let g = ring
        .generators()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Unsupported(format!("{} has no generators", ring.name())))?;
    enumerate_modules_with(ring, &g, max_rank, max_entry, DEFAULT_BUDGET)
}

/// The generator matrix of `c` rewritten in terms of another generator, in canonical form,
/// so that enumerations with respect to different generators can be compared.
pub fn canonical_in_terms_of(ring: &RingRef, c: &ModuleCandidate, target: &Label) -> Result<Mat> {
    let (name, m) = c.matrices.iter().next().ok_or_else(|| Error::Domain("empty candidate".into()))?;
    let g = ring.parse(name)?;
    let powers = powers_of(ring, &g)?;
    let t = powers.iter().position(|l| l == target).ok_or_else(|| Error::Domain("target is not a power".into()))?;
    let mut p = identity(m.len());
    for _ in 0..t {
        p = mat_mul(&p, m);
    }
    Ok(canonical(&p))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub axioms: ModuleReport,
    /// The window of degree `bound` lies in one orbit of the window of degree `bound + 2`.
    pub connected: bool,
    /// Window sizes for degrees `0..=bound`; finite and non-decreasing.
    pub window_sizes: Vec<usize>,
    pub passed: bool,
}

/// Axiom check, connectivity and window growth for a closed-form module.
pub fn verify_candidate_module(m: &dyn BasedModule, bound: usize) -> Result<CandidateReport> {
    let axioms = check_module_axioms(m, bound)?;
    let outer = m.basis(bound + 2)?;
    let inner: BTreeSet<Label> = m.basis(bound)?.into_iter().collect();
    let comps = components(m, &outer)?;
    let connected = comps.iter().filter(|c| c.iter().any(|x| inner.contains(x))).count() == 1;
    let mut window_sizes = Vec::new();
    for b in 0..=bound {
        window_sizes.push(m.basis(b)?.len());
    }
    let cofinite = window_sizes.windows(2).all(|w| w[0] <= w[1]);
    Ok(CandidateReport { passed: axioms.passed && connected && cofinite, axioms, connected, window_sizes })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::module::{spin_module, wreath_submodule_scan, TrivialModule};
    use crate::rings::CyclicRing;
    use crate::ZCombo;

    fn z(n: u32) -> RingRef {
        Arc::new(CyclicRing::new(n).unwrap())
    }

    #[test]
    fn z2_modules() {
        let e = enumerate_modules(&z(2), 2, 3).unwrap();
        let ms: Vec<&Mat> = e.modules.iter().map(|c| &c.matrices["s"]).collect();
        assert_eq!(ms, vec![&vec![vec![1]], &vec![vec![0, 1], vec![1, 0]]]);
        assert!(e.modules.iter().all(|c| c.axioms_passed));
        assert_eq!(enumerate_modules(&z(2), 4, 3).unwrap().modules.len(), 2);
    }

    #[test]
    fn z4_modules() {
        let e = enumerate_modules(&z(4), 4, 3).unwrap();
        let ranks: Vec<usize> = e.modules.iter().map(|c| c.rank).collect();
        assert_eq!(ranks, vec![1, 2, 4]);
        let two = &e.modules[1];
        assert_eq!(two.matrices["g"], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(two.stabilizer_orders, vec![2, 2]);
    }

    #[test]
    fn generator_choice_is_irrelevant() {
        let r = z(5);
        let g = r.parse("g").unwrap();
        let g3 = r.parse("g^3").unwrap();
        let a = enumerate_modules_with(&r, &g, 5, 2, DEFAULT_BUDGET).unwrap();
        let b = enumerate_modules_with(&r, &g3, 5, 2, DEFAULT_BUDGET).unwrap();
        let norm = |e: &Enumeration| -> BTreeSet<Mat> { e.modules.iter().map(|c| canonical_in_terms_of(&r, c, &g).unwrap()).collect() };
        assert_eq!(norm(&a), norm(&b));
        assert_eq!(a.modules.len(), 2);
    }

    #[test]
    fn budget_is_explicit() {
        assert!(matches!(enumerate_modules_with(&z(2), &z(2).parse("s").unwrap(), 4, 3, 50), Err(Error::Budget(_))));
    }

    #[test]
    fn closed_form_candidates() {
        let m = spin_module();
        assert!(verify_candidate_module(&m, 4).unwrap().passed);
        let u2 = Label::Wreath(vec![Label::Residue(0)]);
        let broken = m.overriding(u2, Arc::new(|_: &Label, j: &Label| Ok(ZCombo::single(j.clone()))), "broken");
        assert!(!verify_candidate_module(&broken, 4).unwrap().passed);
        let (sub, _) = wreath_submodule_scan(Arc::new(TrivialModule::new(z(2))), 4).unwrap();
        assert!(verify_candidate_module(sub.as_ref(), 3).unwrap().passed);
    }
}
