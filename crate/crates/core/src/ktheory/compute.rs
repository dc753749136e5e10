use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::boundary::{assemble_delta, format_domain_vector};
use super::orbit::{OrbitClass, SummandKind, WreathModel};
use super::rewriting::{rewriting_from_delta, Rewriting};
use crate::error::{Error, Result};
use crate::linalg::{column_hnf, Cokernel, IntegerMatrix};
use crate::spec::GroupSpec;

/// Data recorded at one truncation radius.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusTrace {
    pub radius: usize,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub k1_rank: usize,
    pub kernel_basis: Vec<String>,
    /// Whether the kernel lattice equals the span of `e_∅ + e_u` and the `f_u` of each
    /// summand of `G`.
    pub kernel_is_canonical: bool,
    pub k0_snf: Cokernel,
    pub k0_rewriting: Option<Rewriting>,
    pub unit_pivots: usize,
    pub residual_shape: (usize, usize),
    pub millis: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0 {
    pub rank: usize,
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K1 {
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witnesses {
    pub kernel_basis: Vec<String>,
    #[serde(with = "crate::json::bigint_matrix")]
    pub residual_presentation: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTheoryResult {
    pub spec: String,
    pub radii: Vec<usize>,
    pub k0: K0,
    pub k1: K1,
    /// `truncated_snf`, plus `rewriting` when the closed-form route applies.
    pub methods: Vec<String>,
    pub stable: bool,
    /// Why the result is not stable, if it is not.
    pub instability: Option<String>,
    pub witnesses: Witnesses,
    pub trace: Vec<RadiusTrace>,
}

impl KTheoryResult {
    pub fn k0_group(&self) -> Cokernel {
        Cokernel { free_rank: self.k0.rank, torsion: self.k0.torsion.clone() }
    }
}

/// Domain vectors spanning the expected kernel: `e_∅ + e_u` in the `u` summand and `f_u` in
/// every summand of `G`, in the column order of [`assemble_delta`].
pub fn expected_kernel(model: &WreathModel, cols: &[(usize, OrbitClass)]) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for (s, summand) in model.summands.iter().enumerate() {
        let mut v = vec![BigInt::zero(); cols.len()];
        for (j, (t, c)) in cols.iter().enumerate() {
            if *t != s {
                continue;
            }
            let hit = match summand.kind {
                SummandKind::Su => matches!(c, OrbitClass::Empty | OrbitClass::U),
                SummandKind::Base => *c == OrbitClass::U,
            };
            if hit {
                v[j] = BigInt::one();
            }
        }
        out.push(v);
    }
    out
}

fn same_lattice(n: usize, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
    let h = |v: &[Vec<BigInt>]| {
        if v.is_empty() {
            IntegerMatrix::zeros(n, 0)
        } else {
            column_hnf(&IntegerMatrix::from_columns(n, v))
        }
    };
    h(a) == h(b)
}

fn at_radius(model: &WreathModel, radius: usize) -> Result<(RadiusTrace, Vec<Vec<BigInt>>)> {
    let start = Instant::now();
    let delta = assemble_delta(model, radius, radius + 1)?;
    let elim = delta.matrix.eliminate(true);
    let kernel = elim.kernel_basis();
    let kernel_basis: Vec<String> = kernel.iter().map(|x| format_domain_vector(model, &delta.cols, x)).collect();
    let kernel_is_canonical = same_lattice(delta.cols.len(), &kernel, &expected_kernel(model, &delta.cols));
    let (_, restricted) = delta.restrict_rows(model, radius);
    let celim = restricted.eliminate(false);
    let k0_snf = celim.cokernel();
    let k0_rewriting = match rewriting_from_delta(model, &delta) {
        Ok(r) => Some(r),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let trace = RadiusTrace {
        radius,
        domain_dim: delta.cols.len(),
        codomain_dim: delta.rows.len(),
        k1_rank: kernel.len(),
        kernel_basis,
        kernel_is_canonical,
        k0_snf,
        k0_rewriting,
        unit_pivots: celim.unit_pivots(),
        residual_shape: (celim.residual.rows(), celim.residual.cols()),
        millis: start.elapsed().as_millis() as u64,
    };
    Ok((trace, kernel))
}

/// K-theory of `wreath(G)` through the stacked boundary map on each radius of `radii`.
///
/// `K_1` is the kernel on the window with domain degree at most `R` and codomain degree at
/// most `R + 1`, which contains every image. `K_0` is computed twice: by Smith normal form
/// on rows of degree at most `R` against every column whose image stays in those rows, and
/// by the closed-form rewriting onto `p(e_∅)`, `p(e_u)` when available. The result is
/// stable when all radii agree and the two methods agree at each radius.
pub fn compute_ktheory(spec: &GroupSpec, radii: &[usize]) -> Result<KTheoryResult> {
    if radii.len() < 3 || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("the radius schedule must be strictly increasing with at least three entries".into()));
    }
    let model = WreathModel::new(spec)?;
    let runs: Vec<Result<(RadiusTrace, Vec<Vec<BigInt>>)>> =
        radii.par_iter().map(|&r| at_radius(&model, r)).collect();
    let mut trace = Vec::new();
    for r in runs {
        trace.push(r?.0);
    }
    let last = trace.last().unwrap();
    let mut problems = Vec::new();
    for t in &trace {
        if t.k1_rank != last.k1_rank || t.k0_snf != last.k0_snf {
            problems.push(format!(
                "radius {} gives K0 = {}, K1 rank {}; radius {} gives K0 = {}, K1 rank {}",
                t.radius, t.k0_snf, t.k1_rank, last.radius, last.k0_snf, last.k1_rank
            ));
        }
        if let Some(rw) = &t.k0_rewriting {
            if rw.cokernel != t.k0_snf {
                problems.push(format!(
                    "radius {}: Smith form gives {}, rewriting gives {}",
                    t.radius, t.k0_snf, rw.cokernel
                ));
            }
        }
    }
    let mut methods = vec!["truncated_snf".to_string()];
    if last.k0_rewriting.is_some() {
        methods.push("rewriting".into());
    }
    Ok(KTheoryResult {
        spec: spec.to_string(),
        radii: radii.to_vec(),
        k0: K0 { rank: last.k0_snf.free_rank, torsion: last.k0_snf.torsion.clone() },
        k1: K1 { rank: last.k1_rank },
        methods,
        stable: problems.is_empty(),
        instability: (!problems.is_empty()).then(|| problems.join("; ")),
        witnesses: Witnesses {
            kernel_basis: last.kernel_basis.clone(),
            residual_presentation: last
                .k0_rewriting
                .as_ref()
                .map(|r| r.residual_presentation.clone())
                .unwrap_or_default(),
        },
        trace,
    })
}
