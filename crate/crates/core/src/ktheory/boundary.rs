use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::orbit::{OrbitClass, Summand, SummandKind, WreathModel};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ring::FusionRing;

pub type ClassCombo = BTreeMap<OrbitClass, BigInt>;

fn add(c: &mut ClassCombo, k: OrbitClass, v: BigInt) {
    let e = c.entry(k.clone()).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        c.remove(&k);
    }
}

/// `∂_γ(e_c) = Σ_{x ⊂ rep(c) ⊗ γ} m_x e_{[x]}`, except `∂_u(e_∅) = 2 e_u` and
/// `∂_γ(e_u) = dim(γ) e_u` for fundamentals `γ` of `G`.
pub fn apply_partial(model: &WreathModel, s: &Summand, c: &OrbitClass) -> Result<ClassCombo> {
    let mut out = ClassCombo::new();
    match (&s.kind, c) {
        (SummandKind::Su, OrbitClass::Empty) => {
            out.insert(OrbitClass::U, BigInt::from(2));
            return Ok(out);
        }
        (SummandKind::Base, OrbitClass::U) => {
            out.insert(OrbitClass::U, s.dim.clone());
            return Ok(out);
        }
        _ => {}
    }
    let rep = model.representative(c);
    for (x, m) in model.ambient.tensor(&rep, &s.gamma)?.iter() {
        add(&mut out, model.class_of(x), m.clone());
    }
    Ok(out)
}

pub fn apply_partial_u(model: &WreathModel, c: &OrbitClass) -> Result<ClassCombo> {
    let s = model
        .summands
        .iter()
        .find(|s| s.kind == SummandKind::Su)
        .ok_or_else(|| Error::Invariant("model without a u summand".into()))?;
    apply_partial(model, s, c)
}

/// `∂_γ` for the `index`-th fundamental of `G` (in the order of `model.summands`).
pub fn apply_partial_fundamental(model: &WreathModel, index: usize, c: &OrbitClass) -> Result<ClassCombo> {
    let s = model
        .summands
        .iter()
        .filter(|s| s.kind == SummandKind::Base)
        .nth(index)
        .ok_or_else(|| Error::Domain(format!("no fundamental with index {index}")))?;
    apply_partial(model, s, c)
}

/// `d_γ = ∂_γ - dim(γ) id`.
pub fn apply_d(model: &WreathModel, s: &Summand, c: &OrbitClass) -> Result<ClassCombo> {
    let mut out = apply_partial(model, s, c)?;
    add(&mut out, c.clone(), -s.dim.clone());
    Ok(out)
}

/// The stacked boundary map on a degree window.
#[derive(Clone, Debug)]
pub struct DeltaMatrix {
    pub rows: Vec<OrbitClass>,
    /// `(summand index, class)` per column.
    pub cols: Vec<(usize, OrbitClass)>,
    pub matrix: SparseMatrix,
    pub row_index: HashMap<OrbitClass, usize>,
}

/// Columns: every summand on every class of degree at most `domain_bound`.
/// Rows: classes of degree at most `codomain_bound`. Fails if a column leaves the rows, has
/// more than three terms, or moves degree by more than one.
pub fn assemble_delta(model: &WreathModel, domain_bound: usize, codomain_bound: usize) -> Result<DeltaMatrix> {
    let rows = model.orbit_basis(codomain_bound);
    let row_index: HashMap<OrbitClass, usize> = rows.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let domain: Vec<OrbitClass> = rows.iter().filter(|c| model.degree(c) <= domain_bound).cloned().collect();
    let cols: Vec<(usize, OrbitClass)> = (0..model.summands.len())
        .flat_map(|s| domain.iter().map(move |c| (s, c.clone())))
        .collect();
    let images: Vec<Result<Vec<(usize, BigInt)>>> = cols
        .par_iter()
        .map(|(s, c)| {
            let img = apply_d(model, &model.summands[*s], c)?;
            if img.len() > 3 {
                return Err(Error::Invariant(format!(
                    "d[{}] of {} has {} terms",
                    model.summands[*s].name,
                    model.format_class(c),
                    img.len()
                )));
            }
            let dc = model.degree(c);
            let mut out = Vec::with_capacity(img.len());
            for (k, v) in img {
                if model.degree(&k).abs_diff(dc) > 1 {
                    return Err(Error::Invariant(format!(
                        "d[{}] moves {} to {} by more than one degree",
                        model.summands[*s].name,
                        model.format_class(c),
                        model.format_class(&k)
                    )));
                }
                let r = *row_index.get(&k).ok_or_else(|| {
                    Error::Invariant(format!("{} falls outside the codomain window", model.format_class(&k)))
                })?;
                out.push((r, v));
            }
            Ok(out)
        })
        .collect();
    let mut matrix = SparseMatrix::new(rows.len());
    for img in images {
        matrix.push_column(img?);
    }
    Ok(DeltaMatrix { rows, cols, matrix, row_index })
}

impl DeltaMatrix {
    /// Columns whose image lies in rows of degree at most `bound`, restricted to those rows.
    pub fn restrict_rows(&self, model: &WreathModel, bound: usize) -> (Vec<OrbitClass>, SparseMatrix) {
        let keep: Vec<usize> = (0..self.rows.len()).filter(|&i| model.degree(&self.rows[i]) <= bound).collect();
        let mut pos = vec![usize::MAX; self.rows.len()];
        for (a, &i) in keep.iter().enumerate() {
            pos[i] = a;
        }
        let mut m = SparseMatrix::new(keep.len());
        for j in 0..self.matrix.cols() {
            let col = self.matrix.column(j);
            if col.iter().all(|(i, _)| pos[*i] != usize::MAX) {
                m.push_column(col.iter().map(|(i, v)| (pos[*i], v.clone())));
            }
        }
        (keep.iter().map(|&i| self.rows[i].clone()).collect(), m)
    }

    pub fn entry_of(&self, v: &ClassCombo) -> Vec<(usize, BigInt)> {
        v.iter().filter_map(|(k, x)| self.row_index.get(k).map(|&i| (i, x.clone()))).collect()
    }
}

/// Formats `Σ x_j col_j` as e.g. `e_∅ + e_u` (summand `u`) or `f[v1]_u`.
pub fn format_domain_vector(model: &WreathModel, cols: &[(usize, OrbitClass)], x: &[BigInt]) -> String {
    let mut parts = Vec::new();
    for (j, v) in x.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let (s, c) = &cols[j];
        let name = format!("{}[{}]", model.summands[*s].name, model.format_class(c));
        parts.push(if v.is_one() {
            name
        } else if *v == -BigInt::one() {
            format!("-{name}")
        } else {
            format!("{v}·{name}")
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn model(s: &str) -> WreathModel {
        WreathModel::new(&parse_spec(s).unwrap()).unwrap()
    }

    fn show(m: &WreathModel, c: &ClassCombo) -> Vec<(String, i64)> {
        c.iter().map(|(k, v)| (m.format_class(k), i64::try_from(v).unwrap())).collect()
    }

    fn word(m: &WreathModel, s: &str) -> OrbitClass {
        OrbitClass::Word(m.ambient.parse(s).unwrap())
    }

    #[test]
    fn partial_u() {
        let m = model("wreath(O+(3))");
        assert_eq!(show(&m, &apply_partial_u(&m, &OrbitClass::Empty).unwrap()), [("u".into(), 2)]);
        assert_eq!(show(&m, &apply_partial_u(&m, &OrbitClass::U).unwrap()), [("∅".into(), 2)]);
        assert_eq!(show(&m, &apply_partial_u(&m, &word(&m, "v1")).unwrap()), [("v1 u1".into(), 1)]);
        let mut got = show(&m, &apply_partial_u(&m, &word(&m, "v1 u1")).unwrap());
        got.sort();
        assert_eq!(got, [("v1".into(), 1), ("v1 u2".into(), 1)]);
    }

    #[test]
    fn partial_fundamental() {
        let m = model("wreath(O+(3))");
        assert_eq!(show(&m, &apply_partial_fundamental(&m, 0, &OrbitClass::U).unwrap()), [("u".into(), 3)]);
        assert_eq!(show(&m, &apply_partial_fundamental(&m, 0, &OrbitClass::Empty).unwrap()), [("v1".into(), 1)]);
        let mut got = show(&m, &apply_partial_fundamental(&m, 0, &word(&m, "v1 u1 v2")).unwrap());
        got.sort();
        assert_eq!(got, [("v1 u1 v1".into(), 1), ("v1 u1 v3".into(), 1)]);
        let f1 = model("wreath(F(1))");
        assert_eq!(show(&f1, &apply_partial_fundamental(&f1, 0, &word(&f1, "a")).unwrap()), [("a^2".into(), 1)]);
        assert_eq!(show(&f1, &apply_partial_fundamental(&f1, 0, &OrbitClass::U).unwrap()), [("u".into(), 1)]);
    }

    #[test]
    fn summand_counts() {
        assert_eq!(model("wreath(O+(3))").summands.len(), 2);
        assert_eq!(model("wreath(F(2))").summands.len(), 3);
        assert_eq!(model("wreath(U+(2))").summands.len(), 3);
        assert_eq!(model("wreath(U+(2) * O+(3))").summands.len(), 4);
        let m = model("wreath(F(2))");
        let names: Vec<&str> = m.summands.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["a", "b", "u"]);
    }

    #[test]
    fn window_is_closed() {
        for s in ["wreath(O+(2))", "wreath(F(2))", "wreath(U+(2) * O+(3))"] {
            let m = model(s);
            let d = assemble_delta(&m, 3, 4).unwrap();
            assert_eq!(d.cols.len(), m.summands.len() * m.orbit_basis(3).len());
        }
    }
}
