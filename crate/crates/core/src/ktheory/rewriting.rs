use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::boundary::{apply_d, assemble_delta, DeltaMatrix};
use super::orbit::{LetterRule, OrbitClass, SummandKind, WreathModel};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::linalg::{cokernel_invariants, column_hnf, Cokernel, IntegerMatrix};

/// `a_0 = 2`, `a_1 = 3`, `a_{k+1} = 2 a_k - a_{k-1}`.
pub fn sequence_a(len: usize) -> Vec<BigInt> {
    second_order(BigInt::from(2), BigInt::from(3), &BigInt::from(2), len)
}

/// `b_0 = n`, `b_1 = n^2 - 1`, `b_{k+1} = n b_k - b_{k-1}`.
pub fn sequence_b(n: u32, len: usize) -> Vec<BigInt> {
    let n = BigInt::from(n);
    second_order(n.clone(), &n * &n - 1, &n, len)
}

/// The recurrence with the opposite sign convention, `x_{k+1} = x_{k-1} - c x_k`.
pub fn alternative_sign_sequence(x0: BigInt, x1: BigInt, c: &BigInt, len: usize) -> Vec<BigInt> {
    let mut out = vec![x0, x1];
    while out.len() < len {
        let k = out.len();
        let next = &out[k - 2] - c * &out[k - 1];
        out.push(next);
    }
    out.truncate(len);
    out
}

fn second_order(x0: BigInt, x1: BigInt, c: &BigInt, len: usize) -> Vec<BigInt> {
    let mut out = vec![x0, x1];
    while out.len() < len {
        let k = out.len();
        let next = c * &out[k - 1] - &out[k - 2];
        out.push(next);
    }
    out.truncate(len);
    out
}

fn nth_b(n: u32, k: usize) -> BigInt {
    sequence_b(n, k + 1).pop().unwrap()
}

fn letter_coefficient(rule: &LetterRule, l: &Label) -> Result<BigInt> {
    match (rule, l) {
        (LetterRule::Chebyshev(n), Label::Spin(k)) if *k >= 1 => Ok(nth_b(*n, *k as usize - 1)),
        (LetterRule::Group, Label::Group(_)) => Ok(BigInt::one()),
        (LetterRule::Product(a, b), Label::Alt(w)) => {
            let mut c = BigInt::one();
            for (side, x) in w {
                c *= letter_coefficient(if *side == 0 { a } else { b }, x)?;
            }
            Ok(c)
        }
        (LetterRule::Unsupported(msg), _) => Err(Error::Unsupported(format!("{msg}; SNF-only"))),
        _ => Err(Error::Domain(format!("letter {l} does not match its factor"))),
    }
}

/// Image of a class under the rewriting map onto `Z p(e_∅) ⊕ Z p(e_u)`:
/// `p(e_{w u^k}) = a_{k-1} p(e_w)` and `p(e_{w x}) = c(x) p(e_w)` for letters `x` of `G`.
pub fn class_image(model: &WreathModel, c: &OrbitClass) -> Result<[BigInt; 2]> {
    match c {
        OrbitClass::Empty => Ok([BigInt::one(), BigInt::zero()]),
        OrbitClass::U => Ok([BigInt::zero(), BigInt::one()]),
        OrbitClass::Word(Label::Alt(w)) => {
            let mut coef = BigInt::one();
            for (side, x) in w {
                coef *= match (side, x) {
                    (1, Label::Spin(k)) => sequence_a(*k as usize).pop().unwrap(),
                    (0, x) => letter_coefficient(&model.letter_rule, x)?,
                    _ => return Err(Error::Domain(format!("malformed orbit word {c}"))),
                };
            }
            Ok([coef, BigInt::zero()])
        }
        OrbitClass::Word(l) => Err(Error::Domain(format!("malformed orbit word {l}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewriting {
    pub cokernel: Cokernel,
    /// Distinct non-zero relations on `(p(e_∅), p(e_u))`.
    #[serde(with = "crate::json::bigint_matrix")]
    pub residual_presentation: Vec<Vec<BigInt>>,
}

/// Pushes every column of the boundary map through the rewriting map and presents the
/// cokernel on the two generators `p(e_∅)`, `p(e_u)`.
pub fn rewriting_from_delta(model: &WreathModel, delta: &DeltaMatrix) -> Result<Rewriting> {
    let images: Vec<[BigInt; 2]> = delta.rows.iter().map(|c| class_image(model, c)).collect::<Result<_>>()?;
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for j in 0..delta.matrix.cols() {
        let mut r = vec![BigInt::zero(), BigInt::zero()];
        for (i, v) in delta.matrix.column(j) {
            r[0] += v * &images[*i][0];
            r[1] += v * &images[*i][1];
        }
        if !(r[0].is_zero() && r[1].is_zero()) && !rels.contains(&r) {
            rels.push(r);
        }
    }
    rels.sort();
    let m = if rels.is_empty() {
        IntegerMatrix::zeros(2, 0)
    } else {
        IntegerMatrix::from_columns(2, &rels)
    };
    Ok(Rewriting { cokernel: cokernel_invariants(&m), residual_presentation: rels })
}

/// Rewriting cokernel on the window of radius `radius`.
pub fn rewriting_cokernel(model: &WreathModel, radius: usize) -> Result<Rewriting> {
    let delta = assemble_delta(model, radius, radius + 1)?;
    rewriting_from_delta(model, &delta)
}

/// Column reduction of `d` restricted to a chain `c_0, c_1, ..., c_{K+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageLattice {
    /// `x_k` such that the reduced image basis is `e_{c_{k+1}} - x_k e_{c_0}`.
    #[serde(with = "crate::json::bigint_vec")]
    pub observed: Vec<BigInt>,
    /// The recurrence used by the rewriting map.
    #[serde(with = "crate::json::bigint_vec")]
    pub expected: Vec<BigInt>,
    /// The same recurrence with the opposite sign convention.
    #[serde(with = "crate::json::bigint_vec")]
    pub alternative: Vec<BigInt>,
    pub matches: bool,
    pub alternative_matches: bool,
}

fn chain_lattice(
    model: &WreathModel,
    summand: usize,
    chain: &[OrbitClass],
    expected: Vec<BigInt>,
    alternative: Vec<BigInt>,
) -> Result<ImageLattice> {
    let k = chain.len() - 1;
    // rows in order c_{K+1}, ..., c_0
    let row_of = |c: &OrbitClass| chain.iter().position(|x| x == c).map(|i| k - i);
    let mut cols = Vec::new();
    for c in &chain[..k] {
        let img = apply_d(model, &model.summands[summand], c)?;
        let mut col = vec![BigInt::zero(); k + 1];
        for (x, v) in img {
            let r = row_of(&x).ok_or_else(|| Error::Invariant(format!("image of {c} leaves the chain")))?;
            col[r] = v;
        }
        cols.push(col);
    }
    let h = column_hnf(&IntegerMatrix::from_columns(k + 1, &cols));
    let mut observed = vec![BigInt::zero(); k];
    for j in 0..h.cols() {
        let col = h.column(j);
        let pivot = col.iter().position(|x| !x.is_zero()).unwrap_or(k);
        if pivot >= k || !col[pivot].is_one() || col[pivot + 1..k].iter().any(|x| !x.is_zero()) {
            return Err(Error::Invariant(format!("image lattice is not of the form e_(k+1) - x e_0: {col:?}")));
        }
        // pivot row r holds c_{K+1-r}, i.e. index k-1-r in the ε sequence
        observed[k - 1 - pivot] = -col[k].clone();
    }
    let matches = observed == expected;
    let alternative_matches = observed == alternative;
    Ok(ImageLattice { observed, expected, alternative, matches, alternative_matches })
}

/// Image of `d_u` on `E_w = span{e_{w u^k}}` for an orbit word `w` ending in `G`, `k ≤ len`.
pub fn image_lattice_u(model: &WreathModel, w: &OrbitClass, len: usize) -> Result<ImageLattice> {
    let OrbitClass::Word(Label::Alt(base)) = w else {
        return Err(Error::Domain("E_w needs a non-empty word".into()));
    };
    if base.last().map(|x| x.0) != Some(0) {
        return Err(Error::Domain("E_w needs a word ending in G".into()));
    }
    let chain: Vec<OrbitClass> = (0..=len as u32)
        .map(|l| {
            let mut v = base.clone();
            if l > 0 {
                v.push((1, Label::Spin(l)));
            }
            OrbitClass::Word(Label::Alt(v))
        })
        .collect();
    let s = model.summands.iter().position(|s| s.kind == SummandKind::Su).unwrap();
    let alt = alternative_sign_sequence(BigInt::from(2), BigInt::from(3), &BigInt::from(2), len);
    chain_lattice(model, s, &chain, sequence_a(len), alt)
}

/// Image of `d_v` for a Chebyshev fundamental of `G` on `span{e_{w v^k}}`, where `w` is empty
/// or ends in `SU_q(2)`.
pub fn image_lattice_fundamental(model: &WreathModel, index: usize, w: &OrbitClass, len: usize) -> Result<ImageLattice> {
    let s = model
        .summands
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind == SummandKind::Base)
        .nth(index)
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Domain(format!("no fundamental with index {index}")))?;
    let LetterRule::Chebyshev(n) = model.letter_rule else {
        return Err(Error::Unsupported("image lattice check needs a single Chebyshev factor".into()));
    };
    let base: Vec<(u8, Label)> = match w {
        OrbitClass::Empty => vec![],
        OrbitClass::Word(Label::Alt(v)) if v.last().map(|x| x.0) == Some(1) => v.clone(),
        _ => return Err(Error::Domain("the chain needs w empty or ending in SU_q(2)".into())),
    };
    let chain: Vec<OrbitClass> = (0..=len as u32)
        .map(|l| {
            let mut v = base.clone();
            if l > 0 {
                v.push((0, Label::Spin(l)));
            }
            if v.is_empty() {
                OrbitClass::Empty
            } else {
                OrbitClass::Word(Label::Alt(v))
            }
        })
        .collect();
    let nb = BigInt::from(n);
    let alt = alternative_sign_sequence(nb.clone(), &nb * &nb - 1, &nb, len);
    chain_lattice(model, s, &chain, sequence_b(n, len), alt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;
    use crate::ring::FusionRing;

    fn model(s: &str) -> WreathModel {
        WreathModel::new(&parse_spec(s).unwrap()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn sequences() {
        assert_eq!(sequence_a(5), ints(&[2, 3, 4, 5, 6]));
        assert_eq!(sequence_b(3, 4), ints(&[3, 8, 21, 55]));
        let alt = alternative_sign_sequence(BigInt::from(2), BigInt::from(3), &BigInt::from(2), 3);
        assert_eq!(alt, ints(&[2, 3, -4]));
    }

    #[test]
    fn residual_relation() {
        let m = model("wreath(O+(3))");
        let r = rewriting_cokernel(&m, 4).unwrap();
        assert_eq!(r.residual_presentation, vec![ints(&[-2, 2]), ints(&[2, -2])]);
        assert_eq!(r.cokernel.to_string(), "Z + Z/2");
        assert!(rewriting_cokernel(&model("wreath(U+(2))"), 2).is_err());
    }

    #[test]
    fn lattices() {
        let m = model("wreath(O+(3))");
        let w = OrbitClass::Word(m.ambient.parse("v1").unwrap());
        let a = image_lattice_u(&m, &w, 6).unwrap();
        assert_eq!(a.observed, ints(&[2, 3, 4, 5, 6, 7]));
        assert!(a.matches && !a.alternative_matches);
        let b = image_lattice_fundamental(&m, 0, &OrbitClass::Empty, 4).unwrap();
        assert_eq!(b.observed, ints(&[3, 8, 21, 55]));
        assert!(b.matches);
    }
}
