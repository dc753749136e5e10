use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::dense::{smith_normal_form, Cokernel, IntegerMatrix};

/// Sparse integer matrix stored by columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, BigInt)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize) -> Self {
        Self { rows, cols: Vec::new() }
    }

    /// Appends a column; duplicate row indices are summed and zeros dropped.
    pub fn push_column(&mut self, entries: impl IntoIterator<Item = (usize, BigInt)>) {
        let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
        for (r, v) in entries {
            assert!(r < self.rows, "row index {r} out of range {}", self.rows);
            *acc.entry(r).or_default() += v;
        }
        self.cols.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.cols[j]
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols.len());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                m[(*i, j)] = v.clone();
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            for (i, v) in col {
                out[*i] += v * &x[j];
            }
        }
        out
    }

    /// Schur-complement elimination on unit pivots, chosen by a Markowitz-style rule.
    /// With `track_kernel` the pivot rows are kept so kernel vectors can be lifted back.
    pub fn eliminate(&self, track_kernel: bool) -> Elimination {
        let n = self.cols.len();
        let mut rows: Vec<HashMap<usize, BigInt>> = vec![HashMap::new(); self.rows];
        let mut cols: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i].insert(j, v.clone());
                cols[j].insert(*i);
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..n).filter(|&j| !cols[j].is_empty()).map(|j| Reverse((cols[j].len(), j))).collect();
        let mut col_alive = vec![true; n];
        let mut row_alive = vec![true; self.rows];
        let mut pivots: Vec<Pivot> = Vec::new();
        let mut stuck: HashSet<usize> = HashSet::new();
        while let Some(Reverse((cnt, c))) = heap.pop() {
            if !col_alive[c] || cols[c].is_empty() {
                continue;
            }
            if cnt != cols[c].len() {
                heap.push(Reverse((cols[c].len(), c)));
                continue;
            }
            let r = cols[c]
                .iter()
                .filter(|&&i| rows[i][&c].abs().is_one())
                .min_by_key(|&&i| (rows[i].len(), i))
                .copied();
            let Some(r) = r else {
                stuck.insert(c);
                continue;
            };
            let p = rows[r][&c].clone();
            let pivot_row: Vec<(usize, BigInt)> = rows[r].iter().map(|(k, v)| (*k, v.clone())).collect();
            let others: Vec<usize> = cols[c].iter().copied().filter(|&i| i != r).collect();
            let mut touched: HashSet<usize> = HashSet::new();
            for i in others {
                // row_i -= (a_ic / p) * row_r, and 1/p = p for p = ±1
                let f = &rows[i][&c] * &p;
                for (k, v) in &pivot_row {
                    let delta = v * &f;
                    let e = rows[i].entry(*k).or_insert_with(BigInt::zero);
                    *e -= delta;
                    if e.is_zero() {
                        rows[i].remove(k);
                        cols[*k].remove(&i);
                    } else {
                        cols[*k].insert(i);
                    }
                    touched.insert(*k);
                }
            }
            for (k, _) in &pivot_row {
                cols[*k].remove(&r);
                touched.insert(*k);
            }
            rows[r].clear();
            row_alive[r] = false;
            col_alive[c] = false;
            cols[c].clear();
            for k in touched {
                if col_alive[k] && !cols[k].is_empty() {
                    stuck.remove(&k);
                    heap.push(Reverse((cols[k].len(), k)));
                }
            }
            pivots.push(Pivot {
                col: c,
                unit: p,
                row: if track_kernel {
                    pivot_row.into_iter().filter(|(k, _)| *k != c).collect()
                } else {
                    Vec::new()
                },
            });
        }
        let rest_rows: Vec<usize> = (0..self.rows).filter(|&i| row_alive[i]).collect();
        let rest_cols: Vec<usize> = (0..n).filter(|&j| col_alive[j]).collect();
        let row_pos: HashMap<usize, usize> = rest_rows.iter().enumerate().map(|(a, b)| (*b, a)).collect();
        let mut residual = IntegerMatrix::zeros(rest_rows.len(), rest_cols.len());
        for (b, &j) in rest_cols.iter().enumerate() {
            for &i in &cols[j] {
                residual[(row_pos[&i], b)] = rows[i][&j].clone();
            }
        }
        Elimination { rows: self.rows, cols: n, pivots, residual, residual_rows: rest_rows, residual_cols: rest_cols }
    }

    pub fn rank(&self) -> usize {
        self.eliminate(false).rank()
    }

    pub fn cokernel(&self) -> Cokernel {
        self.eliminate(false).cokernel()
    }
}

#[derive(Clone, Debug)]
struct Pivot {
    col: usize,
    unit: BigInt,
    /// Pivot row at elimination time, without the pivot entry.
    row: Vec<(usize, BigInt)>,
}

/// Result of [`SparseMatrix::eliminate`]: a list of unit pivots and the dense residual
/// block on the surviving rows and columns. The cokernel of the original matrix is the
/// cokernel of the residual.
#[derive(Clone, Debug)]
pub struct Elimination {
    rows: usize,
    cols: usize,
    pivots: Vec<Pivot>,
    pub residual: IntegerMatrix,
    pub residual_rows: Vec<usize>,
    pub residual_cols: Vec<usize>,
}

impl Elimination {
    pub fn unit_pivots(&self) -> usize {
        self.pivots.len()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len() + smith_normal_form(&self.residual).rank
    }

    pub fn cokernel(&self) -> Cokernel {
        let f = super::dense::smith_factors(&self.residual);
        Cokernel::from_factors(self.residual.rows(), &f)
    }

    /// A saturated basis of the kernel, as dense vectors over the original columns.
    /// Requires elimination with kernel tracking.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let k = super::dense::integer_kernel(&self.residual);
        let mut out = Vec::with_capacity(k.cols());
        for j in 0..k.cols() {
            let mut x = vec![BigInt::zero(); self.cols];
            for (b, &c) in self.residual_cols.iter().enumerate() {
                x[c] = k[(b, j)].clone();
            }
            for p in self.pivots.iter().rev() {
                // p·x_c + Σ a_k x_k = 0  ⇒  x_c = -p · Σ a_k x_k
                let s: BigInt = p.row.iter().map(|(k, v)| v * &x[*k]).sum();
                x[p.col] = -(&p.unit * s);
            }
            out.push(x);
        }
        let _ = self.rows;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::{cokernel_invariants, smith_normal_form};
    use proptest::prelude::*;

    fn sparse_of(a: &IntegerMatrix) -> SparseMatrix {
        let mut s = SparseMatrix::new(a.rows());
        for j in 0..a.cols() {
            s.push_column((0..a.rows()).map(|i| (i, a[(i, j)].clone())));
        }
        s
    }

    #[test]
    fn chain_of_units() {
        // d(e_i) = e_{i+1} - e_i on a path: cokernel Z, kernel 0
        let n = 50;
        let mut s = SparseMatrix::new(n + 1);
        for i in 0..n {
            s.push_column([(i + 1, BigInt::one()), (i, -BigInt::one())]);
        }
        assert_eq!(s.cokernel(), Cokernel { free_rank: 1, torsion: vec![] });
        assert_eq!(s.rank(), n);
        assert!(s.eliminate(true).kernel_basis().is_empty());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn agrees_with_dense(r in 1usize..=8, c in 1usize..=8, seed in proptest::collection::vec(-3i64..=3, 64)) {
            let rows: Vec<Vec<i64>> = (0..r).map(|i| (0..c).map(|j| {
                let v = seed[(i * 8 + j) % 64];
                if (i + 2 * j) % 3 == 0 { 0 } else { v }
            }).collect()).collect();
            let a = IntegerMatrix::from_rows(&rows);
            let s = sparse_of(&a);
            let e = s.eliminate(true);
            prop_assert_eq!(e.cokernel(), cokernel_invariants(&a));
            prop_assert_eq!(e.rank(), smith_normal_form(&a).rank);
            let k = e.kernel_basis();
            prop_assert_eq!(k.len(), c - e.rank());
            for v in &k {
                prop_assert!(s.mul_vec(v).iter().all(Zero::is_zero));
            }
            if !k.is_empty() {
                let km = IntegerMatrix::from_columns(c, &k);
                // saturated iff the cokernel of the basis inclusion is free
                prop_assert!(cokernel_invariants(&km).torsion.is_empty());
            }
        }
    }
}
