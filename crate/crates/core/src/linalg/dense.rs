use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * f;
            if !v.is_zero() {
                self.data[dst * self.cols + c] += v;
            }
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if f.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * f;
            if !v.is_zero() {
                self.data[r * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = &mut self.data[r * self.cols + c];
            *v = -std::mem::take(v);
        }
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    /// The non-zero diagonal entries, positive and each dividing the next.
    pub factors: Vec<BigInt>,
    pub rank: usize,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub d: IntegerMatrix,
}

struct Transforms {
    u: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
}

impl Transforms {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, f);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, f);
        }
    }
    fn negate_row(&mut self, r: usize) {
        if let Some(u) = &mut self.u {
            u.negate_row(r);
        }
    }
}

/// Smith normal form with unimodular certificates.
pub fn smith_normal_form(a: &IntegerMatrix) -> SmithForm {
    let (d, t) = smith_reduce(a, true);
    let rank = (0..a.rows.min(a.cols)).take_while(|&i| !d[(i, i)].is_zero()).count();
    let factors = (0..rank).map(|i| d[(i, i)].clone()).collect();
    SmithForm { factors, rank, u: t.u.unwrap(), v: t.v.unwrap(), d }
}

/// Invariant factors only (no certificates).
pub fn smith_factors(a: &IntegerMatrix) -> Vec<BigInt> {
    let (d, _) = smith_reduce(a, false);
    (0..a.rows.min(a.cols)).map(|i| d[(i, i)].clone()).take_while(|x| !x.is_zero()).collect()
}

fn smith_reduce(a: &IntegerMatrix, certify: bool) -> (IntegerMatrix, Transforms) {
    let mut m = a.clone();
    let mut t = Transforms {
        u: certify.then(|| IntegerMatrix::identity(a.rows)),
        v: certify.then(|| IntegerMatrix::identity(a.cols)),
    };
    let (rows, cols) = (m.rows, m.cols);
    let mut k = 0;
    while k < rows.min(cols) {
        // minimal-absolute-value pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let x = &m[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap_rows(k, pi);
        t.swap_rows(k, pi);
        m.swap_cols(k, pj);
        t.swap_cols(k, pj);
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let q = m[(i, k)].div_floor(&m[(k, k)]);
                let nq = -q;
                m.add_row(i, k, &nq);
                t.add_row(i, k, &nq);
                if !m[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if m[(k, j)].is_zero() {
                    continue;
                }
                let q = m[(k, j)].div_floor(&m[(k, k)]);
                let nq = -q;
                m.add_col(j, k, &nq);
                t.add_col(j, k, &nq);
                if !m[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column k onto the pivot
                let mut best = (k, k);
                for i in k + 1..rows {
                    if !m[(i, k)].is_zero() && m[(i, k)].abs() < m[best].abs() {
                        best = (i, k);
                    }
                }
                for j in k + 1..cols {
                    if !m[(k, j)].is_zero() && m[(k, j)].abs() < m[best].abs() {
                        best = (k, j);
                    }
                }
                m.swap_rows(k, best.0);
                t.swap_rows(k, best.0);
                m.swap_cols(k, best.1);
                t.swap_cols(k, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = m[(k, k)].clone();
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !m[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row(k, i, &one);
                    t.add_row(k, i, &one);
                }
                None => break,
            }
        }
        if m[(k, k)].is_negative() {
            m.negate_row(k);
            t.negate_row(k);
        }
        k += 1;
    }
    (m, t)
}

/// `coker(A : Z^cols → Z^rows) ≅ Z^free_rank ⊕ ⊕ Z/torsion_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cokernel {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    #[serde(with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl Cokernel {
    pub fn from_factors(rows: usize, factors: &[BigInt]) -> Self {
        Self {
            free_rank: rows - factors.len(),
            torsion: factors.iter().filter(|f| !f.is_one()).cloned().collect(),
        }
    }
}

impl fmt::Display for Cokernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel_invariants(a: &IntegerMatrix) -> Cokernel {
    Cokernel::from_factors(a.rows, &smith_factors(a))
}

/// A basis of `ker A`, as the columns of the returned matrix. The basis is saturated.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    // column echelon form by unimodular column operations, tracking only the column transform
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut v = IntegerMatrix::identity(cols);
    let mut next = 0;
    for r in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in next..cols {
                if !m[(r, j)].is_zero() && best.is_none_or(|b| m[(r, j)].abs() < m[(r, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            m.swap_cols(next, b);
            v.swap_cols(next, b);
            let mut done = true;
            for j in next + 1..cols {
                if m[(r, j)].is_zero() {
                    continue;
                }
                let q = m[(r, j)].div_floor(&m[(r, next)]);
                m.add_col(j, next, &-&q);
                v.add_col(j, next, &-&q);
                if !m[(r, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                next += 1;
                break;
            }
        }
    }
    let kernel: Vec<Vec<BigInt>> = (next..cols).map(|j| v.column(j)).collect();
    IntegerMatrix::from_columns(cols, &kernel)
}

/// Column Hermite normal form: a canonical basis of the lattice spanned by the columns.
///
/// Pivot rows increase from left to right, pivots are positive, and entries to the left of
/// a pivot in its row are reduced modulo it. Zero columns are dropped.
pub fn column_hnf(a: &IntegerMatrix) -> IntegerMatrix {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for r in 0..rows {
        if next == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in next..cols {
                if !m[(r, j)].is_zero() && best.is_none_or(|b| m[(r, j)].abs() < m[(r, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            m.swap_cols(next, b);
            let mut done = true;
            for j in next + 1..cols {
                if !m[(r, j)].is_zero() {
                    let q = m[(r, j)].div_floor(&m[(r, next)]);
                    m.add_col(j, next, &-q);
                    if !m[(r, j)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                if m[(r, next)].is_negative() {
                    for i in 0..rows {
                        let v = &mut m[(i, next)];
                        *v = -std::mem::take(v);
                    }
                }
                pivots.push((r, next));
                next += 1;
                break;
            }
        }
    }
    for &(r, c) in &pivots {
        let p = m[(r, c)].clone();
        for j in 0..c {
            let q = m[(r, j)].div_floor(&p);
            if !q.is_zero() {
                m.add_col(j, c, &-q);
            }
        }
    }
    let cols: Vec<Vec<BigInt>> = (0..pivots.len()).map(|j| m.column(j)).collect();
    IntegerMatrix::from_columns(rows, &cols)
}
