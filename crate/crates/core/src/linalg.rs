//! Exact linear algebra over a field (rank, kernels, solves, LDLᵀ pivots).
//!
//! All routines pivot on exact non-zeroness, so they are meant for exact
//! scalars.  Floating-point spectra go through `nalgebra` instead.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
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
                        out[(i, j)] += a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(piv) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = S::one() / m[(r, c)].clone();
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = m[(r, j)].clone() * f.clone();
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(self.cols, &pivots, |i, j| r[(i, j)].clone())
    }

    /// Solves `A X = B` for square invertible `A`.
    pub fn solve(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        let aug = Self::from_fn(n, n + rhs.cols, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - n)].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, rhs.cols, |i, j| r[(i, n + j)].clone()))
    }

    pub fn inverse(&self) -> Option<Self> {
        self.solve(&Self::identity(self.rows))
    }

    /// Pivots of the LDLᵀ factorization of a symmetric matrix without
    /// pivoting.  All pivots are strictly positive iff the matrix is positive
    /// definite; `None` signals a zero pivot (not definite).
    pub fn ldl_pivots(&self) -> Option<Vec<S>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut pivots = Vec::with_capacity(n);
        for k in 0..n {
            let d = a[(k, k)].clone();
            if d.is_zero() {
                return None;
            }
            for i in k + 1..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone() / d.clone();
                for j in k + 1..n {
                    if a[(k, j)].is_zero() {
                        continue;
                    }
                    let v = f.clone() * a[(k, j)].clone();
                    a[(i, j)] -= v;
                }
            }
            pivots.push(d);
        }
        Some(pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

fn nullspace_from_rref<S: Scalar>(
    cols: usize,
    pivots: &[usize],
    entry: impl Fn(usize, usize) -> S,
) -> Vec<Vec<S>> {
    let mut is_pivot = vec![false; cols];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![S::zero(); cols];
            v[f] = S::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -entry(r, f);
            }
            v
        })
        .collect()
}

/// Incremental sparse RREF, for large sparse systems with small integer
/// entries (commutation equations on a ball of words).
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<S> {
    cols: usize,
    /// pivot column -> fully reduced row with a unit entry at the pivot.
    rows: BTreeMap<usize, BTreeMap<usize, S>>,
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns true when it increased the rank.
    pub fn push(&mut self, mut row: BTreeMap<usize, S>) -> bool {
        row.retain(|_, v| !v.is_zero());
        // reduce against existing pivots
        let hits: Vec<usize> = row.keys().filter(|c| self.rows.contains_key(c)).copied().collect();
        for c in hits {
            let Some(f) = row.get(&c).cloned() else { continue };
            let prow = &self.rows[&c];
            for (j, v) in prow {
                let e = row.entry(*j).or_insert_with(S::zero);
                *e -= f.clone() * v.clone();
            }
            row.retain(|_, v| !v.is_zero());
        }
        let Some((&pc, pv)) = row.iter().find(|(c, _)| !self.rows.contains_key(c)) else {
            return false;
        };
        let inv = S::one() / pv.clone();
        for v in row.values_mut() {
            *v = v.clone() * inv.clone();
        }
        // keep the other rows reduced in the new pivot column
        for prow in self.rows.values_mut() {
            if let Some(f) = prow.get(&pc).cloned() {
                for (j, v) in &row {
                    let e = prow.entry(*j).or_insert_with(S::zero);
                    *e -= f.clone() * v.clone();
                }
                prow.retain(|_, v| !v.is_zero());
            }
        }
        self.rows.insert(pc, row);
        true
    }

    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let rows: Vec<&BTreeMap<usize, S>> = self.rows.values().collect();
        nullspace_from_rref(self.cols, &pivots, |r, f| rows[r].get(&f).cloned().unwrap_or_else(S::zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rational(x, 1)).collect()).collect())
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(|x| x == &Rational::from_integer(0.into())));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn ldl_detects_definiteness() {
        let pd = m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        let piv = pd.ldl_pivots().unwrap();
        assert!(piv.iter().all(|d| d > &Rational::from_integer(0.into())));
        let indefinite = m(&[&[1, 2], &[2, 1]]);
        let piv = indefinite.ldl_pivots().unwrap();
        assert!(piv.iter().any(|d| d < &Rational::from_integer(0.into())));
    }

    #[test]
    fn sparse_matches_dense() {
        let a = m(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[1, 0, -1, 0], &[0, 0, 0, 0]]);
        let mut sp = SparseEchelon::new(4);
        for i in 0..a.rows() {
            sp.push(a.row(i).iter().cloned().enumerate().collect());
        }
        assert_eq!(sp.rank(), a.rank());
        for v in sp.nullspace() {
            assert!(a.mul_vec(&v).iter().all(|x| *x == Rational::from_integer(0.into())));
        }
        assert_eq!(sp.nullspace().len(), 2);
    }
}
