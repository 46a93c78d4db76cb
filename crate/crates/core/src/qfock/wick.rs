//! Field operators, Wick words (left and right) and their compressed matrices.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qfock::{q_number, FockSpace, FockVector, TensorWord};
use crate::scalar::{format_rational, Rational, Scalar};

impl<S: Scalar> FockSpace<S> {
    /// `W(ξ) = a*(ξ) + a(ξ)`, exact on any finite vector.
    pub fn field_apply(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        self.create_raw(xi, v) + self.annihilate_raw(xi, v)
    }

    /// `W_r(ξ) = a_r*(ξ) + a_r(ξ)`.
    pub fn right_field_apply(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        self.right_create_raw(xi, v) + self.right_annihilate_raw(xi, v)
    }

    fn wick_word_apply(&self, u: &TensorWord, v: &FockVector<S>, memo: &mut HashMap<TensorWord, FockVector<S>>) -> FockVector<S> {
        if u.is_empty() {
            return v.clone();
        }
        if let Some(r) = memo.get(u) {
            return r.clone();
        }
        // W(e_i ⊗ u') = W(e_i) W(u') - Σ_k q^{k-1} ⟨e_i, u'_k⟩ W(u' without k)
        let i = u.letters()[0];
        let rest = u.remove(0);
        let mut out = self.field_apply(&self.unit(i as usize), &self.wick_word_apply(&rest, v, memo));
        for (k, &j) in rest.letters().iter().enumerate() {
            if j == i {
                out -= &self.wick_word_apply(&rest.remove(k), v, memo).scale(&self.q().powi(k as u32));
            }
        }
        memo.insert(u.clone(), out.clone());
        out
    }

    fn right_wick_word_apply(
        &self,
        u: &TensorWord,
        v: &FockVector<S>,
        memo: &mut HashMap<TensorWord, FockVector<S>>,
    ) -> FockVector<S> {
        if u.is_empty() {
            return v.clone();
        }
        if let Some(r) = memo.get(u) {
            return r.clone();
        }
        // W_r(u' ⊗ e_i) = W_r(e_i) W_r(u') - Σ_k q^{|u'|-k} ⟨e_i, u'_k⟩ W_r(u' without k)
        let n = u.len() - 1;
        let i = u.letters()[n];
        let rest = u.remove(n);
        let mut out = self.right_field_apply(&self.unit(i as usize), &self.right_wick_word_apply(&rest, v, memo));
        for (k, &j) in rest.letters().iter().enumerate() {
            if j == i {
                out -= &self.right_wick_word_apply(&rest.remove(k), v, memo).scale(&self.q().powi((n - 1 - k) as u32));
            }
        }
        memo.insert(u.clone(), out.clone());
        out
    }

    /// `W(s)v` for a symbol `s` (extended linearly from words).
    pub fn wick_apply(&self, symbol: &FockVector<S>, v: &FockVector<S>) -> FockVector<S> {
        let mut memo = HashMap::new();
        let mut out = FockVector::zero();
        for (u, c) in symbol.terms() {
            out += &self.wick_word_apply(u, v, &mut memo).scale(c);
        }
        out
    }

    /// `W_r(s)v`, the right Wick word with `W_r(s)Ω = s`.
    pub fn right_wick_apply(&self, symbol: &FockVector<S>, v: &FockVector<S>) -> FockVector<S> {
        let mut memo = HashMap::new();
        let mut out = FockVector::zero();
        for (u, c) in symbol.terms() {
            out += &self.right_wick_word_apply(u, v, &mut memo).scale(c);
        }
        out
    }

    pub fn field_matrix(&self, xi: &[S]) -> OperatorMatrix<S> {
        OperatorMatrix::from_fn(self, |w| self.field_apply(xi, w))
    }

    pub fn wick_matrix(&self, u: &TensorWord) -> Result<OperatorMatrix<S>> {
        self.check_word(u)?;
        let s = FockVector::basis(u.clone());
        Ok(OperatorMatrix::from_fn(self, |w| self.wick_apply(&s, w)))
    }

    pub fn right_wick_matrix(&self, u: &TensorWord) -> Result<OperatorMatrix<S>> {
        self.check_word(u)?;
        let s = FockVector::basis(u.clone());
        Ok(OperatorMatrix::from_fn(self, |w| self.right_wick_apply(&s, w)))
    }

    /// Words `u`, `|u| <= max_len`, violating `W(u)Ω = u` (left) or
    /// `W_r(u)Ω = u` (right).
    pub fn wick_defect(&self, max_len: usize, right: bool) -> Vec<TensorWord> {
        let omega = FockVector::vacuum();
        self.basis(max_len)
            .into_iter()
            .filter(|u| {
                let s = FockVector::basis(u.clone());
                let got = if right { self.right_wick_apply(&s, &omega) } else { self.wick_apply(&s, &omega) };
                got != s
            })
            .collect()
    }

    /// Basis pairs `(u, v)` of degree `< N` with
    /// `⟨a*(ξ)u, v⟩_q != ⟨u, a(ξ)v⟩_q`.
    pub fn adjointness_defects(&self, xi: &[S]) -> Result<Vec<(TensorWord, TensorWord)>> {
        let words = self.basis(self.truncation().saturating_sub(1));
        let top = self.basis(self.truncation());
        let mut out = Vec::new();
        for u in &words {
            let bu = FockVector::basis(u.clone());
            let cu = self.create_raw(xi, &bu);
            for v in top.iter().filter(|v| v.len() == u.len() + 1) {
                let bv = FockVector::basis(v.clone());
                if self.inner(&cu, &bv)? != self.inner(&bu, &self.annihilate_raw(xi, &bv))? {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Basis words `w` of degree `< N` violating
    /// `a(ξ)a*(η)w - q a*(η)a(ξ)w = ⟨ξ, η⟩ w`.
    pub fn qccr_defects(&self, xi: &[S], eta: &[S]) -> Vec<TensorWord> {
        let pairing = xi.iter().zip(eta).fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone());
        self.basis(self.truncation().saturating_sub(1))
            .into_iter()
            .filter(|w| {
                let v = FockVector::basis(w.clone());
                let lhs = self.annihilate_raw(xi, &self.create_raw(eta, &v))
                    - self.create_raw(eta, &self.annihilate_raw(xi, &v)).scale(self.q());
                lhs != v.scale(&pairing)
            })
            .collect()
    }

    /// Basis pairs of degree `< N` with `⟨W(ξ)u, v⟩_q != ⟨u, W(ξ)v⟩_q`.
    pub fn field_symmetry_defects(&self, xi: &[S]) -> Result<Vec<(TensorWord, TensorWord)>> {
        let words = self.basis(self.truncation().saturating_sub(1));
        let mut out = Vec::new();
        for u in &words {
            let bu = FockVector::basis(u.clone());
            let wu = self.field_apply(xi, &bu);
            for v in words.iter().filter(|v| v.len().abs_diff(u.len()) == 1) {
                let bv = FockVector::basis(v.clone());
                if self.inner(&wu, &bv)? != self.inner(&bu, &self.field_apply(xi, &bv))? {
                    out.push((u.clone(), v.clone()));
                }
            }
        }
        Ok(out)
    }
}

/// An operator compressed to the degree `<= N` subspace, stored as the
/// images of the basis words.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S> {
    basis: Vec<TensorWord>,
    index: HashMap<TensorWord, usize>,
    truncation: usize,
    columns: Vec<FockVector<S>>,
}

impl<S: Scalar> OperatorMatrix<S> {
    /// Compression of the linear map `f` (given on basis vectors).
    pub fn from_fn(space: &FockSpace<S>, f: impl Fn(&FockVector<S>) -> FockVector<S>) -> Self {
        let n = space.truncation();
        let basis = space.basis(n);
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let columns = basis.iter().map(|w| f(&FockVector::basis(w.clone())).compress(n)).collect();
        OperatorMatrix { basis, index, truncation: n, columns }
    }

    pub fn identity(space: &FockSpace<S>) -> Self {
        Self::from_fn(space, |w| w.clone())
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[TensorWord] {
        &self.basis
    }

    pub fn column(&self, w: &TensorWord) -> Option<&FockVector<S>> {
        self.index.get(w).map(|&i| &self.columns[i])
    }

    pub fn entry(&self, row: &TensorWord, col: &TensorWord) -> S {
        self.column(col).map_or_else(S::zero, |c| c.coeff(row))
    }

    /// Applies the compression; components of `v` above the truncation are
    /// ignored.
    pub fn apply(&self, v: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            if let Some(&i) = self.index.get(w) {
                out += &self.columns[i].scale(c);
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        OperatorMatrix { basis: self.basis.clone(), index: self.index.clone(), truncation: self.truncation, columns }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let columns = self.columns.iter().zip(&other.columns).map(|(a, b)| a.clone() - b.clone()).collect();
        OperatorMatrix { basis: self.basis.clone(), index: self.index.clone(), truncation: self.truncation, columns }
    }

    /// Columns for inputs of degree `<= max_degree` on which the two
    /// operators differ.
    pub fn differences(&self, other: &Self, max_degree: usize) -> Vec<TensorWord> {
        self.basis
            .iter()
            .zip(self.columns.iter().zip(&other.columns))
            .filter(|(w, (a, b))| w.len() <= max_degree && a != b)
            .map(|(w, _)| w.clone())
            .collect()
    }

    /// Largest `|entry|` over columns of degree `<= max_degree`.
    pub fn max_abs(&self, max_degree: usize) -> f64 {
        self.basis
            .iter()
            .zip(&self.columns)
            .filter(|(w, _)| w.len() <= max_degree)
            .map(|(_, c)| c.max_abs())
            .fold(0.0, f64::max)
    }

    /// Dense row-major CSV; the header and first column carry the basis
    /// words.
    pub fn to_csv_with(&self, fmt: impl Fn(&S) -> String) -> String {
        let mut out = String::from("word");
        for w in &self.basis {
            out.push(',');
            out.push_str(&w.to_string());
        }
        out.push('\n');
        for r in &self.basis {
            out.push_str(&r.to_string());
            for c in &self.columns {
                out.push(',');
                out.push_str(&fmt(&c.coeff(r)));
            }
            out.push('\n');
        }
        out
    }
}

impl OperatorMatrix<Rational> {
    /// Entries written as `num/den`.
    pub fn to_csv(&self) -> String {
        self.to_csv_with(format_rational)
    }
}

/// The Jacobi matrix of `W(e)` on `span{e^{⊗n} : n <= N}` in the normalised
/// basis: tridiagonal with off-diagonal entries `√[n]_q`.
pub fn jacobi_matrix(q: f64, n: usize) -> Result<DMatrix<f64>> {
    if q.abs() >= 1.0 {
        return Err(Error::Precondition(format!("need |q| < 1, got {q}")));
    }
    let mut j = DMatrix::zeros(n + 1, n + 1);
    for k in 0..n {
        let b = q_number(&q, k + 1).sqrt();
        j[(k, k + 1)] = b;
        j[(k + 1, k)] = b;
    }
    Ok(j)
}
