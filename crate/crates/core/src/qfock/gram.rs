//! Gram matrices of `P_q^n` in the tensor-word basis.
//!
//! `P_q^n` only permutes letters, so it is block diagonal with one block per
//! letter content.  Blocks are built once and then shared read-only.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::qfock::{FockSpace, FockVector, TensorWord};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct GramBlock<S> {
    pub words: Vec<TensorWord>,
    pub matrix: Matrix<S>,
}

/// Per-degree Gram blocks of `P_q^n`, `n <= N`.
#[derive(Clone, Debug)]
pub struct QGramCache<S> {
    d: usize,
    degrees: Vec<BTreeMap<Vec<usize>, GramBlock<S>>>,
}

impl<S: Scalar> QGramCache<S> {
    pub fn build(space: &FockSpace<S>) -> Result<Self> {
        let d = space.dim();
        let degrees = (0..=space.truncation())
            .into_par_iter()
            .map(|n| {
                let mut by_content: BTreeMap<Vec<usize>, Vec<TensorWord>> = BTreeMap::new();
                for w in space.words(n) {
                    by_content.entry(w.content(d)).or_default().push(w);
                }
                let mut memo = HashMap::new();
                by_content
                    .into_iter()
                    .map(|(c, words)| {
                        let cols: Vec<FockVector<S>> = words.iter().map(|w| space.pq_word(w, &mut memo)).collect();
                        let matrix = Matrix::from_fn(words.len(), words.len(), |i, j| cols[j].coeff(&words[i]));
                        (c, GramBlock { words, matrix })
                    })
                    .collect()
            })
            .collect();
        Ok(QGramCache { d, degrees })
    }

    pub fn truncation(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn blocks(&self, n: usize) -> impl Iterator<Item = &GramBlock<S>> {
        self.degrees[n].values()
    }

    /// The full matrix of `P_q^n` on [`FockSpace::words`]`(n)`.
    pub fn matrix(&self, n: usize) -> Matrix<S> {
        let words: Vec<TensorWord> = {
            let mut w: Vec<_> = self.degrees[n].values().flat_map(|b| b.words.iter().cloned()).collect();
            w.sort();
            w
        };
        let index: HashMap<&TensorWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(words.len(), words.len());
        for b in self.degrees[n].values() {
            for (i, u) in b.words.iter().enumerate() {
                for (j, v) in b.words.iter().enumerate() {
                    m[(index[u], index[v])] = b.matrix[(i, j)].clone();
                }
            }
        }
        m
    }

    /// `⟨u, v⟩_q` through the cached blocks.
    pub fn inner(&self, u: &FockVector<S>, v: &FockVector<S>) -> S {
        let mut acc = S::zero();
        for (n, blocks) in self.degrees.iter().enumerate() {
            let (un, vn) = (u.project_degree(n), v.project_degree(n));
            if un.is_zero() || vn.is_zero() {
                continue;
            }
            for b in blocks.values() {
                let uc: Vec<S> = b.words.iter().map(|w| un.coeff(w)).collect();
                let vc: Vec<S> = b.words.iter().map(|w| vn.coeff(w)).collect();
                if vc.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let gv = b.matrix.mul_vec(&vc);
                for (x, y) in uc.iter().zip(gv) {
                    acc += x.conj() * y;
                }
            }
        }
        acc
    }

    /// All blocks of degree `n` are symmetric.
    pub fn is_symmetric(&self, n: usize) -> bool {
        self.degrees[n].values().all(|b| b.matrix == b.matrix.transpose())
    }

    /// Exact positivity: every LDLᵀ pivot of every block is positive.
    pub fn is_positive_definite(&self, n: usize) -> bool {
        self.degrees[n].values().all(|b| match b.matrix.ldl_pivots() {
            Some(p) => p.iter().all(|x| x.to_f64() > 0.0),
            None => false,
        })
    }

    /// Smallest eigenvalue of `P_q^n`, in floating point.
    pub fn min_eigenvalue(&self, n: usize) -> f64 {
        self.degrees[n]
            .values()
            .map(|b| b.matrix.to_f64().symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn dim(&self) -> usize {
        self.d
    }
}
