//! Truncated q-Fock spaces over `R^d`: the twisted inner product, creation
//! and annihilation operators (left and right), Wick words and quantisation.
//!
//! Vectors are finite maps from tensor words to amplitudes and every
//! operator acts on them exactly, without truncation.  The truncation `N`
//! only enters through [`FockSpace::create`] (which refuses to leave the
//! window) and through matrix representations ([`OperatorMatrix`]), which
//! are compressions to degrees `<= N`.

pub mod gram;
pub mod quantization;
pub mod wick;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use gram::QGramCache;
pub use wick::OperatorMatrix;

/// A simple tensor `e_{i_1} ⊗ ⋯ ⊗ e_{i_n}`; the empty word is the vacuum.
/// Ordered by degree, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TensorWord(Vec<u8>);

impl TensorWord {
    pub fn vacuum() -> Self {
        TensorWord(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Self {
        TensorWord(letters)
    }

    /// `e_i^{⊗n}`.
    pub fn pure(i: u8, n: usize) -> Self {
        TensorWord(vec![i; n])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word with the `k`-th factor (0-based) removed.
    pub fn remove(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(k);
        TensorWord(v)
    }

    pub fn prepend(&self, i: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i);
        v.extend_from_slice(&self.0);
        TensorWord(v)
    }

    pub fn append(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        TensorWord(v)
    }

    /// Letter multiplicities, `d` entries.
    pub fn content(&self, d: usize) -> Vec<usize> {
        let mut c = vec![0; d];
        for &i in &self.0 {
            c[i as usize] += 1;
        }
        c
    }

    pub fn is_pure(&self, i: u8) -> bool {
        self.0.iter().all(|&x| x == i)
    }
}

impl Ord for TensorWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for TensorWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// `e` for the vacuum, otherwise indices joined by `.` (e.g. `0.1.1`).
impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        write!(f, "{}", self.0.iter().join("."))
    }
}

impl fmt::Debug for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorWord({self})")
    }
}

/// Accepts `e`, the empty string, or indices separated by `.` or `,`.
impl FromStr for TensorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" {
            return Ok(TensorWord::vacuum());
        }
        s.split(['.', ','])
            .map(|t| t.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad tensor word {s:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(TensorWord)
    }
}

/// Finite linear combination of tensor words.
#[derive(Clone, PartialEq)]
pub struct FockVector<S> {
    terms: BTreeMap<TensorWord, S>,
}

impl<S: Scalar> FockVector<S> {
    pub fn zero() -> Self {
        FockVector { terms: BTreeMap::new() }
    }

    pub fn vacuum() -> Self {
        Self::basis(TensorWord::vacuum())
    }

    pub fn basis(w: TensorWord) -> Self {
        Self::monomial(w, S::one())
    }

    pub fn monomial(w: TensorWord, c: S) -> Self {
        let mut v = Self::zero();
        v.add_term(w, c);
        v
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (TensorWord, S)>) -> Self {
        let mut v = Self::zero();
        for (w, c) in terms {
            v.add_term(w, c);
        }
        v
    }

    pub fn add_term(&mut self, w: TensorWord, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<TensorWord, S> {
        &self.terms
    }

    pub fn coeff(&self, w: &TensorWord) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FockVector { terms: self.terms.iter().map(|(w, x)| (w.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FockVector<T> {
        FockVector::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn project_degree(&self, n: usize) -> Self {
        FockVector { terms: self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Drops every component of degree above `n`.
    pub fn compress(&self, n: usize) -> Self {
        FockVector { terms: self.terms.iter().filter(|(w, _)| w.len() <= n).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Plain (untwisted) pairing `Σ conj(u_w) v_w`.
    pub fn plain_dot(&self, other: &Self) -> S {
        let (small, large, flip) = if self.len() <= other.len() { (self, other, false) } else { (other, self, true) };
        let mut acc = S::zero();
        for (w, c) in &small.terms {
            if let Some(d) = large.terms.get(w) {
                acc += if flip { d.conj() * c.clone() } else { c.conj() * d.clone() };
            }
        }
        acc
    }

    /// Largest `|amplitude|`, as `f64`.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> Add for FockVector<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl<'a, S: Scalar> AddAssign<&'a FockVector<S>> for FockVector<S> {
    fn add_assign(&mut self, rhs: &'a FockVector<S>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), c.clone());
        }
    }
}

impl<S: Scalar> Sub for FockVector<S> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl<'a, S: Scalar> SubAssign<&'a FockVector<S>> for FockVector<S> {
    fn sub_assign(&mut self, rhs: &'a FockVector<S>) {
        for (w, c) in &rhs.terms {
            self.add_term(w.clone(), -c.clone());
        }
    }
}

impl<S: Scalar> Neg for FockVector<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(&-S::one())
    }
}

impl<S: fmt::Debug> fmt::Debug for FockVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(w, c)| (w.to_string(), c))).finish()
    }
}

/// `[n]_q = 1 + q + ⋯ + q^{n-1}`.
pub fn q_number<S: Scalar>(q: &S, n: usize) -> S {
    let mut acc = S::zero();
    let mut pw = S::one();
    for _ in 0..n {
        acc += pw.clone();
        pw = pw * q.clone();
    }
    acc
}

/// `[n]_q! = Π_{i=1}^n [i]_q`.
pub fn q_factorial<S: Scalar>(q: &S, n: usize) -> S {
    let mut acc = S::one();
    for i in 1..=n {
        acc = acc * q_number(q, i);
    }
    acc
}

/// The q-Fock space over `R^d` truncated at degree `N`.
#[derive(Clone, Debug)]
pub struct FockSpace<S> {
    d: usize,
    truncation: usize,
    q: S,
}

impl<S: Scalar> FockSpace<S> {
    pub fn new(d: usize, truncation: usize, q: S) -> Result<Self> {
        if d == 0 || d > u8::MAX as usize {
            return Err(Error::Precondition(format!("dimension must be in 1..=255, got {d}")));
        }
        if q.abs_f64() >= 1.0 {
            return Err(Error::Precondition(format!("need |q| < 1, got {}", q.to_f64())));
        }
        Ok(FockSpace { d, truncation, q })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    fn qpow(&self, k: usize) -> S {
        self.q.powi(k as u32)
    }

    /// The standard basis vector `e_i` of `R^d`, as coefficients.
    pub fn unit(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.d];
        v[i] = S::one();
        v
    }

    /// All words of degree `n`, lexicographic.
    pub fn words(&self, n: usize) -> Vec<TensorWord> {
        (0..n)
            .map(|_| 0..self.d as u8)
            .multi_cartesian_product()
            .map(TensorWord)
            .collect()
    }

    /// All words of degree `<= n` in basis order.
    pub fn basis(&self, n: usize) -> Vec<TensorWord> {
        (0..=n).flat_map(|k| self.words(k)).collect()
    }

    pub fn check_word(&self, w: &TensorWord) -> Result<()> {
        if w.len() > self.truncation {
            return Err(Error::TruncationOverflow { degree: w.len(), truncation: self.truncation });
        }
        if let Some(&i) = w.letters().iter().find(|&&i| i as usize >= self.d) {
            return Err(Error::Precondition(format!("index {i} out of range for dimension {}", self.d)));
        }
        Ok(())
    }

    pub fn check_vector(&self, v: &FockVector<S>) -> Result<()> {
        v.terms().keys().try_for_each(|w| self.check_word(w))
    }

    fn check_xi(&self, xi: &[S]) -> Result<()> {
        if xi.len() != self.d {
            return Err(Error::Precondition(format!("vector of length {} in dimension {}", xi.len(), self.d)));
        }
        Ok(())
    }

    fn within(&self, v: FockVector<S>) -> Result<FockVector<S>> {
        match v.max_degree() {
            Some(n) if n > self.truncation => Err(Error::TruncationOverflow { degree: n, truncation: self.truncation }),
            _ => Ok(v),
        }
    }

    // -- exact actions on finite vectors (no truncation) --

    pub(crate) fn create_raw(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            for (i, x) in xi.iter().enumerate() {
                if !x.is_zero() {
                    out.add_term(w.prepend(i as u8), x.clone() * c.clone());
                }
            }
        }
        out
    }

    pub(crate) fn annihilate_raw(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            for (k, &i) in w.letters().iter().enumerate() {
                let x = &xi[i as usize];
                if !x.is_zero() {
                    out.add_term(w.remove(k), x.conj() * self.qpow(k) * c.clone());
                }
            }
        }
        out
    }

    pub(crate) fn right_create_raw(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            for (i, x) in xi.iter().enumerate() {
                if !x.is_zero() {
                    out.add_term(w.append(i as u8), x.clone() * c.clone());
                }
            }
        }
        out
    }

    pub(crate) fn right_annihilate_raw(&self, xi: &[S], v: &FockVector<S>) -> FockVector<S> {
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            let n = w.len();
            for (k, &i) in w.letters().iter().enumerate() {
                let x = &xi[i as usize];
                if !x.is_zero() {
                    out.add_term(w.remove(k), x.conj() * self.qpow(n - 1 - k) * c.clone());
                }
            }
        }
        out
    }

    /// `a*(ξ)v = ξ ⊗ v`; fails if the result leaves the truncation.
    pub fn create(&self, xi: &[S], v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_xi(xi)?;
        self.within(self.create_raw(xi, v))
    }

    /// `a(ξ)(e_1⊗⋯⊗e_n) = Σ_i q^{i-1} ⟨ξ, e_i⟩ e_1⊗⋯ê_i⋯⊗e_n`.
    pub fn annihilate(&self, xi: &[S], v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_xi(xi)?;
        Ok(self.annihilate_raw(xi, v))
    }

    /// `a_r*(ξ)v = v ⊗ ξ`.
    pub fn right_create(&self, xi: &[S], v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_xi(xi)?;
        self.within(self.right_create_raw(xi, v))
    }

    /// `a_r(ξ)(e_1⊗⋯⊗e_n) = Σ_i q^{n-i} ⟨ξ, e_i⟩ e_1⊗⋯ê_i⋯⊗e_n`.
    pub fn right_annihilate(&self, xi: &[S], v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_xi(xi)?;
        Ok(self.right_annihilate_raw(xi, v))
    }

    // -- the twisted inner product --

    fn pq_word(&self, w: &TensorWord, memo: &mut HashMap<TensorWord, FockVector<S>>) -> FockVector<S> {
        if w.len() <= 1 {
            return FockVector::basis(w.clone());
        }
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        // the factor moved to the front from position k crosses k others
        let mut out = FockVector::zero();
        for k in 0..w.len() {
            let rest = self.pq_word(&w.remove(k), memo);
            let i = w.letters()[k];
            let weight = self.qpow(k);
            for (u, c) in rest.terms() {
                out.add_term(u.prepend(i), weight.clone() * c.clone());
            }
        }
        memo.insert(w.clone(), out.clone());
        out
    }

    /// `⊕_n P_q^n` applied to `v`, by the recursion
    /// `P_q^n(e_1⊗⋯⊗e_n) = Σ_k q^{k-1} e_k ⊗ P_q^{n-1}(e_1⊗⋯ê_k⋯⊗e_n)`.
    pub fn pq_apply(&self, v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_vector(v)?;
        let mut memo = HashMap::new();
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            out += &self.pq_word(w, &mut memo).scale(c);
        }
        Ok(out)
    }

    /// `P_q^n` by enumerating all `n!` permutations with their inversion
    /// counts.
    pub fn pq_oracle(&self, v: &FockVector<S>) -> Result<FockVector<S>> {
        self.check_vector(v)?;
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            let n = w.len();
            for perm in (0..n).permutations(n) {
                let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
                let word = TensorWord(perm.iter().map(|&k| w.letters()[k]).collect());
                out.add_term(word, self.qpow(inv) * c.clone());
            }
        }
        Ok(out)
    }

    /// `⟨u, v⟩_q = Σ_n ⟨u_n, P_q^n v_n⟩`, conjugate-linear in `u`.
    pub fn inner(&self, u: &FockVector<S>, v: &FockVector<S>) -> Result<S> {
        Ok(u.plain_dot(&self.pq_apply(v)?))
    }

    pub fn norm_sq(&self, v: &FockVector<S>) -> Result<S> {
        self.inner(v, v)
    }

    /// `ξ_1 ⊗ ⋯ ⊗ ξ_n` for coefficient vectors `ξ_i`.
    pub fn tensor(&self, factors: &[&[S]]) -> FockVector<S> {
        let mut v = FockVector::vacuum();
        for xi in factors.iter().rev() {
            v = self.create_raw(xi, &v);
        }
        v
    }

    /// `ξ^{⊗n}`.
    pub fn tensor_power(&self, xi: &[S], n: usize) -> FockVector<S> {
        let mut v = FockVector::vacuum();
        for _ in 0..n {
            v = self.create_raw(xi, &v);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Rational};
    use proptest::prelude::*;

    fn w(s: &str) -> TensorWord {
        s.parse().unwrap()
    }

    fn space(d: usize, n: usize, q: Rational) -> FockSpace<Rational> {
        FockSpace::new(d, n, q).unwrap()
    }

    #[test]
    fn word_basics() {
        assert_eq!(w("e"), TensorWord::vacuum());
        assert_eq!(w("0.1.1").to_string(), "0.1.1");
        assert_eq!(w("0,1"), w("0.1"));
        assert!(w("1") < w("0.0"));
        assert_eq!(w("0.1.2").remove(1), w("0.2"));
        let s = space(2, 3, rational(0, 1));
        assert_eq!(s.words(2), vec![w("0.0"), w("0.1"), w("1.0"), w("1.1")]);
        assert_eq!(s.basis(2).len(), 7);
    }

    #[test]
    fn pq_examples() {
        let q = rational(1, 3);
        let s = space(3, 6, q.clone());
        let v = s.pq_apply(&FockVector::basis(w("0.1"))).unwrap();
        assert_eq!(v, FockVector::from_terms([(w("0.1"), rational(1, 1)), (w("1.0"), q.clone())]));
        assert_eq!(s.pq_apply(&FockVector::basis(w("2"))).unwrap(), FockVector::basis(w("2")));
        let v = s.pq_apply(&FockVector::basis(w("0.0.0"))).unwrap();
        let total = rational(1, 1) + q.clone() * rational(2, 1) + q.clone() * q.clone() * rational(2, 1) + q.powi(3);
        assert_eq!(v, FockVector::monomial(w("0.0.0"), total.clone()));
        assert_eq!(total, (rational(1, 1) + q.clone()) * (rational(1, 1) + q.clone() + q.clone() * q));
    }

    #[test]
    fn pq_matches_permutation_oracle() {
        for q in [rational(1, 2), rational(-2, 3), rational(0, 1)] {
            let s = space(3, 8, q);
            for word in ["0.1.2.0", "2.1.0.1.2", "0.1.0.2.1.1", "0.1.2.0.1.2.0", "1.0.2.2.0.1.0.2"] {
                let v = FockVector::basis(w(word));
                assert_eq!(s.pq_apply(&v).unwrap(), s.pq_oracle(&v).unwrap(), "{word}");
            }
        }
    }

    #[test]
    fn inner_examples() {
        let s = space(2, 4, rational(1, 2));
        assert_eq!(s.inner(&FockVector::vacuum(), &FockVector::vacuum()).unwrap(), rational(1, 1));
        let e00 = FockVector::basis(w("0.0"));
        assert_eq!(s.norm_sq(&e00).unwrap(), rational(3, 2));
        assert_eq!(s.inner(&FockVector::basis(w("0.1")), &FockVector::basis(w("1.0"))).unwrap(), rational(1, 2));
        // different degrees are orthogonal
        assert_eq!(s.inner(&FockVector::basis(w("0")), &e00).unwrap(), rational(0, 1));
    }

    #[test]
    fn creation_annihilation_examples() {
        let q = rational(1, 2);
        let s = space(2, 3, q.clone());
        let (e0, e1) = (s.unit(0), s.unit(1));
        assert_eq!(s.create(&e1, &FockVector::vacuum()).unwrap(), FockVector::basis(w("1")));
        assert_eq!(s.create(&e1, &FockVector::basis(w("0"))).unwrap(), FockVector::basis(w("1.0")));
        let xi = vec![rational(2, 1), rational(-3, 1)];
        assert_eq!(
            s.create(&xi, &FockVector::vacuum()).unwrap(),
            FockVector::from_terms([(w("0"), rational(2, 1)), (w("1"), rational(-3, 1))])
        );
        assert_eq!(s.annihilate(&e0, &FockVector::basis(w("0.0"))).unwrap(), FockVector::monomial(w("0"), rational(3, 2)));
        assert_eq!(s.annihilate(&e0, &FockVector::basis(w("1.0"))).unwrap(), FockVector::monomial(w("1"), q));
        assert!(s.annihilate(&e0, &FockVector::vacuum()).unwrap().is_zero());
        assert!(matches!(s.create(&e0, &FockVector::basis(w("0.0.0"))), Err(Error::TruncationOverflow { .. })));
        assert_eq!(
            s.right_annihilate(&e0, &FockVector::basis(w("0.1"))).unwrap(),
            FockVector::monomial(w("1"), rational(1, 2))
        );
    }

    #[test]
    fn q_numbers() {
        let q = rational(1, 2);
        assert_eq!(q_number(&q, 3), rational(7, 4));
        assert_eq!(q_factorial(&q, 3), rational(21, 8));
        assert_eq!(q_number(&0.0f64, 4), 1.0);
    }

    proptest! {
        #[test]
        fn pq_is_symmetric(a in proptest::collection::vec(0u8..3, 0..6), b in proptest::collection::vec(0u8..3, 0..6), qn in -9i64..=9) {
            let s = space(3, 6, rational(qn, 10));
            let (u, v) = (FockVector::basis(TensorWord::new(a)), FockVector::basis(TensorWord::new(b)));
            prop_assert_eq!(s.inner(&u, &v).unwrap(), s.inner(&v, &u).unwrap());
        }

        #[test]
        fn left_and_right_adjointness(a in proptest::collection::vec(0u8..2, 0..5), b in proptest::collection::vec(0u8..2, 0..6), i in 0usize..2, qn in -9i64..=9) {
            let s = space(2, 6, rational(qn, 10));
            let xi = s.unit(i);
            let (u, v) = (FockVector::basis(TensorWord::new(a)), FockVector::basis(TensorWord::new(b)));
            prop_assert_eq!(
                s.inner(&s.create_raw(&xi, &u), &v).unwrap(),
                s.inner(&u, &s.annihilate_raw(&xi, &v)).unwrap()
            );
            prop_assert_eq!(
                s.inner(&s.right_create_raw(&xi, &u), &v).unwrap(),
                s.inner(&u, &s.right_annihilate_raw(&xi, &v)).unwrap()
            );
        }
    }
}
