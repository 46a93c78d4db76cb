//! Reduced words in the free Coxeter group `W = (Z/2)^{*L}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::{rational, Rational};

/// A reduced word: no two adjacent letters coincide.
///
/// Words order by length first, then lexicographically, which is the basis
/// order used by every matrix representation in the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(s: u8) -> Self {
        Word(vec![s])
    }

    /// Wraps letters that are already reduced.
    ///
    /// Panics in debug builds when two adjacent letters coincide.
    pub fn from_reduced(letters: Vec<u8>) -> Self {
        debug_assert!(letters.windows(2).all(|w| w[0] != w[1]), "word {letters:?} is not reduced");
        Word(letters)
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

    pub fn first(&self) -> Option<u8> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Inverse element: the reversed word (every generator is an involution).
    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Product `s·w` in the group.
    pub fn left_mul(&self, s: u8) -> Self {
        if self.first() == Some(s) {
            Word(self.0[1..].to_vec())
        } else {
            let mut v = Vec::with_capacity(self.0.len() + 1);
            v.push(s);
            v.extend_from_slice(&self.0);
            Word(v)
        }
    }

    /// Product `w·s` in the group.
    pub fn right_mul(&self, s: u8) -> Self {
        let mut v = self.0.clone();
        if self.last() == Some(s) {
            v.pop();
        } else {
            v.push(s);
        }
        Word(v)
    }

    /// Reduced product `self·other`.
    pub fn mul(&self, other: &Word) -> Word {
        let r = self.cancellation(other);
        let mut v = Vec::with_capacity(self.len() + other.len() - 2 * r);
        v.extend_from_slice(&self.0[..self.len() - r]);
        v.extend_from_slice(&other.0[r..]);
        Word(v)
    }

    /// Number of letters cancelling in `self·other`.
    pub fn cancellation(&self, other: &Word) -> usize {
        self.0.iter().rev().zip(&other.0).take_while(|(a, b)| a == b).count()
    }

    /// Drops the last `k` letters.
    pub fn drop_last(&self, k: usize) -> Word {
        Word(self.0[..self.len() - k].to_vec())
    }

    /// Drops the first `k` letters.
    pub fn drop_first(&self, k: usize) -> Word {
        Word(self.0[k..].to_vec())
    }

    /// Plain concatenation; `None` if the junction is not reduced.
    pub fn concat(&self, other: &Word) -> Option<Word> {
        if self.last().is_some() && self.last() == other.first() {
            return None;
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Some(Word(v))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Parses `"0,1,0"` or `"e"` and reduces the result; the generator range is
/// not checked here (see [`FreeCoxeterGroup::parse`]).
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        let raw = s
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad word {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(reduce_unchecked(&raw))
    }
}

fn reduce_unchecked(letters: &[u8]) -> Word {
    let mut out: Vec<u8> = Vec::with_capacity(letters.len());
    for &s in letters {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    Word(out)
}

/// The group `(Z/2)^{*L}` with `L >= 3` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FreeCoxeterGroup {
    generators: usize,
}

impl FreeCoxeterGroup {
    pub fn new(generators: usize) -> Result<Self> {
        if generators < 3 {
            return Err(Error::TooFewGenerators(generators));
        }
        if generators > u8::MAX as usize {
            return Err(Error::Precondition(format!("at most 255 generators supported, got {generators}")));
        }
        Ok(FreeCoxeterGroup { generators })
    }

    /// Builds the right-angled group with the given commuting pairs.  Only
    /// the all-free case is implemented, so any edge is rejected.
    pub fn from_commutation_graph(generators: usize, commuting: &[(usize, usize)]) -> Result<Self> {
        if !commuting.is_empty() {
            return Err(Error::CommutingGenerators(commuting.len()));
        }
        Self::new(generators)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn check_generator(&self, s: usize) -> Result<u8> {
        if s < self.generators {
            Ok(s as u8)
        } else {
            Err(Error::InvalidGenerator { index: s, generators: self.generators })
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        for &s in w.letters() {
            self.check_generator(s as usize)?;
        }
        Ok(())
    }

    /// Normal form of an arbitrary product of generators.
    pub fn reduce(&self, letters: &[usize]) -> Result<Word> {
        let checked = letters.iter().map(|&s| self.check_generator(s)).collect::<Result<Vec<_>>>()?;
        Ok(reduce_unchecked(&checked))
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let s = text.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::identity());
        }
        let raw = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad word {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        self.reduce(&raw)
    }

    pub fn multiply(&self, w: &Word, v: &Word) -> Word {
        w.mul(v)
    }

    /// `L(L-1)^{n-1}` for `n >= 1`, and 1 for `n = 0`.
    pub fn sphere_size(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        self.generators as u128 * (self.generators as u128 - 1).pow(n as u32 - 1)
    }

    /// All reduced words of length `n` in lexicographic order.
    pub fn sphere(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * (self.generators - 1));
            for w in &out {
                for s in 0..self.generators as u8 {
                    if w.last() != Some(s) {
                        let mut v = w.0.clone();
                        v.push(s);
                        next.push(Word(v));
                    }
                }
            }
            out = next;
        }
        out
    }

    /// Words of length `<= n` in (length, lex) order.
    pub fn ball(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.sphere(k)).collect()
    }

    /// Radius of convergence `1/(L-1)` of the growth series.
    pub fn growth_radius(&self) -> Rational {
        rational(1, self.generators as i64 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(l: usize) -> FreeCoxeterGroup {
        FreeCoxeterGroup::new(l).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        let g3 = g(3);
        assert_eq!(g3.reduce(&[0, 0]).unwrap(), Word::identity());
        assert_eq!(g3.reduce(&[0, 1, 1, 0]).unwrap(), Word::identity());
        assert_eq!(g3.reduce(&[0, 1, 0]).unwrap(), w("0,1,0"));
        assert!(matches!(g3.reduce(&[0, 3]), Err(Error::InvalidGenerator { index: 3, .. })));
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w("0,1").mul(&w("1,0")), Word::identity());
        assert_eq!(w("0").mul(&w("1")), w("0,1"));
        assert_eq!(w("0,1").mul(&w("1,2")), w("0,2"));
    }

    #[test]
    fn rejects_bad_groups() {
        assert!(FreeCoxeterGroup::new(2).is_err());
        assert!(FreeCoxeterGroup::from_commutation_graph(3, &[(0, 1)]).is_err());
        assert!(FreeCoxeterGroup::from_commutation_graph(3, &[]).is_ok());
    }

    #[test]
    fn spheres() {
        let g3 = g(3);
        assert_eq!(g3.sphere(0), vec![Word::identity()]);
        assert_eq!(g3.sphere(1).len(), 3);
        assert_eq!(g3.sphere(2).len(), 6);
        for l in 3..=5 {
            for n in 0..=6 {
                assert_eq!(g(l).sphere(n).len() as u128, g(l).sphere_size(n));
            }
        }
        let s = g3.sphere(3);
        assert!(s.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn growth_radius() {
        assert_eq!(g(3).growth_radius(), rational(1, 2));
        assert_eq!(g(4).growth_radius(), rational(1, 3));
        for k in 1..8 {
            assert_eq!(g(5).sphere_size(k + 1), 4 * g(5).sphere_size(k));
        }
    }

    #[test]
    fn serialization() {
        assert_eq!(Word::identity().to_string(), "e");
        assert_eq!(w("0,1,0").to_string(), "0,1,0");
        assert_eq!(w("e"), Word::identity());
        assert!(g(3).parse("0,7").is_err());
    }

    #[test]
    fn associativity_and_inverse_exhaustive() {
        let g3 = g(3);
        let ball = g3.ball(3);
        for a in &ball {
            for b in &ball {
                let ab = a.mul(b);
                for c in &ball {
                    assert_eq!(ab.mul(c), a.mul(&b.mul(c)));
                }
            }
        }
        for x in g3.ball(6) {
            assert_eq!(x.mul(&x.inverse()), Word::identity());
        }
    }

    fn check_all_sequences(grp: &FreeCoxeterGroup, seq: &mut Vec<usize>, max_len: usize) {
        let red = grp.reduce(seq).unwrap();
        let again: Vec<usize> = red.letters().iter().map(|&s| s as usize).collect();
        assert_eq!(grp.reduce(&again).unwrap(), red);
        assert_eq!(red.len() % 2, seq.len() % 2);
        if seq.len() == max_len {
            return;
        }
        for s in 0..grp.generators() {
            seq.push(s);
            check_all_sequences(grp, seq, max_len);
            seq.pop();
        }
    }

    #[test]
    fn reduce_idempotent_exhaustive() {
        for l in 3..=4 {
            check_all_sequences(&g(l), &mut Vec::new(), 10);
        }
    }
}
