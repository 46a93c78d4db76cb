//! Univariate polynomials in the deformation parameter `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Polynomial `c_0 + c_1 p + ... + c_d p^d` with dense coefficient storage.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient list and `degree() == None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

/// Polynomial in `p` with exact rational coefficients.
pub type PolyP = Poly<Rational>;

impl<S: Scalar> Poly<S> {
    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate `p`.
    pub fn p() -> Self {
        Poly { coeffs: vec![S::zero(), S::one()] }
    }

    pub fn monomial(c: S, degree: usize) -> Self {
        let mut coeffs = vec![S::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Constant polynomials (including zero).
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, p: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * p.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        Self::from_coeffs(out)
    }

    fn add_ref(&mut self, other: &Self, sign: bool) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), S::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if sign {
                *a += b.clone();
            } else {
                *a -= b.clone();
            }
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl PolyP {
    /// Serializes as a map from degree to `"num/den"`.
    pub fn to_degree_map(&self) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.to_string(), format_rational(c)))
            .collect()
    }

    pub fn from_degree_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (k, v) in map {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad polynomial degree {k:?}")))?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = parse_rational(v)?;
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Poly { coeffs: vec![S::one()] }
    }
}

impl<S: Scalar> Add for Poly<S> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.add_ref(&rhs, true);
        self
    }
}

impl<S: Scalar> Sub for Poly<S> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.add_ref(&rhs, false);
        self
    }
}

impl<S: Scalar> Mul for Poly<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a, S: Scalar> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &'a Poly<S>) -> Poly<S> {
        self.mul_ref(rhs)
    }
}

impl<S: Scalar> Neg for Poly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> AddAssign for Poly<S> {
    fn add_assign(&mut self, rhs: Self) {
        self.add_ref(&rhs, true);
    }
}

impl<S: Scalar> SubAssign for Poly<S> {
    fn sub_assign(&mut self, rhs: Self) {
        self.add_ref(&rhs, false);
    }
}

impl<'a, S: Scalar> AddAssign<&'a Poly<S>> for Poly<S> {
    fn add_assign(&mut self, rhs: &'a Poly<S>) {
        self.add_ref(rhs, true);
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*p")?,
                _ => write!(f, "{c}*p^{k}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn poly(cs: &[i64]) -> PolyP {
        PolyP::from_coeffs(cs.iter().map(|&c| rational(c, 1)).collect())
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(PolyP::zero().degree(), None);
        assert_eq!(poly(&[0, 0, 0]).degree(), None);
        assert_eq!(poly(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn arithmetic() {
        let a = poly(&[1, 1]);
        let b = poly(&[-1, 1]);
        assert_eq!(a.clone() * b.clone(), poly(&[-1, 0, 1]));
        assert_eq!(a.clone() + b.clone(), poly(&[0, 2]));
        assert_eq!(a.clone() - a.clone(), PolyP::zero());
        assert_eq!(a.eval(&rational(-3, 7)), rational(4, 7));
    }

    #[test]
    fn degree_map_round_trip() {
        let a = PolyP::from_coeffs(vec![rational(3, 7), Rational::zero(), rational(-1, 2)]);
        let m = a.to_degree_map();
        assert_eq!(m.len(), 2);
        assert_eq!(m["2"], "-1/2");
        assert_eq!(PolyP::from_degree_map(&m).unwrap(), a);
    }
}
