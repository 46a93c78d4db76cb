//! Eigenvalue bracket for the Toeplitz matrices `[a^{|i-j|}]`, `|a| < 1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `(1 - |a|)/(1 + |a|)`.
pub fn lower_bracket(a: f64) -> f64 {
    (1.0 - a.abs()) / (1.0 + a.abs())
}

/// `(1 + |a|)/(1 - |a|)`.
pub fn upper_bracket(a: f64) -> f64 {
    (1.0 + a.abs()) / (1.0 - a.abs())
}

pub fn toeplitz(a: f64, k: usize) -> DMatrix<f64> {
    DMatrix::from_fn(k, k, |i, j| a.powi(i.abs_diff(j) as i32))
}

#[derive(Clone, Copy, Debug)]
pub struct ToeplitzBounds {
    pub a: f64,
    pub k: usize,
    pub min_eig: f64,
    pub max_eig: f64,
}

impl ToeplitzBounds {
    pub fn within_bracket(&self) -> bool {
        let tol = 1e-12;
        self.min_eig >= lower_bracket(self.a) - tol && self.max_eig <= upper_bracket(self.a) + tol
    }
}

pub fn toeplitz_bounds(a: f64, k: usize) -> Result<ToeplitzBounds> {
    if !(a.abs() < 1.0) {
        return Err(Error::Precondition(format!("need |a| < 1, got {a}")));
    }
    if k == 0 {
        return Err(Error::Precondition("need k >= 1".into()));
    }
    let eig = toeplitz(a, k).symmetric_eigenvalues();
    let min_eig = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_eig = eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(ToeplitzBounds { a, k, min_eig, max_eig })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::scalar::{rational, Rational};
    use num_traits::{One, Zero};

    // The inverse of [a^{|i-j|}] is tridiagonal:
    // (1/(1-a²)) · tridiag(-a; 1, 1+a², ..., 1+a², 1; -a).
    fn kms_inverse(a: &Rational, k: usize) -> Matrix<Rational> {
        let s = Rational::one() / (Rational::one() - a * a);
        Matrix::from_fn(k, k, |i, j| {
            if i == j {
                if i == 0 || i == k - 1 {
                    s.clone()
                } else {
                    (Rational::one() + a * a) * s.clone()
                }
            } else if i.abs_diff(j) == 1 {
                -a.clone() * s.clone()
            } else {
                Rational::zero()
            }
        })
    }

    #[test]
    fn identity_at_zero() {
        let b = toeplitz_bounds(0.0, 5).unwrap();
        assert!((b.min_eig - 1.0).abs() < 1e-14 && (b.max_eig - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_inverse_oracle() {
        for (num, den) in [(1, 2), (-1, 2), (1, 3)] {
            let a = rational(num, den);
            for k in 2..=8 {
                let t = Matrix::from_fn(k, k, |i, j| {
                    let mut x = Rational::one();
                    for _ in 0..i.abs_diff(j) {
                        x *= a.clone();
                    }
                    x
                });
                assert_eq!(t.mul(&kms_inverse(&a, k)), Matrix::identity(k));
            }
        }
    }

    #[test]
    fn gershgorin_on_inverse_gives_bracket() {
        // row sums of |entries| of the inverse lie in [(1-|a|)², (1+|a|)²]/(1-a²)
        for a in [0.5f64, -0.5] {
            let d = 1.0 - a * a;
            let lo = (1.0 + a * a - 2.0 * a.abs()) / d;
            let hi = (1.0 + a * a + 2.0 * a.abs()) / d;
            assert!((1.0 / hi - lower_bracket(a)).abs() < 1e-14);
            assert!((1.0 / lo - upper_bracket(a)).abs() < 1e-14);
        }
    }

    #[test]
    fn bracket_holds_uniformly() {
        for a in [0.5, -0.5] {
            for k in [2, 4, 8, 16, 32] {
                let b = toeplitz_bounds(a, k).unwrap();
                assert!(b.within_bracket(), "{b:?}");
            }
        }
        let b = toeplitz_bounds(0.5, 8).unwrap();
        assert!(b.min_eig >= 1.0 / 3.0 && b.max_eig <= 3.0);
        assert!(toeplitz_bounds(1.0, 3).is_err());
    }
}
