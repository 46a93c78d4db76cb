//! First and second quantisation, and growth of `‖v^{⊗j}‖_q`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qfock::{q_factorial, FockSpace, FockVector, OperatorMatrix, TensorWord};
use crate::scalar::Scalar;

const CONTRACTION_TOL: f64 = 1e-12;

impl<S: Scalar> FockSpace<S> {
    fn check_operator(&self, t: &Matrix<S>) -> Result<()> {
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::Precondition(format!(
                "operator is {}x{}, dimension is {}",
                t.rows(),
                t.cols(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// `T^{⊗n}` applied to a finite vector, exact.
    pub fn tensor_apply(&self, t: &Matrix<S>, v: &FockVector<S>) -> FockVector<S> {
        let cols: Vec<Vec<S>> = (0..self.dim()).map(|j| (0..self.dim()).map(|i| t[(i, j)].clone()).collect()).collect();
        let mut out = FockVector::zero();
        for (w, c) in v.terms() {
            let factors: Vec<&[S]> = w.letters().iter().map(|&i| cols[i as usize].as_slice()).collect();
            out += &self.tensor(&factors).scale(c);
        }
        out
    }

    /// `F_q(T)`, acting as `T^{⊗n}` on each degree.  Rejects operators of
    /// norm above one.
    pub fn first_quantization(&self, t: &Matrix<S>) -> Result<OperatorMatrix<S>> {
        self.check_operator(t)?;
        let norm = t.to_f64().singular_values().max();
        if norm > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotContraction(norm));
        }
        Ok(OperatorMatrix::from_fn(self, |w| self.tensor_apply(t, w)))
    }

    /// `U U^T = I`, exactly for exact scalars.
    pub fn is_orthogonal(&self, u: &Matrix<S>) -> bool {
        let prod = u.mul(&u.transpose());
        let id = Matrix::identity(u.rows());
        if S::EXACT {
            prod == id
        } else {
            (0..u.rows()).all(|i| (0..u.rows()).all(|j| (prod[(i, j)].clone() - id[(i, j)].clone()).abs_f64() < 1e-12))
        }
    }

    /// Compares `F_q(U) W(s) F_q(U)*` with `W(U^{⊗} s)` as compressed
    /// matrices on input degrees `< N - |s| + 1`, using `F_q(U)* = F_q(U^T)`.
    pub fn second_quantization_check(&self, u: &Matrix<S>, symbol: &FockVector<S>) -> Result<CovarianceReport> {
        self.check_operator(u)?;
        if !self.is_orthogonal(u) {
            return Err(Error::Precondition("U is not orthogonal".into()));
        }
        self.check_vector(symbol)?;
        let deg = symbol.max_degree().unwrap_or(0);
        let window = self.truncation().checked_sub(deg.max(1)).ok_or_else(|| {
            Error::TruncationTooSmall(format!("symbol degree {deg} exceeds truncation {}", self.truncation()))
        })?;
        let f = self.first_quantization(u)?;
        let ft = self.first_quantization(&u.transpose())?;
        let w = OperatorMatrix::from_fn(self, |x| self.wick_apply(symbol, x));
        let moved = self.tensor_apply(u, symbol);
        let wu = OperatorMatrix::from_fn(self, |x| self.wick_apply(&moved, x));
        let lhs = f.compose(&w).compose(&ft);
        let residual = lhs.sub(&wu).max_abs(window);
        let mismatched = lhs.differences(&wu, window);
        Ok(CovarianceReport { window, mismatched, residual })
    }

    /// Basis pairs `(x, y)` of degree `<= N` with
    /// `⟨F_q(U)x, y⟩_q != ⟨x, F_q(U^T)y⟩_q`.
    pub fn quantization_adjoint_defects(&self, u: &Matrix<S>, max_degree: usize) -> Result<Vec<(TensorWord, TensorWord)>> {
        self.check_operator(u)?;
        let ut = u.transpose();
        let mut out = Vec::new();
        for n in 0..=max_degree.min(self.truncation()) {
            let words = self.words(n);
            for x in &words {
                let bx = FockVector::basis(x.clone());
                let fx = self.tensor_apply(u, &bx);
                for y in &words {
                    let by = FockVector::basis(y.clone());
                    if self.inner(&fx, &by)? != self.inner(&bx, &self.tensor_apply(&ut, &by))? {
                        out.push((x.clone(), y.clone()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `‖v^{⊗j}‖_q²` through the twisted inner product.
    pub fn power_norm_sq(&self, v: &[S], j: usize) -> Result<S> {
        self.norm_sq(&self.tensor_power(v, j))
    }
}

#[derive(Clone, Debug)]
pub struct CovarianceReport {
    /// Inputs of degree `<= window` are compared.
    pub window: usize,
    pub mismatched: Vec<TensorWord>,
    pub residual: f64,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.mismatched.is_empty()
    }
}

/// Rotation by the angle with the given cosine and sine in the `(e_0, e_1)`
/// plane of `R^d`.
pub fn plane_rotation<S: Scalar>(d: usize, cos: S, sin: S) -> Matrix<S> {
    let mut m = Matrix::identity(d);
    m[(0, 0)] = cos.clone();
    m[(0, 1)] = -sin.clone();
    m[(1, 0)] = sin;
    m[(1, 1)] = cos;
    m
}

#[derive(Clone, Debug)]
pub struct NormGrowth {
    pub j: usize,
    /// `‖v^{⊗j}‖²` for a unit vector, `Π_{i<=j} [i]_q`.
    pub norm_sq: f64,
    /// `(1-q)^j ‖v^{⊗j}‖²`.
    pub scaled: f64,
    /// `scaled(j) / scaled(j-1)`; 1 at `j = 0`.
    pub ratio: f64,
}

/// Growth table of `‖v^{⊗j}‖_q²` for a unit vector `v`, `j <= max_j`.
pub fn norm_growth(q: f64, max_j: usize) -> Result<Vec<NormGrowth>> {
    if q.abs() >= 1.0 {
        return Err(Error::Precondition(format!("need |q| < 1, got {q}")));
    }
    let mut out: Vec<NormGrowth> = Vec::with_capacity(max_j + 1);
    for j in 0..=max_j {
        let norm_sq = q_factorial(&q, j);
        let scaled = (1.0 - q).powi(j as i32) * norm_sq;
        let ratio = out.last().map_or(1.0, |p| scaled / p.scaled);
        out.push(NormGrowth { j, norm_sq, scaled, ratio });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfock::q_number;
    use crate::scalar::{rational, Rational};

    fn w(s: &str) -> TensorWord {
        s.parse().unwrap()
    }

    fn space(d: usize, n: usize) -> FockSpace<Rational> {
        FockSpace::new(d, n, rational(1, 2)).unwrap()
    }

    fn swap() -> Matrix<Rational> {
        Matrix::from_rows(vec![vec![rational(0, 1), rational(1, 1)], vec![rational(1, 1), rational(0, 1)]])
    }

    #[test]
    fn first_quantization_examples() {
        let s = space(2, 3);
        assert_eq!(s.first_quantization(&Matrix::identity(2)).unwrap(), OperatorMatrix::identity(&s));
        let f = s.first_quantization(&swap()).unwrap();
        assert_eq!(f.apply(&FockVector::basis(w("0.1"))), FockVector::basis(w("1.0")));
        let big = Matrix::from_rows(vec![vec![rational(2, 1), rational(0, 1)], vec![rational(0, 1), rational(1, 1)]]);
        assert!(matches!(s.first_quantization(&big), Err(Error::NotContraction(_))));
        let half = Matrix::from_rows(vec![vec![rational(1, 2), rational(1, 2)], vec![rational(0, 1), rational(1, 2)]]);
        assert!(s.first_quantization(&half).is_ok());
    }

    #[test]
    fn orthogonal_quantization_is_unitary() {
        use rand::{Rng, SeedableRng};
        let s = space(2, 4);
        let u = plane_rotation(2, rational(3, 5), rational(4, 5));
        let words = s.basis(4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let random_vec = |rng: &mut rand_chacha::ChaCha8Rng| {
            FockVector::from_terms((0..4).map(|_| (words[rng.gen_range(0..words.len())].clone(), rational(rng.gen_range(-3..=3), 1))))
        };
        for _ in 0..50 {
            let (x, y) = (random_vec(&mut rng), random_vec(&mut rng));
            let (fx, fy) = (s.tensor_apply(&u, &x), s.tensor_apply(&u, &y));
            assert_eq!(s.inner(&fx, &fy).unwrap(), s.inner(&x, &y).unwrap());
        }
        assert!(s.quantization_adjoint_defects(&u, 4).unwrap().is_empty());
    }

    #[test]
    fn adjoint_of_non_orthogonal_is_transpose() {
        let s = space(2, 3);
        let t = Matrix::from_rows(vec![vec![rational(1, 2), rational(1, 3)], vec![rational(0, 1), rational(-1, 4)]]);
        assert!(s.quantization_adjoint_defects(&t, 3).unwrap().is_empty());
    }

    #[test]
    fn covariance_for_fields_and_wick_words() {
        let s = space(2, 6);
        let u = plane_rotation(2, rational(3, 5), rational(4, 5));
        let r = s.second_quantization_check(&u, &FockVector::basis(w("0"))).unwrap();
        assert!(r.passed() && r.window == 5, "{r:?}");
        let r = s.second_quantization_check(&Matrix::identity(2), &FockVector::basis(w("1"))).unwrap();
        assert!(r.passed());
        for word in ["0.0", "0.1", "1.0", "1.1"] {
            let r = s.second_quantization_check(&u, &FockVector::basis(w(word))).unwrap();
            assert!(r.passed(), "{word}: {r:?}");
        }
        assert!(s.second_quantization_check(&swap().mul(&plane_rotation(2, rational(1, 1), rational(1, 1))), &FockVector::vacuum()).is_err());
    }

    #[test]
    fn covariance_fails_for_the_wrong_image() {
        // F(U) W(e0) F(U)* is W(U e0), not W(e0)
        let s = space(2, 4);
        let u = plane_rotation(2, rational(3, 5), rational(4, 5));
        let f = s.first_quantization(&u).unwrap();
        let ft = s.first_quantization(&u.transpose()).unwrap();
        let w0 = s.field_matrix(&s.unit(0));
        assert!(!f.compose(&w0).compose(&ft).differences(&w0, 3).is_empty());
    }

    #[test]
    fn power_norms_match_product_formula() {
        let q = rational(1, 2);
        let s = FockSpace::new(1, 12, q.clone()).unwrap();
        for j in 0..=12 {
            let prod = (1..=j).fold(rational(1, 1), |acc, i| acc * q_number(&q, i));
            assert_eq!(s.power_norm_sq(&[rational(1, 1)], j).unwrap(), prod);
        }
        let s = FockSpace::new(2, 7, q.clone()).unwrap();
        let v = [rational(3, 5), rational(4, 5)];
        for j in 0..=7 {
            assert_eq!(s.power_norm_sq(&v, j).unwrap(), q_factorial(&q, j), "j={j}");
        }
        assert_eq!(s.power_norm_sq(&v, 2).unwrap(), rational(3, 2));
        assert_eq!(s.power_norm_sq(&v, 3).unwrap(), rational(21, 8));
    }

    #[test]
    fn growth_ratio_converges() {
        let g = norm_growth(0.5, 30).unwrap();
        assert!((g[30].ratio - 1.0).abs() < 1e-6);
        assert!(g.windows(2).skip(1).all(|p| p[1].scaled <= p[0].scaled));
        assert!(norm_growth(0.0, 5).unwrap().iter().all(|r| r.norm_sq == 1.0));
    }
}
