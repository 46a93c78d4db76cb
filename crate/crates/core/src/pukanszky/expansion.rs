//! Expansions `h_m g h_n = Σ coeff_{k,j} g_{k,j}` and the intertwiner
//! `β_{m,n} ↦ γ_{m,n} + γ_{m-1,n-1}`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::linalg::Matrix;
use crate::poly::PolyP;
use crate::pukanszky::orthogonality::Kind;
use crate::pukanszky::toeplitz::{lower_bracket, upper_bracket};
use crate::pukanszky::{complement_sample, OrbitFamily, PukanszkyContext};
use crate::scalar::{rational, rational_to_f64, Rational};

pub type CoefficientTable = BTreeMap<(usize, usize), PolyP>;

#[derive(Clone, Debug)]
pub struct Expansion {
    pub m: usize,
    pub n: usize,
    pub coeffs: CoefficientTable,
    /// `h_m g h_n - Σ coeff_{k,j} g_{k,j}`.
    pub residual: HeckeElement<PolyP>,
}

impl Expansion {
    pub fn coeff(&self, k: usize, j: usize) -> PolyP {
        self.coeffs.get(&(k, j)).cloned().unwrap_or_else(PolyP::zero)
    }
}

fn constant_gram(vectors: &[&HeckeElement<PolyP>]) -> Result<Matrix<Rational>> {
    let n = vectors.len();
    let mut g = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let e = vectors[i].dot(vectors[j]);
            if !e.is_constant() {
                return Err(Error::Singular(format!("Gram entry ({i},{j}) depends on p: {e}")));
            }
            g[(i, j)] = e.coeff(0);
        }
    }
    Ok(g)
}

/// Expands `h_m g h_n` degree by degree, solving the normal equations for
/// the family `{g_{k,j} : k <= m, j <= n}` in each degree.
pub fn expansion_coefficients(fam: &mut OrbitFamily, m: usize, n: usize) -> Result<Expansion> {
    let l = fam.degree();
    let full = fam.full(m, n).clone();
    let mut coeffs = CoefficientTable::new();
    let mut residual = full.clone();
    for t in 0..=m + n {
        let idx: Vec<(usize, usize)> = (0..=m).filter(|&k| t >= k && t - k <= n).map(|k| (k, t - k)).collect();
        let vecs: Vec<HeckeElement<PolyP>> = idx.iter().map(|&(k, j)| fam.top(k as i64, j as i64).clone()).collect();
        let refs: Vec<&HeckeElement<PolyP>> = vecs.iter().collect();
        let gram = constant_gram(&refs)?;
        let inv = gram.inverse().ok_or_else(|| Error::Singular(format!("Gram matrix in degree {} is singular", t + l)))?;
        let target = full.project_degree(t + l);
        let rhs: Vec<PolyP> = vecs.iter().map(|v| v.dot(&target)).collect();
        for (a, &(k, j)) in idx.iter().enumerate() {
            let mut c = PolyP::zero();
            for (b, r) in rhs.iter().enumerate() {
                c += r.scale(&inv[(a, b)]);
            }
            if !c.is_zero() {
                residual -= &vecs[a].scale(&c);
                coeffs.insert((k, j), c);
            }
        }
    }
    Ok(Expansion { m, n, coeffs, residual })
}

#[derive(Clone, Debug)]
pub struct Relation {
    pub m: usize,
    pub n: usize,
    pub beta: Expansion,
    pub gamma: Expansion,
    /// Index pairs where `c_{k,j} != b_{k,j} + b_{k+1,j+1}`.
    pub mismatches: Vec<(usize, usize)>,
}

impl Relation {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.beta.residual.is_zero() && self.gamma.residual.is_zero()
    }
}

pub fn check_relation(beta: &mut OrbitFamily, gamma: &mut OrbitFamily, m: usize, n: usize) -> Result<Relation> {
    let b = expansion_coefficients(beta, m, n)?;
    let c = expansion_coefficients(gamma, m, n)?;
    let mut mismatches = Vec::new();
    for k in 0..=m {
        for j in 0..=n {
            let expect = b.coeff(k, j) + b.coeff(k + 1, j + 1);
            if c.coeff(k, j) != expect {
                mismatches.push((k, j));
            }
        }
    }
    Ok(Relation { m, n, beta: b, gamma: c, mismatches })
}

/// Builds `β ⊥ S_1` and `γ ⊥ S_l` from seeds and checks every `m, n` of the
/// window.
pub fn verify_relation(ctx: &PukanszkyContext, max_m: usize, max_n: usize, l: usize, seeds: (u64, u64)) -> Result<Vec<Relation>> {
    if l < 2 {
        return Err(Error::Precondition(format!("γ needs l >= 2, got {l}")));
    }
    let mut beta = OrbitFamily::new(ctx, complement_sample(ctx, 1, seeds.0)?);
    let mut gamma = OrbitFamily::new(ctx, complement_sample(ctx, l, seeds.1)?);
    let mut out = Vec::new();
    for m in 0..=max_m {
        for n in 0..=max_n {
            out.push(check_relation(&mut beta, &mut gamma, m, n)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IntertwinerReport {
    pub depth: usize,
    pub l: usize,
    /// `(m, n)` where the image of the expansion differs from `h_m γ h_n`.
    pub failures: Vec<(usize, usize)>,
    /// Extreme singular values of `T` on the window, in units of `‖γ‖/‖β‖`.
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// `(1 - ‖S‖)/√C_a` and `(1 + ‖S‖)/√B_a` with `a = -1/(L-1)`.
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Norm of the diagonal shift `γ_{m,n} ↦ γ_{m-1,n-1}`, computed on the
    /// window.
    pub shift_norm: f64,
}

impl IntertwinerReport {
    pub fn exact_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn bounds_ok(&self) -> bool {
        self.sigma_min > 0.0 && self.sigma_min >= self.lower_bound - 1e-12 && self.sigma_max <= self.upper_bound + 1e-12
    }

    pub fn passed(&self) -> bool {
        self.exact_ok() && self.bounds_ok()
    }
}

fn gram_f64(vectors: &[HeckeElement<Rational>]) -> DMatrix<f64> {
    let n = vectors.len();
    DMatrix::from_fn(n, n, |i, j| rational_to_f64(&vectors[i].dot(&vectors[j])))
}

/// Extreme values of `√λ` for `B v = λ A v`, `A` positive definite.
fn generalized_singular_range(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<(f64, f64)> {
    let chol = a.cholesky().ok_or_else(|| Error::Singular("β Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    let linv = l.clone().try_inverse().ok_or_else(|| Error::Singular("Cholesky factor".into()))?;
    let m = &linv * b * linv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigenvalues();
    let lo = eig.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0).sqrt();
    let hi = eig.iter().cloned().fold(0.0, f64::max).sqrt();
    Ok((lo, hi))
}

/// Checks `T(h_m β h_n) = h_m γ h_n` for `m, n <= depth` through the
/// coefficient expansion, and measures the conditioning of `T` on
/// `span{β_{m,n} : m, n <= depth}`.
pub fn intertwiner_check(ctx: &PukanszkyContext, depth: usize, l: usize, seeds: (u64, u64)) -> Result<IntertwinerReport> {
    if depth == 0 || l < 2 {
        return Err(Error::Precondition(format!("need depth >= 1 and l >= 2, got depth={depth}, l={l}")));
    }
    let mut beta = OrbitFamily::new(ctx, complement_sample(ctx, 1, seeds.0)?);
    let mut gamma = OrbitFamily::new(ctx, complement_sample(ctx, l, seeds.1)?);
    let mut failures = Vec::new();
    for m in 0..=depth {
        for n in 0..=depth {
            let exp = expansion_coefficients(&mut beta, m, n)?;
            let mut image = HeckeElement::zero();
            for (&(k, j), c) in &exp.coeffs {
                let (k, j) = (k as i64, j as i64);
                image += &gamma.top(k, j).scale(c);
                image += &gamma.top(k - 1, j - 1).scale(c);
            }
            if !exp.residual.is_zero() || image != *gamma.full(m, n) {
                failures.push((m, n));
            }
        }
    }

    let p = rational(0, 1);
    let d = depth as i64;
    let mut bs = Vec::new();
    let mut ts = Vec::new();
    for m in 0..=d {
        for n in 0..=d {
            bs.push(beta.top(m, n).eval(&p));
            ts.push((gamma.top(m, n).clone() + gamma.top(m - 1, n - 1).clone()).eval(&p));
        }
    }
    let scale = (rational_to_f64(&beta.element().base().norm_sq().coeff(0))
        / rational_to_f64(&gamma.element().base().norm_sq().coeff(0)))
    .sqrt();
    let (lo, hi) = generalized_singular_range(gram_f64(&bs), gram_f64(&ts))?;

    let lm1 = ctx.generators() as f64 - 1.0;
    let a = -1.0 / lm1;
    let mut shift_norm: f64 = 0.0;
    for m in 1..=d {
        for n in 1..=d {
            let num = rational_to_f64(&gamma.top(m - 1, n - 1).norm_sq().coeff(0));
            let den = rational_to_f64(&gamma.top(m, n).norm_sq().coeff(0));
            shift_norm = shift_norm.max((num / den).sqrt());
        }
    }
    Ok(IntertwinerReport {
        depth,
        l,
        failures,
        sigma_min: lo * scale,
        sigma_max: hi * scale,
        lower_bound: (1.0 - shift_norm) / upper_bracket(a).sqrt(),
        upper_bound: (1.0 + shift_norm) / lower_bracket(a).sqrt(),
        shift_norm,
    })
}

/// The coefficient family attached to `kind`, for callers that only need one
/// table.
pub fn expansion_for(ctx: &PukanszkyContext, kind: Kind, l: usize, seed: u64, m: usize, n: usize) -> Result<Expansion> {
    let g = match kind {
        Kind::Beta => complement_sample(ctx, 1, seed)?,
        Kind::Gamma => {
            if l < 2 {
                return Err(Error::Precondition(format!("γ needs l >= 2, got {l}")));
            }
            complement_sample(ctx, l, seed)?
        }
    };
    expansion_coefficients(&mut OrbitFamily::new(ctx, g), m, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pukanszky::GradedElement;

    fn ctx() -> PukanszkyContext {
        PukanszkyContext::new(3).unwrap()
    }

    #[test]
    fn beta_times_h1() {
        let c = ctx();
        let e = expansion_for(&c, Kind::Beta, 1, 3, 0, 0).unwrap();
        assert_eq!(e.coeff(0, 0), PolyP::constant(rational(1, 1)));
        let e = expansion_for(&c, Kind::Beta, 1, 3, 0, 1).unwrap();
        assert!(e.residual.is_zero());
        assert_eq!(e.coeff(0, 1), PolyP::constant(rational(1, 1)));
        assert_eq!(e.coeff(0, 0), PolyP::p());
    }

    #[test]
    fn beta_times_h1_by_hand() {
        // βh_1 = Σ_{s≠t} β_t T_{ts} + Σ_t β_t (T_e + p T_t), and Σβ_t = 0
        let c = ctx();
        let beta = GradedElement::new(
            HeckeElement::basis("0".parse().unwrap()) - HeckeElement::basis("2".parse().unwrap()),
            1,
        )
        .unwrap();
        let prod = c.algebra().mul(beta.base(), &c.h(1));
        let expect = crate::pukanszky::gamma_mn(&c, &beta, 0, 1).base().clone() + beta.base().scale(&PolyP::p());
        assert_eq!(prod, expect);
    }

    #[test]
    fn leading_coefficients() {
        let c = ctx();
        let mut g = OrbitFamily::new(&c, complement_sample(&c, 2, 5).unwrap());
        for m in 0..=3 {
            for n in 0..=3 {
                let e = expansion_coefficients(&mut g, m, n).unwrap();
                assert!(e.residual.is_zero());
                assert_eq!(e.coeff(m, n), PolyP::constant(rational(1, 1)));
            }
        }
    }

    #[test]
    fn relation_small() {
        let c = ctx();
        for r in verify_relation(&c, 2, 2, 2, (1, 2)).unwrap() {
            assert!(r.passed(), "m={} n={}: {:?}", r.m, r.n, r.mismatches);
        }
    }

    #[test]
    fn intertwiner_small_window() {
        let c = ctx();
        let rep = intertwiner_check(&c, 2, 2, (1, 2)).unwrap();
        assert!(rep.exact_ok(), "{:?}", rep.failures);
        assert!(rep.bounds_ok(), "{rep:?}");
        assert!((rep.shift_norm - 0.5).abs() < 1e-12);
    }
}
