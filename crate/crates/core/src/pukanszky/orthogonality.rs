//! Gram entries of the orbit families and cross-orthogonality of orbits
//! coming from different degrees.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::pukanszky::{
    complement_sample, gamma_mn, lm1_pow, random_element, sl_basis, GradedElement, OrbitFamily, PukanszkyContext,
};
use crate::poly::PolyP;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// Degree-1 elements orthogonal to `h_1`.
    Beta,
    /// Elements of `C^l[W] ⊖ S_l`, `l >= 2`.
    Gamma,
}

/// Closed form of `⟨β_{m,n}, β'_{m',n'}⟩ / ⟨β, β'⟩`.
pub fn beta_gram_factor(ctx: &PukanszkyContext, m: usize, n: usize, m2: usize, n2: usize) -> Rational {
    if m + n != m2 + n2 {
        return Rational::zero();
    }
    let d = n.abs_diff(n2);
    let sign = if d % 2 == 0 { Rational::one() } else { -Rational::one() };
    sign * lm1_pow(ctx, m + n - d)
}

/// Closed form of `⟨γ_{m,n}, γ'_{m',n'}⟩ / ⟨γ, γ'⟩`.
pub fn gamma_gram_factor(ctx: &PukanszkyContext, m: usize, n: usize, m2: usize, n2: usize) -> Rational {
    if m != m2 || n != n2 {
        return Rational::zero();
    }
    lm1_pow(ctx, m + n)
}

#[derive(Clone, Debug)]
pub struct GramMismatch {
    pub index: (usize, usize, usize, usize),
    pub computed: PolyP,
    pub expected: Rational,
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub kind: Kind,
    pub l: usize,
    pub entries: usize,
    /// Entries whose computed value depends on `p`.
    pub p_dependent: usize,
    pub mismatches: Vec<GramMismatch>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.p_dependent == 0 && self.mismatches.is_empty()
    }
}

/// Compares every Gram entry on the window `m, n, m', n' <= max_mn` with the
/// closed form.  `β'` is a second complement sample; `γ'` is an unconstrained
/// element of degree `l`.
pub fn verify_orthogonality(
    ctx: &PukanszkyContext,
    kind: Kind,
    l: usize,
    max_mn: usize,
    seeds: (u64, u64),
) -> Result<OrthogonalityReport> {
    let (g, g2) = match kind {
        Kind::Beta => {
            if l != 1 {
                return Err(Error::Precondition(format!("β families live in degree 1, got l={l}")));
            }
            (complement_sample(ctx, 1, seeds.0)?, complement_sample(ctx, 1, seeds.1)?)
        }
        Kind::Gamma => {
            if l < 2 {
                return Err(Error::Precondition(format!("γ families need l >= 2, got l={l}")));
            }
            (complement_sample(ctx, l, seeds.0)?, random_element(ctx, l, seeds.1)?)
        }
    };
    let base = g.base().dot(g2.base());
    if !base.is_constant() {
        return Err(Error::Precondition("seed elements must have rational coefficients".into()));
    }
    let base = base.coeff(0);
    let mut a = OrbitFamily::new(ctx, g);
    let mut b = OrbitFamily::new(ctx, g2);
    let mut rep = OrthogonalityReport { kind, l, entries: 0, p_dependent: 0, mismatches: Vec::new() };
    let mx = max_mn as i64;
    for m in 0..=mx {
        for n in 0..=mx {
            for m2 in 0..=mx {
                for n2 in 0..=mx {
                    let (mu, nu, m2u, n2u) = (m as usize, n as usize, m2 as usize, n2 as usize);
                    let computed = a.top(m, n).dot(b.top(m2, n2));
                    let factor = match kind {
                        Kind::Beta => beta_gram_factor(ctx, mu, nu, m2u, n2u),
                        Kind::Gamma => gamma_gram_factor(ctx, mu, nu, m2u, n2u),
                    };
                    let expected = factor * base.clone();
                    rep.entries += 1;
                    if !computed.is_constant() {
                        rep.p_dependent += 1;
                    }
                    if computed != PolyP::constant(expected.clone()) {
                        rep.mismatches.push(GramMismatch { index: (mu, nu, m2u, n2u), computed, expected });
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct CrossReport {
    pub l: usize,
    pub l2: usize,
    pub index: (usize, usize, usize, usize),
    /// Total degrees differ; the pair is orthogonal without computation.
    pub by_degree: bool,
    /// `⟨ξ_{m,n}, ξ'_{r,s}⟩` computed directly.
    pub inner: PolyP,
    /// `ξ'_{r,s} = (ξ'_{a,b})_{r-a,s-b}` with `ξ'_{a,b} ∈ S_l` for every
    /// admissible split.
    pub rewrite_ok: bool,
}

impl CrossReport {
    pub fn passed(&self) -> bool {
        self.by_degree || (self.inner.is_zero() && self.rewrite_ok)
    }
}

/// Orthogonality of `ξ_{m,n}` (`ξ ⊥ S_l`) and `ξ'_{r,s}` (`ξ' ⊥ S_{l'}`,
/// `l' < l`), computed directly and through the degree-`l` rewriting.
pub fn verify_cross(
    ctx: &PukanszkyContext,
    l: usize,
    l2: usize,
    (m, n): (usize, usize),
    (r, s): (usize, usize),
    seeds: (u64, u64),
) -> Result<CrossReport> {
    if l2 > l || l2 == 0 {
        return Err(Error::Precondition(format!("need 1 <= l' <= l, got l={l}, l'={l2}")));
    }
    let xi = complement_sample(ctx, l, seeds.0)?;
    let xi2 = complement_sample(ctx, l2, seeds.1)?;
    let index = (m, n, r, s);
    if m + n + l != r + s + l2 {
        return Ok(CrossReport { l, l2, index, by_degree: true, inner: PolyP::zero(), rewrite_ok: true });
    }
    let a = gamma_mn(ctx, &xi, m as i64, n as i64);
    let b = gamma_mn(ctx, &xi2, r as i64, s as i64);
    let inner = a.base().dot(b.base());
    let mut rewrite_ok = true;
    if l2 < l {
        let sl = sl_basis(ctx, l)?;
        let p = super::generic_p();
        let gap = l - l2;
        for a0 in 0..=gap.min(r) {
            let b0 = gap - a0;
            if b0 > s {
                continue;
            }
            let mid = gamma_mn(ctx, &xi2, a0 as i64, b0 as i64);
            if !sl.contains(&mid.base().eval(&p)) {
                rewrite_ok = false;
            }
            let mid = GradedElement::new(mid.base().clone(), l)?;
            if gamma_mn(ctx, &mid, (r - a0) as i64, (s - b0) as i64).base() != b.base() {
                rewrite_ok = false;
            }
        }
    }
    Ok(CrossReport { l, l2, index, by_degree: false, inner, rewrite_ok })
}

/// Every pair on the window `l' < l`, total degree `<= max_total`.
pub fn cross_window(
    ctx: &PukanszkyContext,
    l: usize,
    l2: usize,
    max_total: usize,
    seeds: (u64, u64),
) -> Result<Vec<CrossReport>> {
    let mut out = Vec::new();
    for total in l..=max_total {
        for m in 0..=total - l {
            let n = total - l - m;
            for r in 0..=total - l2 {
                let s = total - l2 - r;
                out.push(verify_cross(ctx, l, l2, (m, n), (r, s), seeds)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeElement;
    use crate::scalar::rational;

    fn ctx() -> PukanszkyContext {
        PukanszkyContext::new(3).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let c = ctx();
        assert_eq!(gamma_gram_factor(&c, 1, 0, 0, 1), rational(0, 1));
        assert_eq!(beta_gram_factor(&c, 1, 0, 0, 1), rational(-1, 1));
        assert_eq!(gamma_gram_factor(&c, 2, 1, 2, 1), rational(8, 1));
    }

    #[test]
    fn beta_by_hand() {
        // β = T_0 - T_1: β_{1,0} and β_{0,1} overlap with opposite signs
        let c = ctx();
        let beta = GradedElement::new(
            HeckeElement::basis("0".parse().unwrap()) - HeckeElement::basis("1".parse().unwrap()),
            1,
        )
        .unwrap();
        let x = gamma_mn(&c, &beta, 1, 0);
        let y = gamma_mn(&c, &beta, 0, 1);
        assert_eq!(x.base().dot(y.base()), PolyP::constant(rational(-2, 1)));
    }

    #[test]
    fn windows_pass() {
        let c = ctx();
        assert!(verify_orthogonality(&c, Kind::Beta, 1, 2, (1, 2)).unwrap().passed());
        assert!(verify_orthogonality(&c, Kind::Gamma, 2, 2, (1, 2)).unwrap().passed());
        assert!(verify_orthogonality(&c, Kind::Gamma, 1, 2, (1, 2)).is_err());
    }

    #[test]
    fn cross_degree_orthogonality() {
        let c = ctx();
        let reps = cross_window(&c, 2, 1, 5, (3, 4)).unwrap();
        assert!(reps.iter().all(|r| r.passed()));
        assert!(reps.iter().any(|r| !r.by_degree));
        let r = verify_cross(&c, 2, 1, (1, 0), (0, 0), (3, 4)).unwrap();
        assert!(r.by_degree);
    }

    #[test]
    fn equal_degrees_with_orthogonal_seeds() {
        let c = PukanszkyContext::new(4).unwrap();
        assert!(sl_basis(&c, 2).unwrap().complement.len() >= 2);
        // orthogonalize a second sample against the first
        let a = complement_sample(&c, 2, 1).unwrap();
        let b = complement_sample(&c, 2, 2).unwrap();
        let ab = a.base().dot(b.base()).coeff(0);
        let aa = a.base().norm_sq().coeff(0);
        let b2 = GradedElement::new(b.base().clone() - a.base().scale(&PolyP::constant(ab / aa)), 2).unwrap();
        assert!(!b2.base().is_zero());
        for (m, n, r, s) in [(0, 0, 0, 0), (1, 1, 1, 1), (2, 0, 1, 1), (1, 2, 1, 2)] {
            let x = gamma_mn(&c, &a, m, n);
            let y = gamma_mn(&c, &b2, r, s);
            assert!(x.base().dot(y.base()).is_zero());
        }
    }
}
