//! Orbit families `γ_{m,n} = q_{m+n+l}(h_m γ h_n)` attached to the
//! orthogonal complements of `S_l`, and exact checks of their algebra.

pub mod expansion;
pub mod products;
pub mod orthogonality;
pub mod toeplitz;

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::{FreeCoxeterGroup, Word};
use crate::error::{Error, Result};
use crate::hecke::{expect_degree, HeckeElement, SymbolicHecke};
use crate::linalg::SparseEchelon;
use crate::poly::PolyP;
use crate::scalar::{rational, Rational};

/// Rational point at which ranks over `Q(p)` are evaluated.
pub fn generic_p() -> Rational {
    rational(-3, 7)
}

/// Symbolic Hecke algebra plus helpers for graded pieces.
#[derive(Clone, Debug)]
pub struct PukanszkyContext {
    algebra: SymbolicHecke,
}

impl PukanszkyContext {
    pub fn new(generators: usize) -> Result<Self> {
        Ok(PukanszkyContext { algebra: SymbolicHecke::symbolic(FreeCoxeterGroup::new(generators)?) })
    }

    pub fn algebra(&self) -> &SymbolicHecke {
        &self.algebra
    }

    pub fn group(&self) -> &FreeCoxeterGroup {
        self.algebra.group()
    }

    pub fn generators(&self) -> usize {
        self.algebra.generators()
    }

    /// `h_n`, or zero for negative `n`.
    pub fn h(&self, n: i64) -> HeckeElement<PolyP> {
        if n < 0 {
            HeckeElement::zero()
        } else {
            self.algebra.sphere_sum(n as usize)
        }
    }

    fn words(&self, l: usize) -> (Vec<Word>, HashMap<Word, usize>) {
        let words = self.group().sphere(l);
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        (words, index)
    }
}

/// An element of `C^l[W]` (supported on words of length `l`).
#[derive(Clone, Debug, PartialEq)]
pub struct GradedElement {
    base: HeckeElement<PolyP>,
    l: usize,
}

impl GradedElement {
    pub fn new(base: HeckeElement<PolyP>, l: usize) -> Result<Self> {
        expect_degree(&base, l)?;
        Ok(GradedElement { base, l })
    }

    pub fn from_rational(v: &HeckeElement<Rational>, l: usize) -> Result<Self> {
        Self::new(v.map(|c| PolyP::constant(c.clone())), l)
    }

    pub fn base(&self) -> &HeckeElement<PolyP> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.l
    }
}

/// `S_l` together with a basis of its orthogonal complement in degree `l`.
#[derive(Clone, Debug)]
pub struct SlSubspace {
    pub l: usize,
    /// Linearly independent spanning vectors of `S_l` (at `p = -3/7`).
    pub basis: Vec<HeckeElement<Rational>>,
    /// Basis of `C^l[W] ⊖ S_l` in the standard inner product on symbols.
    pub complement: Vec<HeckeElement<Rational>>,
}

impl SlSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &HeckeElement<Rational>) -> bool {
        self.complement.iter().all(|c| c.dot(v).is_zero())
    }
}

fn to_sparse(v: &HeckeElement<Rational>, index: &HashMap<Word, usize>) -> BTreeMap<usize, Rational> {
    v.terms().iter().map(|(w, c)| (index[w], c.clone())).collect()
}

pub fn sl_basis(ctx: &PukanszkyContext, l: usize) -> Result<SlSubspace> {
    if l == 0 {
        return Err(Error::Precondition("S_l needs l >= 1".into()));
    }
    let alg = ctx.algebra();
    let h1 = ctx.h(1);
    let (words, index) = ctx.words(l);
    let p = generic_p();
    let mut echelon = SparseEchelon::new(words.len());
    let mut basis = Vec::new();
    for x in ctx.group().sphere(l - 1) {
        let tx = HeckeElement::basis(x);
        for v in [alg.mul_project(&h1, &tx, l), alg.mul_project(&tx, &h1, l)] {
            let v = v.eval(&p);
            if echelon.push(to_sparse(&v, &index)) {
                basis.push(v);
            }
        }
    }
    let complement = echelon
        .nullspace()
        .into_iter()
        .map(|c| HeckeElement::from_terms(words.iter().cloned().zip(c)))
        .collect();
    Ok(SlSubspace { l, basis, complement })
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    loop {
        let c: Vec<Rational> = (0..n).map(|_| rational(rng.gen_range(-3..=3), 1)).collect();
        if c.iter().any(|x| !x.is_zero()) {
            return c;
        }
    }
}

fn combine(vectors: &[HeckeElement<Rational>], coeffs: &[Rational]) -> HeckeElement<Rational> {
    let mut out = HeckeElement::zero();
    for (v, c) in vectors.iter().zip(coeffs) {
        out += &v.scale(c);
    }
    out
}

/// A seeded element of `C^l[W] ⊖ S_l`.
pub fn complement_sample(ctx: &PukanszkyContext, l: usize, seed: u64) -> Result<GradedElement> {
    let sl = sl_basis(ctx, l)?;
    complement_sample_from(&sl, seed)
}

pub fn complement_sample_from(sl: &SlSubspace, seed: u64) -> Result<GradedElement> {
    if sl.complement.is_empty() {
        return Err(Error::EmptyComplement { degree: sl.l });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = combine(&sl.complement, &random_coeffs(&mut rng, sl.complement.len()));
        if !v.is_zero() {
            return GradedElement::from_rational(&v, sl.l);
        }
    }
}

/// A seeded element of `C^l[W]` with no orthogonality constraint.
pub fn random_element(ctx: &PukanszkyContext, l: usize, seed: u64) -> Result<GradedElement> {
    let words = ctx.group().sphere(l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000_0000);
    let c = random_coeffs(&mut rng, words.len());
    GradedElement::from_rational(&HeckeElement::from_terms(words.into_iter().zip(c)), l)
}

/// `γ_{m,n}`; zero when `m < 0` or `n < 0`.
pub fn gamma_mn(ctx: &PukanszkyContext, g: &GradedElement, m: i64, n: i64) -> GradedElement {
    if m < 0 || n < 0 {
        let l = g.l + m.max(0) as usize + n.max(0) as usize;
        return GradedElement { base: HeckeElement::zero(), l };
    }
    let alg = ctx.algebra();
    // the top-degree part of a product only involves reduced concatenations
    let right = alg.mul_top(&g.base, &ctx.h(n));
    GradedElement { base: alg.mul_top(&ctx.h(m), &right), l: g.l + (m + n) as usize }
}

/// Memoizes `γ_{m,n}` and the full products `h_m γ h_n` of one element.
pub struct OrbitFamily<'a> {
    ctx: &'a PukanszkyContext,
    g: GradedElement,
    tops: HashMap<(i64, i64), HeckeElement<PolyP>>,
    fulls: HashMap<(usize, usize), HeckeElement<PolyP>>,
}

impl<'a> OrbitFamily<'a> {
    pub fn new(ctx: &'a PukanszkyContext, g: GradedElement) -> Self {
        OrbitFamily { ctx, g, tops: HashMap::new(), fulls: HashMap::new() }
    }

    pub fn element(&self) -> &GradedElement {
        &self.g
    }

    pub fn degree(&self) -> usize {
        self.g.l
    }

    pub fn top(&mut self, m: i64, n: i64) -> &HeckeElement<PolyP> {
        if m < 0 || n < 0 {
            return self.tops.entry((-1, -1)).or_insert_with(HeckeElement::zero);
        }
        let (ctx, g) = (self.ctx, &self.g);
        self.tops.entry((m, n)).or_insert_with(|| gamma_mn(ctx, g, m, n).base)
    }

    /// The unprojected product `h_m γ h_n`.
    pub fn full(&mut self, m: usize, n: usize) -> &HeckeElement<PolyP> {
        let (ctx, g) = (self.ctx, &self.g);
        self.fulls.entry((m, n)).or_insert_with(|| {
            let alg = ctx.algebra();
            alg.mul(&alg.mul(&ctx.h(m as i64), &g.base), &ctx.h(n as i64))
        })
    }
}

/// Gram–Schmidt over the rationals (no normalization).
pub fn orthogonalize(vectors: &[HeckeElement<Rational>]) -> Vec<HeckeElement<Rational>> {
    let mut out: Vec<HeckeElement<Rational>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let c = u.dot(v) / u.norm_sq();
            w -= &u.scale(&c);
        }
        if !w.is_zero() {
            out.push(w);
        }
    }
    out
}

/// Finite-window form of the orbit decomposition in total degree `d`:
/// `h_d` together with every `ξ_{m,n}` (`m + n + l = d`, `ξ` running over an
/// orthogonal basis of each complement) should span all of `C^d[W]`, with
/// vectors from different orbits orthogonal.
#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub degree: usize,
    pub sphere_size: usize,
    pub family_size: usize,
    pub rank: usize,
    /// Vectors belonging to different orbits are orthogonal.
    pub pairwise_orthogonal: bool,
}

impl OrbitDecomposition {
    pub fn exhausts(&self) -> bool {
        self.pairwise_orthogonal && self.rank == self.sphere_size && self.family_size == self.sphere_size
    }
}

pub fn orbit_decomposition(ctx: &PukanszkyContext, d: usize) -> Result<OrbitDecomposition> {
    let p = generic_p();
    let (words, index) = ctx.words(d);
    let mut family: Vec<HeckeElement<Rational>> = vec![ctx.h(d as i64).eval(&p)];
    let mut orbit = vec![0usize];
    for l in 1..=d {
        let sl = sl_basis(ctx, l)?;
        for xi in orthogonalize(&sl.complement) {
            let g = GradedElement::from_rational(&xi, l)?;
            let id = orbit.last().unwrap() + 1;
            for m in 0..=(d - l) as i64 {
                let n = (d - l) as i64 - m;
                family.push(gamma_mn(ctx, &g, m, n).base.eval(&p));
                orbit.push(id);
            }
        }
    }
    let mut echelon = SparseEchelon::new(words.len());
    for v in &family {
        echelon.push(to_sparse(v, &index));
    }
    let mut pairwise_orthogonal = true;
    'outer: for i in 0..family.len() {
        for j in 0..i {
            if orbit[i] != orbit[j] && !family[i].dot(&family[j]).is_zero() {
                pairwise_orthogonal = false;
                break 'outer;
            }
        }
    }
    Ok(OrbitDecomposition {
        degree: d,
        sphere_size: words.len(),
        family_size: family.len(),
        rank: echelon.rank(),
        pairwise_orthogonal,
    })
}

/// `(L - 1)^k` as a rational.
pub(crate) fn lm1_pow(ctx: &PukanszkyContext, k: usize) -> Rational {
    let mut out = Rational::one();
    for _ in 0..k {
        out *= rational(ctx.generators() as i64 - 1, 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(l: usize) -> PukanszkyContext {
        PukanszkyContext::new(l).unwrap()
    }

    #[test]
    fn s1_is_spanned_by_h1() {
        let c = ctx(3);
        let s1 = sl_basis(&c, 1).unwrap();
        assert_eq!(s1.dim(), 1);
        assert!(s1.contains(&c.h(1).eval(&generic_p())));
        assert_eq!(s1.complement.len(), 2);
        for v in &s1.complement {
            let total: Rational = v.terms().values().cloned().sum();
            assert!(total.is_zero());
        }
        assert!(matches!(sl_basis(&c, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn sl_dimensions() {
        for gens in [3usize, 4] {
            let c = ctx(gens);
            for l in 2..=4 {
                let sl = sl_basis(&c, l).unwrap();
                assert!(sl.dim() <= 2 * gens * (gens - 1).pow(l as u32 - 2));
                assert_eq!(sl.dim() + sl.complement.len(), c.group().sphere_size(l) as usize);
                if gens == 3 && l <= 3 {
                    assert!(!sl.complement.is_empty());
                }
            }
        }
    }

    #[test]
    fn complement_samples() {
        let c = ctx(3);
        for l in 1..=3 {
            let sl = sl_basis(&c, l).unwrap();
            let a = complement_sample(&c, l, 1).unwrap();
            let b = complement_sample(&c, l, 2).unwrap();
            assert_eq!(a, complement_sample(&c, l, 1).unwrap());
            for v in &sl.basis {
                assert!(a.base().eval(&generic_p()).dot(v).is_zero());
            }
            if sl.complement.len() >= 2 {
                let (_, index) = c.words(l);
                let mut e = SparseEchelon::new(index.len());
                assert!(e.push(to_sparse(&a.base().eval(&generic_p()), &index)));
                assert!(e.push(to_sparse(&b.base().eval(&generic_p()), &index)));
            }
        }
    }

    #[test]
    fn gamma_conventions() {
        let c = ctx(3);
        let g = complement_sample(&c, 2, 7).unwrap();
        assert_eq!(gamma_mn(&c, &g, 0, 0), g);
        assert!(gamma_mn(&c, &g, -1, 0).base().is_zero());
        let g10 = gamma_mn(&c, &g, 1, 0);
        assert_eq!(g10.degree(), 3);
        let n = g.base().norm_sq();
        assert_eq!(g10.base().norm_sq(), n.scale(&rational(2, 1)));
        // agrees with projecting the full product
        let full = c.algebra().mul(&c.h(2), &c.algebra().mul(g.base(), &c.h(1)));
        assert_eq!(gamma_mn(&c, &g, 2, 1).base(), &full.project_degree(5));
    }

    #[test]
    fn orbit_families_exhaust_each_degree() {
        for gens in [3usize, 4] {
            let c = ctx(gens);
            for d in 1..=3 {
                let rep = orbit_decomposition(&c, d).unwrap();
                assert!(rep.exhausts(), "{rep:?}");
            }
        }
        assert!(orbit_decomposition(&ctx(3), 4).unwrap().exhausts());
    }
}
