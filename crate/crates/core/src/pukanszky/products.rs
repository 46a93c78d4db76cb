//! The seven product identities for the orbit families.
//!
//! Cases 1, 4, 5 hold for any `γ ∈ C^l[W]` and are checked on unconstrained
//! random elements; cases 2, 7 use `γ ⊥ S_l`, cases 3, 6 use `β ⊥ S_1`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hecke::HeckeElement;
use crate::poly::PolyP;
use crate::pukanszky::{complement_sample, random_element, OrbitFamily, PukanszkyContext};
use crate::scalar::rational;

#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub case: u8,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    /// Left side minus right side.
    pub residual: HeckeElement<PolyP>,
}

impl ProductCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

fn pre(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}

/// Whether `(case, l, m, n)` lies in the range the identity is stated for.
pub fn in_range(case: u8, l: usize, m: usize, n: usize) -> bool {
    match case {
        1 => l >= 1 && m >= 1,
        2 | 7 if l < 2 => false,
        2 => true,
        3 | 6 => l == 1 && m == 0,
        4 => l >= 1 && ((m >= 1 && n >= 1) || m + n <= l),
        5 => l >= 1 && m == 0 && n == 0,
        7 => m >= 1 && n >= 1,
        _ => false,
    }
}

pub fn verify_product(ctx: &PukanszkyContext, case: u8, l: usize, m: usize, n: usize, seed: u64) -> Result<ProductCheck> {
    pre((1..=7).contains(&case), || format!("unknown case {case}"))?;
    pre(in_range(case, l, m, n), || format!("case {case} is not stated for l={l}, m={m}, n={n}"))?;
    let g = match case {
        1 | 4 | 5 => random_element(ctx, l, seed)?,
        _ => complement_sample(ctx, l, seed)?,
    };
    let residual = residual(ctx, &mut OrbitFamily::new(ctx, g), case, m, n);
    Ok(ProductCheck { case, l, m, n, seed, residual })
}

/// Left minus right side of `case` for the element underlying `fam`.
fn residual(ctx: &PukanszkyContext, fam: &mut OrbitFamily, case: u8, m: usize, n: usize) -> HeckeElement<PolyP> {
    let alg = ctx.algebra();
    let p = PolyP::p();
    let lm1 = PolyP::constant(rational(ctx.generators() as i64 - 1, 1));
    let h1 = ctx.h(1);
    let l = fam.degree();
    let (mi, ni) = (m as i64, n as i64);
    match case {
        1 | 2 => {
            let lhs = alg.left_h(fam.top(mi, ni));
            let mut rhs = fam.top(mi + 1, ni).clone();
            rhs += &fam.top(mi, ni).scale(&p);
            rhs += &fam.top(mi - 1, ni).scale(&lm1);
            lhs - rhs
        }
        3 => {
            let lhs = alg.left_h(fam.top(0, ni));
            let mut rhs = fam.top(1, ni).clone();
            rhs += &fam.top(0, ni).scale(&p);
            rhs -= fam.top(0, ni - 1);
            lhs - rhs
        }
        4 => {
            let full = fam.full(m, n).clone();
            let mut r = HeckeElement::zero();
            if m >= 1 && n >= 1 {
                let d = l + m + n;
                r += &(alg.mul_project(&h1, &full, d + 1) - alg.mul_project(&h1, &full.project_degree(d), d + 1));
            }
            // for m + n = l the projection index is -1 and both sides vanish
            if m + n < l {
                let d = l - m - n;
                r += &(alg.mul_project(&h1, &full, d - 1) - alg.mul_project(&h1, &full.project_degree(d), d - 1));
            }
            r
        }
        5 => {
            let g = fam.element().base().clone();
            let up = alg.mul_project(&h1, &g, l + 1);
            alg.mul_project(&h1, &up, l) - g.scale(&lm1)
        }
        6 => {
            let beta = fam.element().base().clone();
            let up = alg.mul_project(&beta, &ctx.h(ni), n + 1);
            let lhs = alg.mul_project(&h1, &up, n);
            let rhs = if n == 0 { HeckeElement::zero() } else { alg.mul_project(&beta, &ctx.h(ni - 1), n) };
            lhs + rhs
        }
        7 => {
            let top = fam.top(mi, ni).clone();
            alg.mul_project(&top, &ctx.h(mi + ni), l)
        }
        _ => unreachable!(),
    }
}

/// Runs every in-range check of the window, sharing the orbit families of
/// each `(l, seed)` between cases.  Results are in the order of [`window`].
pub fn verify_window(ctx: &PukanszkyContext, max_l: usize, max_mn: usize, seeds: &[u64]) -> Result<Vec<ProductCheck>> {
    let jobs: Vec<(usize, u64)> = (1..=max_l).flat_map(|l| seeds.iter().map(move |&s| (l, s))).collect();
    let per_job: Vec<Result<Vec<ProductCheck>>> = jobs
        .par_iter()
        .map(|&(l, seed)| {
            let mut free = OrbitFamily::new(ctx, random_element(ctx, l, seed)?);
            let mut constrained = OrbitFamily::new(ctx, complement_sample(ctx, l, seed)?);
            let mut out = Vec::new();
            for (case, _, m, n, _) in window(max_l, max_mn, &[seed]).into_iter().filter(|t| t.1 == l) {
                let fam = if matches!(case, 1 | 4 | 5) { &mut free } else { &mut constrained };
                out.push(ProductCheck { case, l, m, n, seed, residual: residual(ctx, fam, case, m, n) });
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_job {
        all.extend(r?);
    }
    let order = |c: &ProductCheck| (c.case, c.l, c.m, c.n, seeds.iter().position(|&s| s == c.seed));
    all.sort_by_key(order);
    Ok(all)
}

/// All in-range `(case, l, m, n, seed)` tuples of a window.
pub fn window(max_l: usize, max_mn: usize, seeds: &[u64]) -> Vec<(u8, usize, usize, usize, u64)> {
    let mut out = Vec::new();
    for case in 1..=7u8 {
        for l in 1..=max_l {
            for m in 0..=max_mn {
                for n in 0..=max_mn {
                    if in_range(case, l, m, n) {
                        out.extend(seeds.iter().map(|&s| (case, l, m, n, s)));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeElement;
    use crate::pukanszky::{gamma_mn, GradedElement};

    fn ctx() -> PukanszkyContext {
        PukanszkyContext::new(3).unwrap()
    }

    #[test]
    fn anchor_examples() {
        let c = ctx();
        assert!(verify_product(&c, 1, 2, 1, 1, 0).unwrap().passed());
        assert!(verify_product(&c, 3, 1, 0, 1, 0).unwrap().passed());
        assert!(verify_product(&c, 7, 2, 1, 1, 0).unwrap().passed());
    }

    #[test]
    fn case3_with_explicit_beta() {
        let c = ctx();
        let beta = GradedElement::new(
            HeckeElement::basis("0".parse().unwrap()) - HeckeElement::basis("1".parse().unwrap()),
            1,
        )
        .unwrap();
        let alg = c.algebra();
        for n in 0..=3i64 {
            let lhs = alg.left_h(gamma_mn(&c, &beta, 0, n).base());
            let rhs = gamma_mn(&c, &beta, 1, n).base().clone()
                + gamma_mn(&c, &beta, 0, n).base().scale(&PolyP::p())
                - gamma_mn(&c, &beta, 0, n - 1).base().clone();
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn sign_matters_in_case3() {
        // with +β_{0,n-1} the identity fails
        let c = ctx();
        let r = verify_product(&c, 3, 1, 0, 2, 4).unwrap();
        assert!(r.passed());
        let beta = complement_sample(&c, 1, 4).unwrap();
        let prev = gamma_mn(&c, &beta, 0, 1).base().clone();
        assert!(!(r.residual - prev.scale(&PolyP::constant(rational(2, 1)))).is_zero());
    }

    #[test]
    fn case7_needs_complement() {
        // for a generic γ the projection is nonzero
        let c = ctx();
        let g = random_element(&c, 2, 1).unwrap();
        let top = gamma_mn(&c, &g, 1, 1).base().clone();
        assert!(!c.algebra().mul_project(&top, &c.h(2), 2).is_zero());
    }

    #[test]
    fn preconditions() {
        let c = ctx();
        assert!(matches!(verify_product(&c, 2, 1, 0, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(verify_product(&c, 1, 2, 0, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(verify_product(&c, 8, 2, 1, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(verify_product(&c, 3, 2, 0, 1, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn window_runner_matches_single_checks() {
        let c = ctx();
        let all = verify_window(&c, 2, 2, &[0, 1]).unwrap();
        assert_eq!(all.len(), window(2, 2, &[0, 1]).len());
        for r in all.iter().step_by(7) {
            let single = verify_product(&c, r.case, r.l, r.m, r.n, r.seed).unwrap();
            assert_eq!(single.residual, r.residual);
        }
    }

    #[test]
    fn small_window_all_cases() {
        let c = ctx();
        for (case, l, m, n, s) in window(2, 2, &[0, 1]) {
            let r = verify_product(&c, case, l, m, n, s).unwrap();
            assert!(r.passed(), "case {case} l={l} m={m} n={n}: {:?}", r.residual);
        }
    }
}
