//! Truncated commutant experiment: symbols `ξ` supported in the ball of
//! radius `K` with `(h - R_h) ξ = 0`.
//!
//! Two equation windows are offered.  [`Window::FullImage`] keeps every
//! coordinate of `(h - R_h) ξ` (words up to length `K + 1`); its solutions
//! are exactly the truncated radial vectors.  [`Window::Interior`] keeps only
//! coordinates of length `<= K - 1`, which leaves the two outer shells
//! unconstrained and admits non-radial solutions; it is available as a
//! measurement.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::linalg::SparseEchelon;
use crate::radial::RadialContext;
use crate::scalar::{rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    /// All rows of `(h - R_h) ξ`.
    FullImage,
    /// Rows indexed by words of length `<= K - 1`.
    Interior,
}

#[derive(Clone, Debug)]
pub struct CommutantReport {
    pub truncation: usize,
    pub window: Window,
    /// Number of unknowns (size of the ball of radius `K`).
    pub unknowns: usize,
    pub equations: usize,
    pub kernel_dim: usize,
    /// Dimension of the kernel after restriction to the inspected ball.
    pub restricted_dim: usize,
    /// Rank of the restricted kernel modulo radial vectors; zero iff every
    /// restricted solution is radial.
    pub non_radial_rank: usize,
    /// Largest squared distance of a restricted kernel basis vector from the
    /// radial subspace (exact).
    pub max_distance_sq: Rational,
    /// Radius of the inspected ball.
    pub inspected_radius: usize,
}

impl CommutantReport {
    pub fn all_radial(&self) -> bool {
        self.non_radial_rank == 0
    }
}

/// Solves the commutation equations in exact arithmetic at `p = -3/7` (the
/// equations do not depend on `p`: the `p` terms of `h` and `R_h` cancel).
pub fn commutant_probe(ctx: &RadialContext, window: Window) -> Result<CommutantReport> {
    let k = ctx.truncation();
    if k < 3 {
        return Err(Error::Precondition(format!("commutant probe needs K >= 3, got {k}")));
    }
    let ball = ctx.group().ball(k);
    let alg = HeckeAlgebra::new(*ctx.group(), rational(-3, 7));

    // rows[t][u] = coefficient of T_t in (h - R_h) T_u
    let mut rows: BTreeMap<Word, BTreeMap<usize, Rational>> = BTreeMap::new();
    for (u_idx, u) in ball.iter().enumerate() {
        let e: HeckeElement<Rational> = HeckeElement::basis(u.clone());
        let col = alg.left_h(&e) - alg.right_h(&e);
        for (t, c) in col.into_terms() {
            rows.entry(t).or_default().insert(u_idx, c);
        }
    }
    let row_limit = match window {
        Window::FullImage => k + 1,
        Window::Interior => k - 1,
    };
    let mut echelon = SparseEchelon::new(ball.len());
    let mut equations = 0;
    for (t, row) in rows {
        if t.len() <= row_limit {
            equations += 1;
            echelon.push(row);
        }
    }
    let kernel = echelon.nullspace();

    let inspected_radius = match window {
        Window::FullImage => k,
        Window::Interior => k - 2,
    };
    let keep: Vec<usize> = ball.iter().enumerate().filter(|(_, w)| w.len() <= inspected_radius).map(|(i, _)| i).collect();
    // restricted kernel, then its rank modulo the radial subspace
    let mut restricted = SparseEchelon::new(keep.len());
    let mut restricted_vectors = Vec::new();
    for v in &kernel {
        let r: Vec<Rational> = keep.iter().map(|&i| v[i].clone()).collect();
        if restricted.push(r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect()) {
            restricted_vectors.push(r);
        }
    }
    let restricted_dim = restricted.rank();
    let mut with_radial = SparseEchelon::new(keep.len());
    for n in 0..=inspected_radius {
        let sphere = keep.iter().enumerate().filter(|(_, &i)| ball[i].len() == n);
        with_radial.push(sphere.map(|(j, _)| (j, rational(1, 1))).collect());
    }
    let radial_rank = with_radial.rank();
    for r in &restricted_vectors {
        with_radial.push(r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect());
    }
    let non_radial_rank = with_radial.rank() - radial_rank;

    let mut max_distance_sq = Rational::zero();
    for r in &restricted_vectors {
        let sym = HeckeElement::from_terms(keep.iter().zip(r).map(|(&i, c)| (ball[i].clone(), c.clone())));
        let proj = RadialContext::new(ctx.generators(), inspected_radius.max(1))?.radial_project(&sym)?;
        let d = (sym - proj).norm_sq();
        if d > max_distance_sq {
            max_distance_sq = d;
        }
    }
    Ok(CommutantReport {
        truncation: k,
        window,
        unknowns: ball.len(),
        equations,
        kernel_dim: kernel.len(),
        restricted_dim,
        non_radial_rank,
        max_distance_sq,
        inspected_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_image_kernel_is_radial() {
        for k in 3..=6 {
            let ctx = RadialContext::new(3, k).unwrap();
            let rep = commutant_probe(&ctx, Window::FullImage).unwrap();
            assert_eq!(rep.kernel_dim, k + 1, "K={k}");
            assert!(rep.all_radial());
            assert!(rep.max_distance_sq.is_zero());
        }
        let rep = commutant_probe(&RadialContext::new(4, 4).unwrap(), Window::FullImage).unwrap();
        assert_eq!(rep.kernel_dim, 5);
        assert!(rep.all_radial());
    }

    #[test]
    fn radial_vectors_solve_the_equations() {
        let ctx = RadialContext::new(3, 5).unwrap();
        let alg = HeckeAlgebra::new(*ctx.group(), rational(-1, 2));
        for n in 0..=5 {
            let hn = ctx.h_n(n).eval(&rational(0, 1));
            assert!((alg.left_h(&hn) - alg.right_h(&hn)).is_zero());
        }
    }

    #[test]
    fn interior_window_leaves_room() {
        let ctx = RadialContext::new(3, 6).unwrap();
        let rep = commutant_probe(&ctx, Window::Interior).unwrap();
        assert!(rep.kernel_dim > 7);
        assert!(rep.restricted_dim >= rep.inspected_radius + 1);
    }
}
