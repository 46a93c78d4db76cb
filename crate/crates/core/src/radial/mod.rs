//! The radial element `h = Σ_s T_s`, its spheres `h_n`, the radial
//! projection, moments, and the approximation and commutant experiments
//! built on them.

pub mod commutant;
pub mod density;
pub mod approx;

use num_traits::{One, Zero};

use crate::coxeter::FreeCoxeterGroup;
use crate::error::{Error, Result};
use crate::hecke::{HeckeElement, SymbolicHecke};
use crate::poly::PolyP;
use crate::scalar::{rational, Rational, Scalar};

/// `L` generators plus a length truncation `K` for `l^2` computations.
#[derive(Clone, Debug)]
pub struct RadialContext {
    algebra: SymbolicHecke,
    truncation: usize,
}

/// Residuals of the sphere recurrence at level `n`.
#[derive(Clone, Debug)]
pub struct RecurrenceCheck {
    pub n: usize,
    /// `h h_n - (h_{n+1} + (L-1) h_{n-1} + p h_n)`.
    pub residual: HeckeElement<PolyP>,
    /// `h^2 - (h_2 + p h + L h_0)`.
    pub companion_residual: HeckeElement<PolyP>,
}

impl RecurrenceCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero() && self.companion_residual.is_zero()
    }
}

/// A polynomial `Σ_k c_k x^k` with coefficients in `Z[p]`, lowest degree first.
pub type PolyInH = Vec<PolyP>;

impl RadialContext {
    pub fn new(generators: usize, truncation: usize) -> Result<Self> {
        if truncation < 1 {
            return Err(Error::Precondition("truncation must be at least 1".into()));
        }
        let group = FreeCoxeterGroup::new(generators)?;
        Ok(RadialContext { algebra: SymbolicHecke::symbolic(group), truncation })
    }

    pub fn algebra(&self) -> &SymbolicHecke {
        &self.algebra
    }

    pub fn group(&self) -> &FreeCoxeterGroup {
        self.algebra.group()
    }

    pub fn generators(&self) -> usize {
        self.group().generators()
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    fn l_const(&self, shift: i64) -> PolyP {
        PolyP::constant(rational(self.generators() as i64 + shift, 1))
    }

    pub fn h(&self) -> HeckeElement<PolyP> {
        self.h_n(1)
    }

    pub fn h_n(&self, n: usize) -> HeckeElement<PolyP> {
        self.algebra.sphere_sum(n)
    }

    /// Checks `h h_n = h_{n+1} + (L-1) h_{n-1} + p h_n` (`n >= 2`) and the
    /// companion `h^2 = h_2 + p h + L h_0` by exact expansion.
    pub fn verify_recurrence(&self, n: usize) -> Result<RecurrenceCheck> {
        if n < 2 {
            return Err(Error::Precondition(format!("recurrence needs n >= 2, got {n}")));
        }
        let alg = &self.algebra;
        let h = self.h();
        let p = PolyP::p();
        let lhs = alg.mul(&h, &self.h_n(n));
        let rhs = self.h_n(n + 1) + self.h_n(n - 1).scale(&self.l_const(-1)) + self.h_n(n).scale(&p);
        let h2 = alg.mul(&h, &h);
        let companion = self.h_n(2) + h.scale(&p) + HeckeElement::unit().scale(&self.l_const(0));
        Ok(RecurrenceCheck { n, residual: lhs - rhs, companion_residual: h2 - companion })
    }

    /// `P_n` with `P_n(h) = h_n`, from inverting the recurrence:
    /// `P_2 = x^2 - p x - L`, `P_{n+1} = (x - p) P_n - (L-1) P_{n-1}`.
    pub fn express_hn_in_h(&self, n: usize) -> PolyInH {
        let p = PolyP::p();
        let mut prev: PolyInH = vec![PolyP::one()];
        if n == 0 {
            return prev;
        }
        let mut cur: PolyInH = vec![PolyP::zero(), PolyP::one()];
        for k in 1..n {
            // P_{k+1} = x P_k - p P_k - c_k P_{k-1}, with c_1 = L and c_k = L-1 after
            let c = if k == 1 { self.l_const(0) } else { self.l_const(-1) };
            let mut next = vec![PolyP::zero(); cur.len() + 1];
            for (i, a) in cur.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= &p * a;
            }
            for (i, a) in prev.iter().enumerate() {
                next[i] -= &c * a;
            }
            prev = std::mem::replace(&mut cur, next);
        }
        cur
    }

    /// Evaluates `Σ_k c_k h^k` by Horner's rule in the algebra.
    pub fn substitute(&self, poly: &[PolyP]) -> HeckeElement<PolyP> {
        let mut acc = HeckeElement::zero();
        for c in poly.iter().rev() {
            acc = self.algebra.left_h(&acc) + HeckeElement::unit().scale(c);
        }
        acc
    }

    /// Orthogonal projection onto radial symbols: every coefficient on the
    /// sphere of radius `k` is replaced by the sphere average.  This is also
    /// the conditional expectation onto `{h}''` read on symbols.
    pub fn radial_project<S: Scalar>(&self, v: &HeckeElement<S>) -> Result<HeckeElement<S>> {
        if let Some(d) = v.max_degree() {
            if d > self.truncation {
                return Err(Error::TruncationOverflow { degree: d, truncation: self.truncation });
            }
        }
        let mut sums = vec![S::zero(); self.truncation + 1];
        for (w, c) in v.terms() {
            sums[w.len()] += c.clone();
        }
        let mut out = HeckeElement::zero();
        for (k, s) in sums.into_iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let avg = s / S::from_int(self.group().sphere_size(k) as i64);
            for w in self.group().sphere(k) {
                out.add_term(w, avg.clone());
            }
        }
        Ok(out)
    }

    /// `τ(h^n)` as a polynomial in `p`, by exact repeated multiplication.
    pub fn moment_poly(&self, n: usize) -> PolyP {
        let mut x = HeckeElement::unit();
        for _ in 0..n {
            x = self.algebra.left_h(&x);
        }
        x.trace()
    }

    pub fn moment(&self, n: usize, p_value: &Rational) -> Rational {
        self.moment_poly(n).eval(p_value)
    }

    /// Moments `τ(h^0), ..., τ(h^max_n)` from one chain of products.
    pub fn moments_poly(&self, max_n: usize) -> Vec<PolyP> {
        let mut x = HeckeElement::unit();
        let mut out = vec![x.trace()];
        for _ in 0..max_n {
            x = self.algebra.left_h(&x);
            out.push(x.trace());
        }
        out
    }
}

/// Evaluates a polynomial in `h` with `Z[p]` coefficients at a number `x`
/// after specialising `p`; used by tests and the density module.
pub fn eval_poly_in_h<S: Scalar>(poly: &[PolyP], p: &S, x: &S) -> S {
    let mut acc = S::zero();
    for c in poly.iter().rev() {
        let cv = c.map(|r| S::from_rational(r)).eval(p);
        acc = acc * x.clone() + cv;
    }
    acc
}
