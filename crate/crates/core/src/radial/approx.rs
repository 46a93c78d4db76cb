//! Approximating `e_v - e_w` by `h η - R_h η`.
//!
//! For the adjacent configuration `w = az`, `v = zb` the approximant is
//! `η_δ = Σ_{k<=K} c^k ψ_k` with `c = (1-δ)/(L-1)` and
//! `ψ_k = Σ e_{x a z b y}` over `|x| = |y| = k`, `x` not ending in `a`,
//! `y` not starting with `b`.  General pairs of equal length are chained
//! through adjacent steps.
//!
//! Two routes compute the residual `‖e_v - e_w - (hη - R_hη)‖`:
//! * [`ShellVector`]: `ψ_k` is the indicator of the class
//!   `C(k,k) = {x a z b y}`, and `h`, `R_h` act on such class indicators by a
//!   three-term rule, so arbitrarily deep truncations cost `O(K)`;
//! * [`approx_eta`] and [`explicit_residual`]: the vectors are built word by
//!   word and multiplied in the Hecke algebra (small `K` only).

use std::collections::BTreeMap;

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::radial::RadialContext;

/// One adjacent step `w = az -> v = zb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacentStep {
    pub a: u8,
    pub z: Word,
    pub b: u8,
}

impl AdjacentStep {
    pub fn new(ctx: &RadialContext, z: Word, a: usize, b: usize) -> Result<Self> {
        let g = ctx.group();
        let a = g.check_generator(a)?;
        let b = g.check_generator(b)?;
        g.check_word(&z)?;
        Word::generator(a)
            .concat(&z)
            .and_then(|az| az.concat(&Word::generator(b)))
            .ok_or_else(|| Error::Precondition(format!("a z b = {a}|{z}|{b} is not reduced")))?;
        Ok(AdjacentStep { a, z, b })
    }

    /// `w = az`.
    pub fn w(&self) -> Word {
        Word::generator(self.a).concat(&self.z).expect("checked")
    }

    /// `v = zb`.
    pub fn v(&self) -> Word {
        self.z.concat(&Word::generator(self.b)).expect("checked")
    }

    pub fn core(&self) -> Word {
        self.w().concat(&Word::generator(self.b)).expect("checked")
    }
}

/// `Σ_{k>K} 4(1-δ)^{2k}`, the tail of the norm bound on the terms of `η_δ`.
pub fn tail_bound(delta: f64, truncation: usize) -> f64 {
    let r = (1.0 - delta) * (1.0 - delta);
    4.0 * r.powi(truncation as i32 + 1) / (1.0 - r)
}

/// Smallest `K` whose tail bound is at most `tol`.
pub fn truncation_for(delta: f64, tol: f64) -> Result<usize> {
    check_delta(delta)?;
    let mut k = 0usize;
    while tail_bound(delta, k) > tol {
        k += 1;
        if k > 1_000_000 {
            return Err(Error::TruncationTooSmall(format!("no truncation reaches tail {tol} at δ = {delta}")));
        }
    }
    Ok(k)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Precondition(format!("δ must lie in (0,1), got {delta}")));
    }
    Ok(())
}

fn check_truncation(delta: f64, truncation: usize, tol: f64) -> Result<()> {
    let tail = tail_bound(delta, truncation);
    if tail > tol {
        return Err(Error::TruncationTooSmall(format!(
            "tail bound {tail:.3e} at K = {truncation} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok(())
}

/// Word classes of the shell-class calculus for a fixed step `a z b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shell {
    /// `{x a z b y : |x| = i, |y| = j}`, `x` not ending in `a`, `y` not starting with `b`.
    Core(usize, usize),
    /// `{z b y : |y| = j}`.
    Right(usize),
    /// `{x a z : |x| = i}`.
    Left(usize),
}

/// A linear combination of class indicators.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShellVector {
    coeffs: BTreeMap<Shell, f64>,
}

impl ShellVector {
    pub fn add(&mut self, s: Shell, c: f64) {
        *self.coeffs.entry(s).or_insert(0.0) += c;
    }

    pub fn coeffs(&self) -> &BTreeMap<Shell, f64> {
        &self.coeffs
    }

    pub fn scaled_sum(&self, other: &ShellVector, c: f64) -> ShellVector {
        let mut out = self.clone();
        for (&s, &x) in &other.coeffs {
            out.add(s, c * x);
        }
        out
    }

    /// `Σ_k c^k 1_{C(k,k)}` for `k <= K`.
    pub fn eta(generators: usize, delta: f64, truncation: usize) -> ShellVector {
        let c = (1.0 - delta) / (generators - 1) as f64;
        let mut out = ShellVector::default();
        let mut ck = 1.0;
        for k in 0..=truncation {
            out.add(Shell::Core(k, k), ck);
            ck *= c;
        }
        out
    }

    /// Left action of `h` on class indicators:
    /// `h 1_{C(i,j)} = 1_{C(i+1,j)} + p 1_{C(i,j)} + (L-1) 1_{C(i-1,j)}` for `i >= 1`,
    /// and `1_{C(1,j)} + p 1_{C(0,j)} + 1_{Right(j)}` for `i = 0`.
    pub fn left_h(&self, generators: usize, p: f64) -> Result<ShellVector> {
        let lm = (generators - 1) as f64;
        let mut out = ShellVector::default();
        for (&s, &x) in &self.coeffs {
            let Shell::Core(i, j) = s else {
                return Err(Error::Precondition("h acts on core classes only".into()));
            };
            out.add(Shell::Core(i + 1, j), x);
            out.add(Shell::Core(i, j), p * x);
            if i == 0 {
                out.add(Shell::Right(j), x);
            } else {
                out.add(Shell::Core(i - 1, j), lm * x);
            }
        }
        Ok(out)
    }

    /// Mirror image of [`ShellVector::left_h`] for `R_h`.
    pub fn right_h(&self, generators: usize, p: f64) -> Result<ShellVector> {
        let lm = (generators - 1) as f64;
        let mut out = ShellVector::default();
        for (&s, &x) in &self.coeffs {
            let Shell::Core(i, j) = s else {
                return Err(Error::Precondition("R_h acts on core classes only".into()));
            };
            out.add(Shell::Core(i, j + 1), x);
            out.add(Shell::Core(i, j), p * x);
            if j == 0 {
                out.add(Shell::Left(i), x);
            } else {
                out.add(Shell::Core(i, j - 1), lm * x);
            }
        }
        Ok(out)
    }

    /// Squared `l^2` norm, valid when the classes carrying non-zero
    /// coefficients are pairwise disjoint; that is certified from the step
    /// and an error is returned when it cannot be.
    pub fn norm_sq(&self, generators: usize, step: &AdjacentStep) -> Result<f64> {
        let lm = (generators - 1) as f64;
        let live: Vec<(Shell, f64)> = self.coeffs.iter().filter(|(_, &x)| x != 0.0).map(|(&s, &x)| (s, x)).collect();
        let core = step.core();
        let m = core.len();
        let zl = step.z.len();
        let mut by_len: BTreeMap<usize, Vec<Shell>> = BTreeMap::new();
        for (s, _) in &live {
            let len = match *s {
                Shell::Core(i, j) => i + j + m,
                Shell::Right(j) => zl + 1 + j,
                Shell::Left(i) => zl + 1 + i,
            };
            by_len.entry(len).or_default().push(*s);
        }
        for shells in by_len.values() {
            for (x, s) in shells.iter().enumerate() {
                for t in &shells[x + 1..] {
                    if !disjoint(*s, *t, &core, step) {
                        return Err(Error::Precondition(format!("cannot certify {s:?} and {t:?} are disjoint")));
                    }
                }
            }
        }
        Ok(live
            .iter()
            .map(|(s, x)| {
                let size = match *s {
                    Shell::Core(i, j) => lm.powi((i + j) as i32),
                    Shell::Right(j) => lm.powi(j as i32),
                    Shell::Left(i) => lm.powi(i as i32),
                };
                x * x * size
            })
            .sum())
    }
}

fn has_period(word: &Word, d: usize) -> bool {
    let l = word.letters();
    (d..l.len()).all(|i| l[i] == l[i - d])
}

fn disjoint(s: Shell, t: Shell, core: &Word, step: &AdjacentStep) -> bool {
    match (s, t) {
        (Shell::Core(i, _), Shell::Core(i2, _)) => {
            // same length, core occurrences at offsets i and i2
            let d = i.abs_diff(i2);
            d < core.len() && !has_period(core, d)
        }
        (Shell::Right(0), Shell::Left(0)) | (Shell::Left(0), Shell::Right(0)) => step.v() != step.w(),
        _ => false,
    }
}

/// Residual of one adjacent step by the shell-class calculus.
pub fn adjacent_residual(
    ctx: &RadialContext,
    step: &AdjacentStep,
    delta: f64,
    truncation: usize,
    p: f64,
) -> Result<f64> {
    check_delta(delta)?;
    let l = ctx.generators();
    let eta = ShellVector::eta(l, delta, truncation);
    let comm = eta.left_h(l, p)?.scaled_sum(&eta.right_h(l, p)?, -1.0);
    let mut target = ShellVector::default();
    target.add(Shell::Right(0), 1.0);
    target.add(Shell::Left(0), -1.0);
    let residual = target.scaled_sum(&comm, -1.0);
    Ok(residual.norm_sq(l, step)?.sqrt())
}

/// Closed form of the adjacent residual:
/// `2(L-1) [δ² Σ_{k<K} (1-δ)^{2k} + (1-δ)^{2K}]`, square-rooted.
pub fn adjacent_residual_closed_form(generators: usize, delta: f64, truncation: usize) -> f64 {
    let r = (1.0 - delta) * (1.0 - delta);
    let geometric: f64 = (0..truncation).map(|k| r.powi(k as i32)).sum();
    (2.0 * (generators - 1) as f64 * (delta * delta * geometric + r.powi(truncation as i32))).sqrt()
}

/// The adjacent steps leading from `w` to `v` (`|v| = |w|`).
///
/// An adjacent pair (`w = az`, `v = zb`) is a single step.  Otherwise the
/// steps are the consecutive length-`n` windows of the concatenation `w v`
/// (`n` steps), or of `w b v` with a letter `b != w_n` when `w_n = v_1`
/// would cancel (`n + 1` steps).
pub fn chain(ctx: &RadialContext, v: &Word, w: &Word) -> Result<Vec<AdjacentStep>> {
    let n = v.len();
    if w.len() != n {
        return Err(Error::Precondition(format!("|v| = {n} differs from |w| = {}", w.len())));
    }
    if n == 0 {
        return Err(Error::Precondition("words must have length at least 1".into()));
    }
    if v == w {
        return Ok(Vec::new());
    }
    let (vl, wl) = (v.letters(), w.letters());
    let mut seq = wl.to_vec();
    if wl[1..] == vl[..n - 1] {
        seq.push(vl[n - 1]);
    } else {
        if wl[n - 1] == vl[0] {
            let b = (0..ctx.generators() as u8).find(|&b| b != wl[n - 1]).expect("L >= 3");
            seq.push(b);
        }
        seq.extend_from_slice(vl);
    }
    (0..seq.len() - n)
        .map(|i| {
            AdjacentStep::new(
                ctx,
                Word::from_reduced(seq[i + 1..i + n].to_vec()),
                seq[i] as usize,
                seq[i + n] as usize,
            )
        })
        .collect()
}

/// Outcome of [`approx_residual`].
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub delta: f64,
    pub truncation: usize,
    pub steps: usize,
    /// Triangle-inequality bound `Σ_steps ‖residual_step‖`; exact (not just a
    /// bound) for a single step.
    pub residual: f64,
    pub tail_bound: f64,
}

/// `‖e_v - e_w - (hη - R_hη)‖` for equal-length `v`, `w`, where `η` is the
/// sum of the step approximants.  `truncation` must satisfy the tail bound
/// at tolerance `tol`.
pub fn approx_residual(
    ctx: &RadialContext,
    v: &Word,
    w: &Word,
    delta: f64,
    truncation: usize,
    tol: f64,
) -> Result<ApproxReport> {
    check_delta(delta)?;
    check_truncation(delta, truncation, tol)?;
    let steps = chain(ctx, v, w)?;
    let mut residual = 0.0;
    for step in &steps {
        residual += adjacent_residual(ctx, step, delta, truncation, 0.0)?;
    }
    Ok(ApproxReport { delta, truncation, steps: steps.len(), residual, tail_bound: tail_bound(delta, truncation) })
}

/// Words `x` of length `k` not ending in `a` (lexicographic).
fn prefixes(ctx: &RadialContext, k: usize, a: u8) -> Vec<Word> {
    ctx.group().sphere(k).into_iter().filter(|x| x.last() != Some(a)).collect()
}

/// Words `y` of length `k` not starting with `b`.
fn suffixes(ctx: &RadialContext, k: usize, b: u8) -> Vec<Word> {
    ctx.group().sphere(k).into_iter().filter(|y| y.first() != Some(b)).collect()
}

/// Largest number of explicit basis vectors [`approx_eta`] will build.
pub const EXPLICIT_LIMIT: usize = 2_000_000;

/// `ψ_k = Σ e_{x a z b y}`; `ψ_0 = e_{azb}`.
pub fn psi(ctx: &RadialContext, step: &AdjacentStep, k: usize) -> HeckeElement<f64> {
    let core = step.core();
    let mut out = HeckeElement::zero();
    let ys = suffixes(ctx, k, step.b);
    for x in prefixes(ctx, k, step.a) {
        let xc = x.concat(&core).expect("x does not end in a");
        for y in &ys {
            out.add_term(xc.concat(y).expect("y does not start with b"), 1.0);
        }
    }
    out
}

/// The explicit truncated `η_δ = Σ_{k<=K} ((1-δ)/(L-1))^k ψ_k`.
pub fn approx_eta(
    ctx: &RadialContext,
    z: &Word,
    a: usize,
    b: usize,
    delta: f64,
    truncation: usize,
    tol: f64,
) -> Result<HeckeElement<f64>> {
    check_delta(delta)?;
    check_truncation(delta, truncation, tol)?;
    let step = AdjacentStep::new(ctx, z.clone(), a, b)?;
    step_eta(ctx, &step, delta, truncation)
}

fn step_eta(ctx: &RadialContext, step: &AdjacentStep, delta: f64, truncation: usize) -> Result<HeckeElement<f64>> {
    let lm = ctx.generators() - 1;
    let count: f64 = (0..=truncation).map(|k| (lm as f64).powi(2 * k as i32)).sum();
    if count > EXPLICIT_LIMIT as f64 {
        return Err(Error::Precondition(format!(
            "explicit η at K = {truncation} needs {count:.0} basis vectors (limit {EXPLICIT_LIMIT})"
        )));
    }
    let c = (1.0 - delta) / lm as f64;
    let mut out = HeckeElement::zero();
    for k in 0..=truncation {
        out += psi(ctx, step, k).scale(&c.powi(k as i32));
    }
    Ok(out)
}

/// Residual computed from explicit vectors and Hecke products at the
/// specialised parameter `p` (no tail check: meant for small `K`).
pub fn explicit_residual(
    ctx: &RadialContext,
    v: &Word,
    w: &Word,
    delta: f64,
    truncation: usize,
    p: f64,
) -> Result<f64> {
    check_delta(delta)?;
    let steps = chain(ctx, v, w)?;
    let mut eta = HeckeElement::zero();
    for step in &steps {
        eta += step_eta(ctx, step, delta, truncation)?;
    }
    let alg = HeckeAlgebra::new(*ctx.group(), p);
    let mut r = HeckeElement::basis(v.clone()) - HeckeElement::basis(w.clone());
    r -= alg.left_h(&eta);
    r += alg.right_h(&eta);
    Ok(r.norm_sq().sqrt())
}

/// One row of the `delta,K,residual` sweep table.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub truncation: usize,
    pub residual: f64,
}

/// Residuals over a δ grid, each with the minimal admissible truncation.
pub fn residual_sweep(ctx: &RadialContext, v: &Word, w: &Word, deltas: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let k = truncation_for(delta, tol)?;
            let rep = approx_residual(ctx, v, w, delta, k, tol)?;
            Ok(SweepRow { delta, truncation: k, residual: rep.residual })
        })
        .collect()
}

/// Least-squares slope of `log residual` against `log δ`.
pub fn log_log_slope(rows: &[SweepRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.delta.ln(), r.residual.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
