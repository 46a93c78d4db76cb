//! Spectral density of `h` under the trace, and moment comparison by
//! quadrature against the exact moments `τ(h^n)`.
//!
//! With `L̃ = L - 1` and `y = x - p`, the unnormalized density is
//! `L̃ √(4L̃ - y²) / (π [-y² - p(2-L) y + p²(L-1) + L²])` on `|y| <= 2√L̃`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::radial::RadialContext;
use crate::scalar::{rational_to_f64, Rational};

/// Result of evaluating the density formula at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DensityValue {
    Value(f64),
    /// The bracketed denominator is `<= 0` inside the support.
    Anomaly { x: f64, denominator: f64 },
}

fn denominator(l: f64, y: f64, p: f64) -> f64 {
    -y * y - p * (2.0 - l) * y + p * p * (l - 1.0) + l * l
}

/// The unnormalized density at `x`; zero outside the support.
pub fn density(generators: usize, x: f64, p: f64) -> DensityValue {
    let l = generators as f64;
    let lt = l - 1.0;
    let y = x - p;
    let rad = 4.0 * lt - y * y;
    if rad <= 0.0 {
        return DensityValue::Value(0.0);
    }
    let den = denominator(l, y, p);
    if den <= 0.0 {
        return DensityValue::Anomaly { x, denominator: den };
    }
    DensityValue::Value(lt * rad.sqrt() / (PI * den))
}

/// Support `[p - 2√(L-1), p + 2√(L-1)]`.
pub fn support(generators: usize, p: f64) -> (f64, f64) {
    let r = 2.0 * ((generators - 1) as f64).sqrt();
    (p - r, p + r)
}

/// Normalization and moments of the density, computed by double-exponential
/// quadrature after the substitution `x = p + 2√L̃ cos θ`, which removes the
/// square-root endpoint singularities.
#[derive(Clone, Debug)]
pub struct QuadratureMoments {
    /// Total mass of the unnormalized density.
    pub mass: f64,
    /// `∫ x^n dμ` for the normalized measure, `n = 0..=max_n`.
    pub moments: Vec<f64>,
    pub error_estimate: f64,
}

pub fn quadrature_moments(generators: usize, p: f64, max_n: usize, tol: f64) -> Result<QuadratureMoments> {
    let l = generators as f64;
    let lt = l - 1.0;
    let r = 2.0 * lt.sqrt();
    // scan for a non-positive denominator before integrating
    let scan = 4096;
    for i in 0..=scan {
        let theta = PI * i as f64 / scan as f64;
        let y = r * theta.cos();
        let den = denominator(l, y, p);
        if den <= 0.0 && (4.0 * lt - y * y) > 0.0 {
            return Err(Error::DensityAnomaly { x: p + y, denominator: den });
        }
    }
    // dx = r sin θ dθ (orientation absorbed), √(4L̃ - y²) = r sin θ
    let weight = |theta: f64| {
        let y = r * theta.cos();
        let s = theta.sin();
        lt * r * s * r * s / (PI * denominator(l, y, p))
    };
    let mass_out = quadrature::integrate(weight, 0.0, PI, tol);
    let mass = mass_out.integral;
    let mut moments = Vec::with_capacity(max_n + 1);
    let mut err = mass_out.error_estimate / mass;
    for n in 0..=max_n {
        let out = quadrature::integrate(
            |theta| {
                let x = p + r * theta.cos();
                x.powi(n as i32) * weight(theta)
            },
            0.0,
            PI,
            tol,
        );
        err = err.max(out.error_estimate / mass);
        moments.push(out.integral / mass);
    }
    Ok(QuadratureMoments { mass, moments, error_estimate: err })
}

/// One row of the moment table `n,p,exact,quadrature,abs_err`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub p: Rational,
    pub exact: Rational,
    pub quadrature: f64,
    pub abs_err: f64,
}

/// Compares exact moments `τ(h^n)` with the normalized density moments.
pub fn moment_table(ctx: &RadialContext, p: &Rational, max_n: usize, tol: f64) -> Result<Vec<MomentRow>> {
    let exact = ctx.moments_poly(max_n);
    let quad = quadrature_moments(ctx.generators(), rational_to_f64(p), max_n, tol)?;
    Ok(exact
        .iter()
        .zip(&quad.moments)
        .enumerate()
        .map(|(n, (e, &q))| {
            let e = e.eval(p);
            let abs_err = (rational_to_f64(&e) - q).abs();
            MomentRow { n, p: p.clone(), exact: e, quadrature: q, abs_err }
        })
        .collect())
}
