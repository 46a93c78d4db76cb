//! Scalar abstraction shared by the exact and floating-point kernels.
//!
//! Every algebraic kernel in the crate is written against [`Scalar`] (fields)
//! or [`Ring`] (coefficient rings such as polynomials in `p`).  The exact
//! instantiation is [`Rational`]; sweeps use `f64` and, where phases are
//! needed, `Complex64`.

use std::fmt::Debug;
use std::ops::{AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, NumAssign, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// A commutative ring with unit.  Coefficients of Hecke elements live here.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + AddAssign
        + SubAssign
        + Send
        + Sync
        + 'static
{
}

/// A field of scalars: exact rationals, `f32`/`f64`, or `Complex64`.
pub trait Scalar: Num + NumAssign + Neg<Output = Self> + Ring {
    /// True when arithmetic is exact, so equality checks need no tolerance.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Real part as `f64`.
    fn to_f64(&self) -> f64;

    fn abs_f64(&self) -> f64;

    fn conj(&self) -> Self {
        self.clone()
    }

    /// Square root when it exists in the field (perfect squares for rationals).
    fn sqrt_exact(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// `|x|^2` as the field element `conj(x) * x`.
    fn norm_sq(&self) -> Self {
        self.conj() * self.clone()
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn abs_f64(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational::new(n, d))
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_f64(&self) -> f64 {
        self.abs()
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r) as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn abs_f64(&self) -> f64 {
        self.abs() as f64
    }

    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }

    fn to_f64(&self) -> f64 {
        self.re
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn sqrt_exact(&self) -> Option<Self> {
        Some(self.sqrt())
    }
}

/// Lossy conversion that stays accurate when numerator and denominator
/// individually overflow `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

/// Parses `"num/den"`, a plain integer, or a finite decimal such as `"-0.9"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int_part: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(int_part.abs() * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Bit-exact `"num/den"` serialization (the denominator is always written).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_accepted_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rational(1, 2));
        assert_eq!(parse_rational("-3/7").unwrap(), rational(-3, 7));
        assert_eq!(parse_rational("4").unwrap(), rational(4, 1));
        assert_eq!(parse_rational("-0.9").unwrap(), rational(-9, 10));
        assert_eq!(parse_rational("0.05").unwrap(), rational(1, 20));
        assert_eq!(parse_rational("-.5").unwrap(), rational(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&rational(6, 4)), "3/2");
        assert_eq!(format_rational(&rational(3, 1)), "3/1");
        assert_eq!(format_rational(&rational(-1, 3)), "-1/3");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(rational(9, 4).sqrt_exact(), Some(rational(3, 2)));
        assert_eq!(rational(2, 1).sqrt_exact(), None);
        assert_eq!(rational(-1, 1).sqrt_exact(), None);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(num_traits::pow(BigInt::from(10), 400), num_traits::pow(BigInt::from(10), 399));
        assert!((rational_to_f64(&big) - 10.0).abs() < 1e-9);
    }
}
