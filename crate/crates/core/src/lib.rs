//! Exact verification kernels for the radial masa in Hecke algebras of
//! `(Z/2)^{*L}` and for generator masas in q-Gaussian algebras.
//!
//! Algebraic identities are checked in exact arithmetic: Hecke-side
//! coefficients are polynomials in the deformation parameter `p` with
//! rational coefficients ([`PolyP`]), Fock-side amplitudes are rationals.
//! Kernels are generic over [`Scalar`], so the same code runs in `f64`
//! (and `Complex64` where phases appear) for numerical sweeps.

pub mod cli;
pub mod coxeter;
pub mod error;
pub mod hecke;
pub mod linalg;
pub mod poly;
pub mod popa;
pub mod pukanszky;
pub mod qfock;
pub mod radial;
pub mod scalar;
pub mod suites;
pub mod verdict;

pub use coxeter::{FreeCoxeterGroup, Word};
pub use error::{Error, Result};
pub use hecke::{HeckeAlgebra, HeckeElement, SymbolicHecke};
pub use poly::{Poly, PolyP};
pub use scalar::{Rational, Ring, Scalar};

/// Hecke element with symbolic coefficients in `p`.
pub type SymbolicElement = HeckeElement<PolyP>;
/// Symbol vector with exact coefficients (`p` specialised).
pub type ExactSymbol = HeckeElement<Rational>;
/// Symbol vector in floating point.
pub type FloatSymbol = HeckeElement<f64>;

pub use qfock::{FockSpace, FockVector, TensorWord};

/// q-Fock space with exact rational amplitudes and `q`.
pub type ExactFock = FockSpace<Rational>;
/// q-Fock space in floating point.
pub type FloatFock = FockSpace<f64>;
