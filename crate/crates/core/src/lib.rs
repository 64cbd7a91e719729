//! Semiclassical heat-trace expansion of the perturbed harmonic oscillator
//!
//! `H = Σ (−ħ²/2 ∂ᵢ² + xᵢ²/2 − ħ/2) + ħ²V`
//!
//! The crate is organised in tiers:
//!
//! - [`polydiff`]: exact rational polynomials and polynomial-coefficient
//!   differential operators, with ħ-grading.
//! - [`kantorovitz`]: the commutator recursion for the operators `X_m`, their
//!   evaluation on the Mehler kernel diagonal, and assembly of the
//!   expansion coefficients `Υ_k(s, x)`.
//! - [`symbolcalc`]: Kohn–Nirenberg symbol recursions (full, principal,
//!   subprincipal), the odd-order leading terms `ρ_m`, and the universal
//!   radial structure of `∫ρ_m`.
//! - [`mehler`]: closed-form free kernels, the `s ↔ t` time change and the
//!   exact free trace.
//! - [`oracle`]: a Hermite-basis spectral discretization of `H` used as
//!   independent numerical ground truth, plus the ħ-sweep fit.
//! - [`invariants`]: the three heat invariants, sphere functionals and the
//!   inverse-spectral detectors.

pub mod error;
pub mod fixtures;
pub mod invariants;
pub mod kantorovitz;
pub mod mehler;
pub mod oracle;
pub mod polydiff;
pub mod quad;
pub mod symbolcalc;

pub use error::{Error, Result};
pub use polydiff::{DiffOp, HGradedOp, MultiIndex, Polynomial, Rational};
