//! Exact-arithmetic algebra of multivariate polynomials and
//! polynomial-coefficient differential operators.
//!
//! Differential operators are stored in the plain `∂^α` basis with rational
//! coefficients. The `D = −i∂` convention used by symbols is applied only when
//! converting to a [`PhaseSymbol`](crate::symbolcalc::PhaseSymbol), where
//! `∂^α = i^{|α|} D^α` contributes an `i`-power of `|α| mod 4`.

mod diffop;
mod graded;
mod multi_index;
mod polynomial;
pub(crate) mod wire;

pub use diffop::DiffOp;
pub use graded::HGradedOp;
pub use multi_index::MultiIndex;
pub(crate) use multi_index::{binomial, factorial};
pub(crate) use polynomial::monomial_string_named;
pub use polynomial::Polynomial;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `[p · q]` with a dimension check.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
    Error::check_dim(p.dim(), q.dim())?;
    Ok(p * q)
}

/// `D1 ∘ D2`, via Leibniz expansion of `∂^α` past the coefficients of `D2`.
pub fn op_compose(d1: &DiffOp, d2: &DiffOp) -> Result<DiffOp> {
    Error::check_dim(d1.dim(), d2.dim())?;
    Ok(d1.compose(d2))
}

/// `[D1, D2] = D1∘D2 − D2∘D1`.
pub fn op_commutator(d1: &DiffOp, d2: &DiffOp) -> Result<DiffOp> {
    Error::check_dim(d1.dim(), d2.dim())?;
    Ok(d1.commutator(d2))
}

pub fn op_apply(d: &DiffOp, p: &Polynomial) -> Result<Polynomial> {
    Error::check_dim(d.dim(), p.dim())?;
    Ok(d.apply(p))
}

/// Session dimensions supported by the symbolic tier.
pub fn check_session_dim(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("dimension {n} outside 1..=3")))
    }
}
