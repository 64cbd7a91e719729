use num_traits::One;
use rayon::prelude::*;

use super::diagonal::diagonal_eval;
use super::laurent::{GaussianLaurent, HSeries, ScalarSeries};
use super::recursion::x_chain;
use crate::polydiff::{factorial, Polynomial, Rational};
use crate::{Error, Result};

/// Highest `K` accepted by [`assemble_upsilon`]. The chain `X_1..X_{2K+1}`
/// grows quickly with `K` and with the degree of `V`.
pub const MAX_SYMBOLIC_ORDER: u32 = 3;

/// The prefactor-normalised defect
/// `[e^{−tA}(x,x) − e^{−tH}(x,x)]/P(s, ħ)` through `ħ^{2K+2}`.
pub fn defect_series(v: &Polynomial, k: u32) -> Result<HSeries> {
    if k > MAX_SYMBOLIC_ORDER {
        return Err(Error::Resource(format!(
            "symbolic expansion limited to K ≤ {MAX_SYMBOLIC_ORDER}, got {k}"
        )));
    }
    let order = 2 * k as i32 + 2;
    // X_m e contributes from ħ^{m+1} (odd m) or ħ^{m+2} (even m) onward.
    let m_max = 2 * k + 1;
    let chain = x_chain(v, m_max)?;
    let t = ScalarSeries::heat_time(order);
    let terms: Vec<Result<HSeries>> = (1..=m_max)
        .into_par_iter()
        .map(|m| {
            let diag = diagonal_eval(&chain[m as usize])?.truncate(order);
            let sign = if m % 2 == 1 {
                Rational::one()
            } else {
                -Rational::one()
            };
            let c = sign / Rational::from_integer(factorial(m));
            Ok(diag.mul_scalar_series(&t.pow(m)).scale(&c))
        })
        .collect();
    let mut out = HSeries::zero(v.dim(), order);
    for t in terms {
        out.add_series(&t?);
    }
    if let Some(e) = out.exponents().into_iter().find(|e| e % 2 != 0 || *e < 2) {
        return Err(Error::Internal(format!(
            "defect series has a term at ħ^{e}, expected even exponents ≥ 2"
        )));
    }
    Ok(out)
}

/// `Υ_0, …, Υ_K` with `D = ħ² Σ_k ħ^{2k} Υ_k(s, x)`.
pub fn assemble_upsilon(v: &Polynomial, k: u32) -> Result<Vec<GaussianLaurent>> {
    let d = defect_series(v, k)?;
    Ok((0..=k as i32).map(|j| d.coeff(2 * j + 2)).collect())
}
