use serde::Serialize;

use super::sphere::{sphere_functionals, sphere_functionals_numeric, SphereFunctionals};
use crate::polydiff::Polynomial;
use crate::{Error, Result};

/// Outcome of the constancy test on one sphere. The defect
/// `|S_r| M2 − M1²` is non-negative by Cauchy–Schwarz and vanishes exactly
/// when `V` is constant on `S_r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstancyVerdict {
    pub r: f64,
    pub constant: bool,
    /// `M1/|S_r|` when constant.
    pub value: Option<f64>,
    pub defect: f64,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

pub fn constancy_from(sf: &SphereFunctionals, tol: f64) -> Result<ConstancyVerdict> {
    check_tol(tol)?;
    let defect = sf.area * sf.m2 - sf.m1 * sf.m1;
    if sf.m2 == 0.0 && sf.m1 != 0.0 {
        return Err(Error::Internal(format!(
            "M2 = 0 with M1 = {} on r = {}",
            sf.m1, sf.r
        )));
    }
    // values of V below machine epsilon are round-off, not variation
    let floor = (sf.area * f64::EPSILON).powi(2);
    let constant = defect <= tol * sf.area * sf.m2 + floor;
    Ok(ConstancyVerdict {
        r: sf.r,
        constant,
        value: constant.then(|| sf.m1 / sf.area),
        defect,
    })
}

/// Whether `V` is constant on `S_r` (needs `n ≥ 2`; on `S⁰ = {±r}` the test
/// is whether `V(r) = V(−r)`).
pub fn constancy_detector(v: &Polynomial, r: f64, tol: f64) -> Result<ConstancyVerdict> {
    constancy_from(&sphere_functionals(v, r)?, tol)
}

/// Outcome of the degree-one test on one sphere:
/// `‖V‖²(‖∂_rV‖² + ⟨V, −Δ_{S_r}V⟩) ≥ ⟨V, ∂_rV⟩² + λ₁‖V‖⁴` with
/// `λ₁ = (n−1)/r²`, with equality iff `∂_rV = χV` on `S_r` and `V|_{S_r}` is
/// a degree-one spherical harmonic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OddLinearVerdict {
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub in_class: bool,
    /// `⟨V, ∂_rV⟩ / ‖V‖²`.
    pub chi: f64,
}

pub fn odd_linear_from(sf: &SphereFunctionals, tol: f64) -> Result<OddLinearVerdict> {
    check_tol(tol)?;
    if sf.m2 <= 0.0 {
        return Err(Error::Domain(format!(
            "‖V‖ vanishes on the sphere r = {}; the detector is undefined there",
            sf.r
        )));
    }
    let lambda1 = (sf.dim as f64 - 1.0) / (sf.r * sf.r);
    let lhs = sf.m2 * (sf.dr_sq + sf.v_neg_lap);
    let rhs = sf.v_dr * sf.v_dr + lambda1 * sf.m2 * sf.m2;
    let gap = lhs - rhs;
    Ok(OddLinearVerdict {
        r: sf.r,
        lhs,
        rhs,
        gap,
        in_class: gap.abs() <= tol * lhs.abs().max(f64::MIN_POSITIVE),
        chi: sf.v_dr / sf.m2,
    })
}

pub fn odd_linear_detector(v: &Polynomial, r: f64, tol: f64) -> Result<OddLinearVerdict> {
    if !v.is_odd() {
        return Err(Error::Invalid(format!("{v} is not odd")));
    }
    if v.dim() < 2 {
        return Err(Error::Invalid("the degree-one test needs n ≥ 2".into()));
    }
    odd_linear_from(&sphere_functionals(v, r)?, tol)
}

/// The smallest and largest grid radii at which `M2(r) > tol · max M2`,
/// for a pointwise potential in `n ∈ {1, 2}`.
pub fn support_annulus(
    f: &dyn Fn(&[f64]) -> f64,
    n: usize,
    r_grid: &[f64],
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    check_tol(tol)?;
    let m2: Vec<f64> = r_grid
        .iter()
        .map(|&r| sphere_functionals_numeric(f, n, r, 256).map(|sf| sf.m2))
        .collect::<Result<_>>()?;
    let peak = m2.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(None);
    }
    let inside: Vec<f64> = r_grid
        .iter()
        .zip(&m2)
        .filter(|(_, m)| **m > tol * peak)
        .map(|(r, _)| *r)
        .collect();
    Ok(Some((inside[0], *inside.last().expect("nonempty"))))
}
