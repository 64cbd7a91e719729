use std::f64::consts::PI;

use serde::Serialize;

use super::gaussian::gamma_half;
use crate::polydiff::{to_f64, Polynomial};
use crate::quad::integrate_circle;
use crate::symbolcalc::sphere_monomial_average;
use crate::{Error, Result};

/// `|S^{n−1}| = 2π^{n/2}/Γ(n/2)`; for `n = 1` the two-point set `{±1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n as u32)
}

/// `∫_{|x|=r} P dσ_r` from exact monomial averages.
pub fn sphere_integral(p: &Polynomial, r: f64) -> f64 {
    let n = p.dim();
    let area = unit_sphere_area(n);
    p.terms()
        .map(|(g, c)| {
            let avg = sphere_monomial_average(g);
            to_f64(&(c * avg)) * area * r.powi((n - 1) as i32 + g.order() as i32)
        })
        .sum()
}

/// `r² Δ_{S_r} V = |x|²ΔV − E²V − (n−2)EV` with `E = x·∇`, valid on `|x| = r`.
pub fn sphere_laplacian_numerator(v: &Polynomial) -> Polynomial {
    let n = v.dim() as i64;
    let ev = v.euler();
    let r2 = Polynomial::norm_squared(v.dim());
    let shift = Polynomial::constant(v.dim(), crate::polydiff::int(n - 2));
    &(&(&r2 * &v.laplacian()) - &ev.euler()) - &(&shift * &ev)
}

/// Sphere averages and pairings of `V` on `S_r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereFunctionals {
    pub dim: usize,
    pub r: f64,
    /// `|S_r|`.
    pub area: f64,
    /// `M1 = ∫ V dσ_r`.
    pub m1: f64,
    /// `M2 = ∫ V² dσ_r = ‖V‖²`.
    pub m2: f64,
    /// `⟨V, ∂V/∂r⟩`.
    pub v_dr: f64,
    /// `‖∂V/∂r‖²`.
    pub dr_sq: f64,
    /// `⟨V, −Δ_{S_r} V⟩` for the Laplacian of the radius-`r` sphere.
    pub v_neg_lap: f64,
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "sphere radius must be positive, got {r}"
        )))
    }
}

/// Exact-formula sphere functionals of a polynomial potential.
pub fn sphere_functionals(v: &Polynomial, r: f64) -> Result<SphereFunctionals> {
    check_radius(r)?;
    let n = v.dim();
    let ev = v.euler();
    let lap = sphere_laplacian_numerator(v);
    Ok(SphereFunctionals {
        dim: n,
        r,
        area: unit_sphere_area(n) * r.powi(n as i32 - 1),
        m1: sphere_integral(v, r),
        m2: sphere_integral(&(v * v), r),
        v_dr: sphere_integral(&(v * &ev), r) / r,
        dr_sq: sphere_integral(&(&ev * &ev), r) / (r * r),
        v_neg_lap: -sphere_integral(&(v * &lap), r) / (r * r),
    })
}

/// Sphere functionals of a pointwise potential for `n ∈ {1, 2}`, by the
/// trapezoid rule on the circle and central differences.
pub fn sphere_functionals_numeric(
    f: &dyn Fn(&[f64]) -> f64,
    n: usize,
    r: f64,
    points: usize,
) -> Result<SphereFunctionals> {
    check_radius(r)?;
    let h = 1e-5 * r.max(1e-3);
    match n {
        1 => {
            let mut out = SphereFunctionals {
                dim: 1,
                r,
                area: 2.0,
                m1: 0.0,
                m2: 0.0,
                v_dr: 0.0,
                dr_sq: 0.0,
                v_neg_lap: 0.0,
            };
            for sign in [-1.0, 1.0] {
                let v = f(&[sign * r]);
                let dr = (f(&[sign * (r + h)]) - f(&[sign * (r - h)])) / (2.0 * h);
                out.m1 += v;
                out.m2 += v * v;
                out.v_dr += v * dr;
                out.dr_sq += dr * dr;
            }
            Ok(out)
        }
        2 => {
            let at = |rho: f64, t: f64| f(&[rho * t.cos(), rho * t.sin()]);
            let dth = 1e-5;
            let m1 = r * integrate_circle(|t| at(r, t), points);
            let m2 = r * integrate_circle(|t| at(r, t).powi(2), points);
            let dr = |t: f64| (at(r + h, t) - at(r - h, t)) / (2.0 * h);
            let v_dr = r * integrate_circle(|t| at(r, t) * dr(t), points);
            let dr_sq = r * integrate_circle(|t| dr(t).powi(2), points);
            // ∫ |∇_S V|² dσ with |∇_S V| = |∂_θ V|/r and dσ = r dθ
            let dtheta = |t: f64| (at(r, t + dth) - at(r, t - dth)) / (2.0 * dth);
            let v_neg_lap = integrate_circle(|t| dtheta(t).powi(2), points) / r;
            Ok(SphereFunctionals {
                dim: 2,
                r,
                area: 2.0 * PI * r,
                m1,
                m2,
                v_dr,
                dr_sq,
                v_neg_lap,
            })
        }
        _ => Err(Error::Invalid(format!(
            "numeric sphere functionals support n ∈ {{1, 2}}, got {n}"
        ))),
    }
}

/// `∫_0^∞ r^k e^{−sr²} dr = Γ((k+1)/2) / (2 s^{(k+1)/2})`.
pub fn radial_moment(k: u32, s: f64) -> f64 {
    gamma_half(k + 1) / (2.0 * s.powf((k as f64 + 1.0) / 2.0))
}

/// `∫ P e^{−s|x|²} dx` assembled in polar coordinates: the sphere integral of
/// each homogeneous part is `c r^{n−1+d}`, then integrated against
/// `e^{−sr²}` in `r`.
pub fn radial_gaussian_integral(p: &Polynomial, s: f64) -> f64 {
    polar_integral(p, 0, s)
}

/// Polar assembly of `∫ P/r^{2q} e^{−s|x|²} dx`, where `P/r^{2q}` is meant on
/// each sphere. Monomials whose sphere average vanishes are skipped.
fn polar_integral(p: &Polynomial, q: u32, s: f64) -> f64 {
    let n = p.dim();
    let area = unit_sphere_area(n);
    p.terms()
        .filter_map(|(g, c)| {
            let avg = sphere_monomial_average(g);
            if num_traits::Zero::is_zero(&avg) {
                return None;
            }
            let k = (n as i64 - 1 + g.order() as i64 - 2 * q as i64) as u32;
            Some(to_f64(&(c * avg)) * area * radial_moment(k, s))
        })
        .sum()
}

/// `∫ V ΔV e^{−s|x|²}` split as in spherical coordinates,
/// `ΔV = ∂²_r V + (n−1)/r ∂_r V + Δ_{S_r} V`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LaplacianSplit {
    pub cartesian: f64,
    pub radial_second: f64,
    pub radial_first: f64,
    pub angular: f64,
}

impl LaplacianSplit {
    pub fn polar_total(&self) -> f64 {
        self.radial_second + self.radial_first + self.angular
    }
}

pub fn laplacian_split(v: &Polynomial, s: f64) -> LaplacianSplit {
    let n = v.dim() as i64;
    let ev = v.euler();
    // r² ∂²_r V = E²V − EV
    let second = v * &(&ev.euler() - &ev);
    let first = (v * &ev).scale(&crate::polydiff::int(n - 1));
    let angular = v * &sphere_laplacian_numerator(v);
    LaplacianSplit {
        cartesian: super::gaussian::gaussian_integral(&(v * &v.laplacian())).eval(s),
        radial_second: polar_integral(&second, 1, s),
        radial_first: polar_integral(&first, 1, s),
        angular: polar_integral(&angular, 1, s),
    }
}
