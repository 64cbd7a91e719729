//! The heat-trace invariants
//! `I1 = ∫V e^{−s|x|²}`, `I2 = ∫V² e^{−s|x|²}`, `I3 = ∫(V³ − VΔV) e^{−s|x|²}`,
//! sphere functionals of `V`, and the detectors built on them.

mod detect;
mod gaussian;
mod sphere;

pub use detect::{
    constancy_detector, constancy_from, odd_linear_detector, odd_linear_from, support_annulus,
    ConstancyVerdict, OddLinearVerdict,
};
pub use gaussian::{
    gamma_half, gaussian_integral, gaussian_laurent_integral, gaussian_moment, SqrtLaurent,
};
pub use sphere::{
    laplacian_split, radial_gaussian_integral, radial_moment, sphere_functionals,
    sphere_functionals_numeric, sphere_integral, sphere_laplacian_numerator, unit_sphere_area,
    LaplacianSplit, SphereFunctionals,
};

use serde::Serialize;

use crate::polydiff::Polynomial;
use crate::quad::{integrate_line, integrate_plane};
use crate::{Error, Result};

/// `(I1, I2, I3)` as exact functions of `s`.
pub fn invariant_triple_exact(v: &Polynomial) -> [SqrtLaurent; 3] {
    let v2 = v * v;
    let i3 = &(&v2 * v) - &(v * &v.laplacian());
    [
        gaussian_integral(v),
        gaussian_integral(&v2),
        gaussian_integral(&i3),
    ]
}

pub fn invariant_triple(v: &Polynomial, s: f64) -> Result<(f64, f64, f64)> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("need s > 0, got {s}")));
    }
    let [a, b, c] = invariant_triple_exact(v);
    Ok((a.eval(s), b.eval(s), c.eval(s)))
}

/// `(I1, I2, I3)` by adaptive quadrature in `n ∈ {1, 2}`; an independent
/// route to [`invariant_triple`] used by the validation driver.
pub fn invariant_triple_quadrature(v: &Polynomial, s: f64, tol: f64) -> Result<(f64, f64, f64)> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("need s > 0, got {s}")));
    }
    let lap = v.laplacian();
    let integrand = |x: &[f64], k: usize| {
        let (a, l) = (v.eval(x), lap.eval(x));
        let g = (-s * x.iter().map(|t| t * t).sum::<f64>()).exp();
        g * match k {
            0 => a,
            1 => a * a,
            _ => a * a * a - a * l,
        }
    };
    let sigma = (0.5 / s).sqrt();
    let one = |k: usize| match v.dim() {
        1 => Ok(integrate_line(|x| integrand(&[x], k), 0.0, sigma, tol)),
        2 => Ok(integrate_plane(|x, y| integrand(&[x, y], k), sigma, tol)),
        n => Err(Error::Invalid(format!(
            "quadrature route supports n ≤ 2, got {n}"
        ))),
    };
    Ok((one(0)?, one(1)?, one(2)?))
}

/// Invariants on an `s` grid and sphere averages on an `r` grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantReport {
    pub dim: usize,
    pub s_grid: Vec<f64>,
    pub i1: Vec<f64>,
    pub i2: Vec<f64>,
    pub i3: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub m1: Vec<f64>,
    pub m2: Vec<f64>,
}

impl InvariantReport {
    pub fn build(v: &Polynomial, s_grid: &[f64], r_grid: &[f64]) -> Result<Self> {
        let mut out = InvariantReport {
            dim: v.dim(),
            s_grid: s_grid.to_vec(),
            i1: vec![],
            i2: vec![],
            i3: vec![],
            r_grid: r_grid.to_vec(),
            m1: vec![],
            m2: vec![],
        };
        for &s in s_grid {
            let (a, b, c) = invariant_triple(v, s)?;
            out.i1.push(a);
            out.i2.push(b);
            out.i3.push(c);
        }
        for &r in r_grid {
            let sf = sphere_functionals(v, r)?;
            out.m1.push(sf.m1);
            out.m2.push(sf.m2);
        }
        Ok(out)
    }

    /// Two CSV tables, one per grid, separated by a blank line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,I1,I2,I3\n");
        for (k, s) in self.s_grid.iter().enumerate() {
            out += &format!("{s},{:e},{:e},{:e}\n", self.i1[k], self.i2[k], self.i3[k]);
        }
        out += "\nr,M1,M2\n";
        for (k, r) in self.r_grid.iter().enumerate() {
            out += &format!("{r},{:e},{:e}\n", self.m1[k], self.m2[k]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydiff::int;
    use std::f64::consts::PI;

    #[test]
    fn constant_potential() {
        let c = 3.0;
        let v = Polynomial::constant(1, int(3));
        let (a, b, d) = invariant_triple(&v, 0.7).unwrap();
        let g = (PI / 0.7).sqrt();
        assert!((a - c * g).abs() < 1e-13);
        assert!((b - c * c * g).abs() < 1e-12);
        assert!((d - c * c * c * g).abs() < 1e-11);
    }

    #[test]
    fn linear_potential() {
        let (a, b, c) = invariant_triple(&Polynomial::var(1, 0), 1.0).unwrap();
        assert_eq!(a, 0.0);
        assert!((b - PI.sqrt() / 2.0).abs() < 1e-14);
        assert_eq!(c, 0.0);
    }

    #[test]
    fn report_shapes() {
        let r = InvariantReport::build(&Polynomial::norm_squared(2), &[0.5, 1.0], &[1.0]).unwrap();
        assert_eq!(r.i1.len(), 2);
        assert!(r.to_csv().starts_with("s,I1,I2,I3\n0.5,"));
        assert!(invariant_triple(&Polynomial::one(1), 0.0).is_err());
    }
}
