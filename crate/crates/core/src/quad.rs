//! Adaptive quadrature used as an independent numerical oracle.
//!
//! Backed by the double-exponential rule of the `quadrature` crate. Infinite
//! ranges are truncated to a finite window; every integrand handled here
//! carries a Gaussian weight, so a window of a few dozen widths is exact to
//! double precision.

use quadrature::double_exponential;

/// `∫_a^b f` with the interval split into `pieces` equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let tol = tol / pieces as f64;
    (0..pieces)
        .map(|k| {
            let lo = a + k as f64 * h;
            double_exponential::integrate(&f, lo, lo + h, tol).integral
        })
        .sum()
}

/// `∫_ℝ f` for `f` decaying at least like `e^{−x²/(2σ²)}` around `center`.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, center: f64, sigma: f64, tol: f64) -> f64 {
    let half = 40.0 * sigma;
    integrate(f, center - half, center + half, 16, tol)
}

/// `∫_{ℝ²} f` for a Gaussian-decaying `f`, by iterated one-dimensional rules.
pub fn integrate_plane<F: Fn(f64, f64) -> f64>(f: F, sigma: f64, tol: f64) -> f64 {
    let half = 12.0 * sigma;
    integrate(
        |x| integrate(|y| f(x, y), -half, half, 8, tol),
        -half,
        half,
        8,
        tol,
    )
}

/// `∫_0^{2π} f(θ) dθ` for smooth periodic `f`, by the trapezoid rule,
/// which converges geometrically for periodic integrands.
pub fn integrate_circle<F: Fn(f64) -> f64>(f: F, points: usize) -> f64 {
    let h = std::f64::consts::TAU / points as f64;
    (0..points).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_moments() {
        let s = 1.3;
        let i0 = integrate_line(|x| (-s * x * x).exp(), 0.0, 1.0, 1e-14);
        assert!((i0 - (PI / s).sqrt()).abs() < 1e-12);
        let i2 = integrate_line(|x| x * x * (-x * x).exp(), 0.0, 1.0, 1e-14);
        assert!((i2 - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn plane_and_circle() {
        let i = integrate_plane(|x, y| (-(x * x + y * y)).exp(), 1.0, 1e-13);
        assert!((i - PI).abs() < 1e-10);
        let c = integrate_circle(|t| t.cos().powi(2), 64);
        assert!((c - PI).abs() < 1e-13);
    }
}
