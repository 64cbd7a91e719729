//! Closed-form kernels of the free semiclassical oscillator
//! `A = −ħ²Δ/2 + |x|²/2 − nħ/2`, whose spectrum is `ħ|k|`, `k ∈ ℕⁿ`.
//!
//! The rescaled time `s` is related to the heat time `t` by
//! `e^{−tħ} = (1−ħs)/(1+ħs)`, i.e. `s = tanh(tħ/2)/ħ`.

use std::f64::consts::PI;

use crate::{Error, Result};

fn check_pair(s: f64, hbar: f64) -> Result<()> {
    if !(s > 0.0 && hbar > 0.0) {
        return Err(Error::Domain(format!(
            "need s > 0 and ħ > 0, got s = {s}, ħ = {hbar}"
        )));
    }
    if hbar * s >= 1.0 {
        return Err(Error::Domain(format!(
            "time change is singular for ħs = {} ≥ 1",
            hbar * s
        )));
    }
    Ok(())
}

/// `s = (1/ħ)(1 − e^{−tħ})/(1 + e^{−tħ})`.
pub fn s_of_t(t: f64, hbar: f64) -> Result<f64> {
    if !(t > 0.0 && hbar > 0.0) {
        return Err(Error::Domain(format!(
            "need t > 0 and ħ > 0, got t = {t}, ħ = {hbar}"
        )));
    }
    Ok((0.5 * t * hbar).tanh() / hbar)
}

/// `t = (1/ħ) log((1+ħs)/(1−ħs))`.
pub fn t_of_s(s: f64, hbar: f64) -> Result<f64> {
    check_pair(s, hbar)?;
    Ok(2.0 * (hbar * s).atanh() / hbar)
}

/// `P(s, ħ) = (4πħ²s)^{−n/2}(1+ħs)^n`, the diagonal prefactor of the kernel.
pub fn prefactor(s: f64, hbar: f64, n: usize) -> Result<f64> {
    check_pair(s, hbar)?;
    let one = (1.0 + hbar * s) / (4.0 * PI * hbar * hbar * s).sqrt();
    Ok(one.powi(n as i32))
}

/// `−|x−y|²/(4ħ²s) − s|x+y|²/4`.
pub fn exponent(x: &[f64], y: &[f64], s: f64, hbar: f64) -> f64 {
    let (mut d2, mut p2) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        d2 += (a - b) * (a - b);
        p2 += (a + b) * (a + b);
    }
    -d2 / (4.0 * hbar * hbar * s) - s * p2 / 4.0
}

/// The exponent in Mehler's form at heat time `t`:
/// `−[(|x|²+|y|²)(1+q²)/2 − 2q x·y] / (ħ(1−q²))` with `q = e^{−tħ}`.
pub fn exponent_mehler(x: &[f64], y: &[f64], t: f64, hbar: f64) -> f64 {
    let q = (-t * hbar).exp();
    let one_minus_q2 = -(-2.0 * t * hbar).exp_m1();
    let (mut sq, mut dot) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sq += a * a + b * b;
        dot += a * b;
    }
    -(0.5 * sq * (1.0 + q * q) - 2.0 * q * dot) / (hbar * one_minus_q2)
}

/// The same exponent after splitting the bracket into
/// `(|x|²+|y|²)(1−q)²/2 + q|x−y|²`.
pub fn exponent_split(x: &[f64], y: &[f64], t: f64, hbar: f64) -> f64 {
    let q = (-t * hbar).exp();
    let one_minus_q = -(-t * hbar).exp_m1();
    let (mut sq, mut d2) = (0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sq += a * a + b * b;
        d2 += (a - b) * (a - b);
    }
    -sq / (2.0 * hbar) * one_minus_q / (1.0 + q) - q * d2 / (hbar * one_minus_q * (1.0 + q))
}

/// `e^{−tA}(x, y)` written in the rescaled time `s`.
pub fn kernel_eval(x: &[f64], y: &[f64], s: f64, hbar: f64) -> Result<f64> {
    crate::error::Error::check_dim(x.len(), y.len())?;
    let p = prefactor(s, hbar, x.len())?;
    Ok(p * exponent(x, y, s, hbar).exp())
}

/// `Σ_k e^{−tħ|k|} = ((1+ħs)/(2ħs))^n`.
pub fn free_trace(s: f64, hbar: f64, n: usize) -> Result<f64> {
    check_pair(s, hbar)?;
    Ok(((1.0 + hbar * s) / (2.0 * hbar * s)).powi(n as i32))
}

/// `e^{−tħ} = (1−ħs)/(1+ħs)`.
pub fn decay_ratio(s: f64, hbar: f64) -> Result<f64> {
    check_pair(s, hbar)?;
    Ok((1.0 - hbar * s) / (1.0 + hbar * s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_change_examples() {
        assert!((s_of_t(1.0, 1e-6).unwrap() - 0.5).abs() < 1e-12);
        assert!((s_of_t(3f64.ln(), 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((t_of_s(0.5, 1.0).unwrap() - 3f64.ln()).abs() < 1e-15);
        let s = s_of_t(t_of_s(0.7, 0.1).unwrap(), 0.1).unwrap();
        assert!((s - 0.7).abs() < 1e-14);
        assert!(t_of_s(1.0, 1.0).is_err());
        assert!(t_of_s(2.0, 0.6).is_err());
        assert!(s_of_t(-1.0, 0.1).is_err());
    }

    #[test]
    fn small_hbar_series() {
        // t = 2s(1 + ħ²s²/3 + ħ⁴s⁴/5 + …)
        let (s, h) = (0.5_f64, 0.01_f64);
        let series =
            2.0 * s * (h * h * s * s / 3.0 + (h * s).powi(4) / 5.0 + (h * s).powi(6) / 7.0);
        assert!((t_of_s(s, h).unwrap() - 1.0 - series).abs() < 1e-15);
        // the two-term estimate alone is off by the ħ⁴ term, about 1.25e−10
        let two_term = 2.0 * s * h * h * s * s / 3.0;
        assert!((t_of_s(s, h).unwrap() - 1.0 - two_term).abs() < 2e-10);
    }

    #[test]
    fn kernel_basics() {
        let (s, h) = (0.5, 0.1);
        let k0 = kernel_eval(&[0.0], &[0.0], s, h).unwrap();
        assert!((k0 - (1.0 + h * s) / (4.0 * PI * h * h * s).sqrt()).abs() < 1e-12);
        let a = kernel_eval(&[0.3, -0.2], &[0.1, 0.4], s, h).unwrap();
        let b = kernel_eval(&[0.1, 0.4], &[0.3, -0.2], s, h).unwrap();
        assert_eq!(a, b);
        assert!(kernel_eval(&[0.0], &[0.0, 1.0], s, h).is_err());
    }

    #[test]
    fn free_trace_values() {
        assert!((free_trace(0.5, 0.1, 1).unwrap() - 10.5).abs() < 1e-12);
        assert!((free_trace(0.5, 0.1, 2).unwrap() - 110.25).abs() < 1e-10);
        // geometric series over the spectrum ħk
        let q = decay_ratio(0.5, 0.1).unwrap();
        let sum: f64 = (0..2000).map(|k| q.powi(k)).sum();
        assert!((sum - 10.5).abs() < 1e-10);
    }
}
