use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::kantorovitz::GaussianLaurent;
use crate::polydiff::{to_f64, MultiIndex, Polynomial, Rational};

/// `π^{n/2} Σ_h c_h s^{h/2}`: the exact value of a Gaussian integral over
/// `ℝⁿ` as a Laurent polynomial in `√s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtLaurent {
    dim: usize,
    terms: BTreeMap<i32, Rational>,
}

impl SqrtLaurent {
    pub fn zero(dim: usize) -> Self {
        SqrtLaurent {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficients keyed by twice the exponent of `s`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(h, c)| (*h, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, half_exp: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(half_exp).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&half_exp);
        }
    }

    pub fn add(&mut self, other: &SqrtLaurent) {
        for (h, c) in &other.terms {
            self.add_term(*h, c.clone());
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        let sum: f64 = self
            .terms
            .iter()
            .map(|(h, c)| to_f64(c) * s.powf(*h as f64 / 2.0))
            .sum();
        PI.powf(self.dim as f64 / 2.0) * sum
    }
}

impl fmt::Display for SqrtLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi^({}/2) * [", self.dim)?;
        for (k, (h, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*s^({h}/2)")?;
        }
        write!(f, "]")
    }
}

impl Serialize for SqrtLaurent {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(h, c)| {
                serde_json::json!({
                    "twice_s_exp": h,
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        let mut st = ser.serialize_struct("SqrtLaurent", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("pi_power_halves", &self.dim)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

fn double_factorial_odd(g: u32) -> BigInt {
    // (g − 1)!! for even g
    let mut out = BigInt::one();
    let mut k = g as i64 - 1;
    while k > 1 {
        out *= k;
        k -= 2;
    }
    out
}

/// `∫ x^γ e^{−s|x|²} dx = π^{n/2} Π (γ_i − 1)!!/2^{γ_i/2} · s^{−(n+|γ|)/2}`,
/// zero unless every `γ_i` is even.
pub fn gaussian_moment(gamma: &MultiIndex) -> SqrtLaurent {
    let mut out = SqrtLaurent::zero(gamma.dim());
    if !gamma.is_even() {
        return out;
    }
    let mut c = Rational::one();
    for &g in gamma.as_slice() {
        c *= Rational::new(double_factorial_odd(g), BigInt::from(2).pow(g / 2));
    }
    out.add_term(-((gamma.dim() as u32 + gamma.order()) as i32), c);
    out
}

/// `∫ P(x) e^{−s|x|²} dx`, exactly.
pub fn gaussian_integral(p: &Polynomial) -> SqrtLaurent {
    let mut out = SqrtLaurent::zero(p.dim());
    for (gamma, c) in p.terms() {
        for (h, m) in gaussian_moment(gamma).terms() {
            out.add_term(h, m * c);
        }
    }
    out
}

/// `∫ Σ_j s^j P_j(x) e^{−s|x|²} dx`, exactly.
pub fn gaussian_laurent_integral(g: &GaussianLaurent) -> SqrtLaurent {
    let mut out = SqrtLaurent::zero(g.dim());
    for (j, p) in g.terms() {
        for (h, c) in gaussian_integral(p).terms() {
            out.add_term(h + 2 * j, c.clone());
        }
    }
    out
}

/// `Γ(k/2)` for `k ≥ 1`.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1, "Γ(k/2) needs k ≥ 1");
    let mut g = if k % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut a = if k % 2 == 0 { 1.0 } else { 0.5 };
    while a < k as f64 / 2.0 - 1e-9 {
        g *= a;
        a += 1.0;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_line;

    #[test]
    fn one_dimensional_examples() {
        let x = Polynomial::var(1, 0);
        let s = 1.7;
        let g0 = gaussian_integral(&Polynomial::one(1));
        assert!((g0.eval(s) - (PI / s).sqrt()).abs() < 1e-14);
        assert!(gaussian_integral(&x).is_zero());
        let g2 = gaussian_integral(&x.pow(2));
        assert!((g2.eval(1.0) - PI.sqrt() / 2.0).abs() < 1e-14);
        let q = integrate_line(|t| t.powi(6) * (-s * t * t).exp(), 0.0, 1.0, 1e-14);
        assert!((gaussian_integral(&x.pow(6)).eval(s) - q).abs() < 1e-12);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_half(1) - PI.sqrt()).abs() < 1e-15);
        assert_eq!(gamma_half(2), 1.0);
        assert!((gamma_half(5) - 0.75 * PI.sqrt()).abs() < 1e-14);
        assert_eq!(gamma_half(8), 6.0);
    }
}
