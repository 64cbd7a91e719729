//! Named test potentials shared by the tests, the acceptance suite and the
//! command line.

use crate::polydiff::Polynomial;
use crate::{Error, Result};

pub const FIXTURE_NAMES: [&str; 6] = [
    "zero",
    "linear",
    "quadratic",
    "quartic",
    "odd-cubic",
    "radial-bump",
];

/// `(|x|² − r1²)(r2² − |x|²)` on `r1 ≤ |x| ≤ r2` and zero elsewhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialBump {
    pub r1: f64,
    pub r2: f64,
}

impl Default for RadialBump {
    fn default() -> Self {
        RadialBump { r1: 0.5, r2: 1.5 }
    }
}

impl RadialBump {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if r2 < self.r1 * self.r1 || r2 > self.r2 * self.r2 {
            return 0.0;
        }
        (r2 - self.r1 * self.r1) * (self.r2 * self.r2 - r2)
    }
}

#[derive(Clone, Debug)]
pub enum Fixture {
    Polynomial(Polynomial),
    Numeric(RadialBump),
}

impl Fixture {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Fixture::Polynomial(p) => p.eval(x),
            Fixture::Numeric(b) => b.eval(x),
        }
    }

    pub fn polynomial(&self) -> Option<&Polynomial> {
        match self {
            Fixture::Polynomial(p) => Some(p),
            Fixture::Numeric(_) => None,
        }
    }
}

pub fn fixture(name: &str, dim: usize) -> Result<Fixture> {
    if name == "radial-bump" {
        return Ok(Fixture::Numeric(RadialBump::default()));
    }
    polynomial_fixture(name, dim).map(Fixture::Polynomial)
}

/// The polynomial fixtures: `0`, `x₁`, `|x|²`, `Σ x_i⁴`, `x₁³`.
pub fn polynomial_fixture(name: &str, dim: usize) -> Result<Polynomial> {
    if dim == 0 {
        return Err(Error::Invalid("dimension must be positive".into()));
    }
    let p = match name {
        "zero" => Polynomial::zero(dim),
        "linear" => Polynomial::var(dim, 0),
        "quadratic" => Polynomial::norm_squared(dim),
        "quartic" => (0..dim).fold(Polynomial::zero(dim), |acc, i| {
            &acc + &Polynomial::var(dim, i).pow(4)
        }),
        "odd-cubic" => Polynomial::var(dim, 0).pow(3),
        "radial-bump" => {
            return Err(Error::Invalid(
                "radial-bump is not a polynomial; use the numeric path".into(),
            ))
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown fixture {other:?}; expected one of {}",
                FIXTURE_NAMES.join(", ")
            )))
        }
    };
    Ok(p)
}
