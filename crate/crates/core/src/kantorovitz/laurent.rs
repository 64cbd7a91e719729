use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Mul};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::polydiff::wire::{self, JsonInt};
use crate::polydiff::{to_f64, MultiIndex, Polynomial, Rational};

/// Laurent polynomial in `s` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SLaurent {
    terms: BTreeMap<i32, Rational>,
}

impl SLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(j: i32, c: Rational) -> Self {
        let mut l = Self::zero();
        l.add_term(j, c);
        l
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(j, c)| (*j, c))
    }

    pub fn coeff(&self, j: i32) -> Rational {
        self.terms.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, j: i32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(j).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&j);
        }
    }

    pub fn scale(&self, c: &Rational) -> SLaurent {
        let mut out = SLaurent::zero();
        for (j, v) in &self.terms {
            out.add_term(*j, v * c);
        }
        out
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.terms.iter().map(|(j, c)| to_f64(c) * s.powi(*j)).sum()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }
}

impl AddAssign<&SLaurent> for SLaurent {
    fn add_assign(&mut self, rhs: &SLaurent) {
        for (j, c) in &rhs.terms {
            self.add_term(*j, c.clone());
        }
    }
}

impl Mul for &SLaurent {
    type Output = SLaurent;
    fn mul(self, rhs: &SLaurent) -> SLaurent {
        let mut out = SLaurent::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a + b, c * d);
            }
        }
        out
    }
}

impl fmt::Display for SLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (j, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            match (*j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "s")?,
                (1, false) => write!(f, "{mag}*s")?,
                (j, true) => write!(f, "s^{j}")?,
                (j, false) => write!(f, "{mag}*s^{j}")?,
            }
        }
        Ok(())
    }
}

/// `e^{−s|x|²} · Σ_j s^j P_j(x)` with `j ∈ ℤ` and exact polynomial
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianLaurent {
    dim: usize,
    terms: BTreeMap<i32, Polynomial>,
}

impl GaussianLaurent {
    pub fn zero(dim: usize) -> Self {
        GaussianLaurent {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `s^j P(x) e^{−s|x|²}`.
    pub fn single(j: i32, p: Polynomial) -> Self {
        let mut g = Self::zero(p.dim());
        g.add_term(j, p);
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Polynomial)> {
        self.terms.iter().map(|(j, p)| (*j, p))
    }

    pub fn coeff(&self, j: i32) -> Polynomial {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_s_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_s_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, j: i32, p: Polynomial) {
        assert_eq!(p.dim(), self.dim, "dimension mismatch");
        if p.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(j)
            .or_insert_with(|| Polynomial::zero(p.dim()));
        *e += &p;
        if e.is_zero() {
            self.terms.remove(&j);
        }
    }

    pub fn scale(&self, c: &Rational) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        for (j, p) in &self.terms {
            out.add_term(*j, p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, q: &Polynomial) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        for (j, p) in &self.terms {
            out.add_term(*j, p * q);
        }
        out
    }

    pub fn mul_s_laurent(&self, l: &SLaurent) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        for (j, p) in &self.terms {
            for (k, c) in l.terms() {
                out.add_term(j + k, p.scale(c));
            }
        }
        out
    }

    /// Multiplies the Laurent parts, keeping a single Gaussian factor.
    pub fn mul_coefficients(&self, other: &GaussianLaurent) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        for (j, p) in &self.terms {
            for (k, q) in &other.terms {
                out.add_term(j + k, p * q);
            }
        }
        out
    }

    /// `∂/∂x_r` of the full Gaussian-weighted expression.
    pub fn x_derivative(&self, r: usize) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        let two_x = Polynomial::var(self.dim, r).scale(&Rational::from_integer(2.into()));
        for (j, p) in &self.terms {
            out.add_term(*j, p.derivative(r));
            out.add_term(j + 1, -&(p * &two_x));
        }
        out
    }

    /// Evaluates at `(s, x)` including the Gaussian factor.
    pub fn eval(&self, s: f64, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        (-s * r2).exp() * self.eval_without_gaussian(s, x)
    }

    pub fn eval_without_gaussian(&self, s: f64, x: &[f64]) -> f64 {
        self.terms.iter().map(|(j, p)| s.powi(*j) * p.eval(x)).sum()
    }

    /// Coefficient of `s^j x^α`.
    pub fn coefficient(&self, j: i32, alpha: &MultiIndex) -> Rational {
        self.terms
            .get(&j)
            .map(|p| p.coeff(alpha))
            .unwrap_or_else(Rational::zero)
    }
}

impl AddAssign<&GaussianLaurent> for GaussianLaurent {
    fn add_assign(&mut self, rhs: &GaussianLaurent) {
        for (j, p) in &rhs.terms {
            self.add_term(*j, p.clone());
        }
    }
}

impl fmt::Display for GaussianLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        write!(f, "exp(-s|x|^2) * [")?;
        for (k, (j, p)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match *j {
                0 => write!(f, "({p})")?,
                1 => write!(f, "s*({p})")?,
                j => write!(f, "s^{j}*({p})")?,
            }
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentTermWire {
    s_exp: i32,
    poly: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct GaussianLaurentWire {
    dim: usize,
    gaussian: bool,
    terms: Vec<LaurentTermWire>,
}

impl Serialize for GaussianLaurent {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        GaussianLaurentWire {
            dim: self.dim,
            gaussian: true,
            terms: self
                .terms
                .iter()
                .map(|(j, p)| LaurentTermWire {
                    s_exp: *j,
                    poly: p.clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GaussianLaurent {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = GaussianLaurentWire::deserialize(de)?;
        if !w.gaussian {
            return Err(D::Error::custom("expected \"gaussian\": true"));
        }
        let mut g = GaussianLaurent::zero(w.dim);
        for t in w.terms {
            if t.poly.dim() != w.dim {
                return Err(D::Error::custom("coefficient dimension mismatch"));
            }
            g.add_term(t.s_exp, t.poly);
        }
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
struct SLaurentTermWire {
    s_exp: i32,
    num: JsonInt,
    den: JsonInt,
}

impl Serialize for SLaurent {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.terms
            .iter()
            .map(|(j, c)| {
                let (num, den) = wire::split(c);
                SLaurentTermWire {
                    s_exp: *j,
                    num,
                    den,
                }
            })
            .collect::<Vec<_>>()
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SLaurent {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let terms = Vec::<SLaurentTermWire>::deserialize(de)?;
        let mut l = SLaurent::zero();
        for t in terms {
            l.add_term(t.s_exp, wire::join(t.num, t.den).map_err(D::Error::custom)?);
        }
        Ok(l)
    }
}

/// Truncated power series in ħ with [`SLaurent`] coefficients (no Gaussian).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSeries {
    order: i32,
    coeffs: BTreeMap<i32, SLaurent>,
}

impl ScalarSeries {
    pub fn one(order: i32) -> Self {
        let mut s = ScalarSeries {
            order,
            coeffs: BTreeMap::new(),
        };
        s.add(0, SLaurent::monomial(0, Rational::one()));
        s
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, e: i32) -> SLaurent {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &SLaurent)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    fn add(&mut self, e: i32, c: SLaurent) {
        if e > self.order || c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// The rescaled heat time `t(s, ħ) = (1/ħ) log((1+ħs)/(1−ħs)) =
    /// Σ_k ħ^{2k} · 2 s^{2k+1}/(2k+1)`, truncated at ħ-order `order`.
    pub fn heat_time(order: i32) -> Self {
        let mut t = ScalarSeries {
            order,
            coeffs: BTreeMap::new(),
        };
        let mut k = 0;
        while 2 * k <= order {
            t.add(
                2 * k,
                SLaurent::monomial(2 * k + 1, Rational::new(2.into(), (2 * k + 1).into())),
            );
            k += 1;
        }
        t
    }

    pub fn mul(&self, other: &ScalarSeries) -> ScalarSeries {
        let order = self.order.min(other.order);
        let mut out = ScalarSeries {
            order,
            coeffs: BTreeMap::new(),
        };
        for (a, c) in &self.coeffs {
            for (b, d) in &other.coeffs {
                if a + b <= order {
                    out.add(a + b, c * d);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ScalarSeries {
        (0..k).fold(ScalarSeries::one(self.order), |acc, _| acc.mul(self))
    }
}

/// Truncated power series in ħ with [`GaussianLaurent`] coefficients. All
/// stored exponents are `≤ order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSeries {
    dim: usize,
    order: i32,
    coeffs: BTreeMap<i32, GaussianLaurent>,
}

impl HSeries {
    pub fn zero(dim: usize, order: i32) -> Self {
        HSeries {
            dim,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn coeff(&self, e: i32) -> GaussianLaurent {
        self.coeffs
            .get(&e)
            .cloned()
            .unwrap_or_else(|| GaussianLaurent::zero(self.dim))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &GaussianLaurent)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn exponents(&self) -> Vec<i32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn lowest_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&mut self, e: i32, g: &GaussianLaurent) {
        if e > self.order || g.is_zero() {
            return;
        }
        let entry = self
            .coeffs
            .entry(e)
            .or_insert_with(|| GaussianLaurent::zero(g.dim()));
        *entry += g;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn add_series(&mut self, other: &HSeries) {
        for (e, g) in &other.coeffs {
            self.add(*e, g);
        }
    }

    pub fn scale(&self, c: &Rational) -> HSeries {
        let mut out = HSeries::zero(self.dim, self.order);
        for (e, g) in &self.coeffs {
            out.add(*e, &g.scale(c));
        }
        out
    }

    pub fn truncate(&self, order: i32) -> HSeries {
        let mut out = HSeries::zero(self.dim, order.min(self.order));
        for (e, g) in &self.coeffs {
            out.add(*e, g);
        }
        out
    }

    pub fn mul_scalar_series(&self, t: &ScalarSeries) -> HSeries {
        let order = self.order.min(t.order());
        let mut out = HSeries::zero(self.dim, order);
        for (a, g) in &self.coeffs {
            for (b, l) in t.coeffs() {
                if a + b <= order {
                    out.add(a + b, &g.mul_s_laurent(l));
                }
            }
        }
        out
    }

    pub fn eval(&self, hbar: f64, s: f64, x: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(e, g)| hbar.powi(*e) * g.eval(s, x))
            .sum()
    }
}
