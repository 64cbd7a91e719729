use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::wire::{self, JsonInt};
use super::{to_f64, MultiIndex, Rational};

/// Multivariate polynomial in `x_1..x_n` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Rational::one())
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::monomial(dim, MultiIndex::zero(dim), c)
    }

    /// `x_i` (zero-based `i`).
    pub fn var(dim: usize, i: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, i), Rational::one())
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, c: Rational) -> Self {
        assert_eq!(alpha.dim(), dim, "monomial exponent length");
        let mut p = Self::zero(dim);
        p.add_term(alpha, c);
        p
    }

    /// `|x|² = Σ x_i²`.
    pub fn norm_squared(dim: usize) -> Self {
        let mut p = Self::zero(dim);
        for i in 0..dim {
            p.add_term(MultiIndex::unit(dim, i).bump(i), Rational::one());
        }
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = Self::zero(dim);
        for (a, c) in terms {
            assert_eq!(a.dim(), dim, "monomial exponent length");
            p.add_term(a, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    /// Lowest total degree present; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).min()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, alpha: &MultiIndex, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, v)| (a.add(alpha), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        (0..k).fold(Polynomial::one(self.dim), |acc, _| &acc * self)
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            let e = a.get(i);
            if e > 0 {
                out.add_term(a.with(i, e - 1), c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// `∂^α`.
    pub fn derivative_multi(&self, alpha: &MultiIndex) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            if let Some(rest) = a.checked_sub(alpha) {
                // falling factorial Π a_i!/(a_i−α_i)!
                let ff: BigInt = a.factorial() / rest.factorial();
                out.add_term(rest, c * Rational::from_integer(ff));
            }
        }
        out
    }

    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for i in 0..self.dim {
            out += &self.derivative(i).derivative(i);
        }
        out
    }

    /// Euler operator `Σ x_i ∂_i`, i.e. `r ∂/∂r`.
    pub fn euler(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c * Rational::from_integer(a.order().into()));
        }
        out
    }

    /// Part of total degree exactly `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.order() == k)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Every monomial has odd total degree, i.e. `p(−x) = −p(x)`.
    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|a| a.order() % 2 == 1)
    }

    /// `p(Mx)` for a rational `n × n` matrix `M` (rows indexed by output
    /// variable).
    pub fn linear_substitute(&self, m: &[Vec<Rational>]) -> Polynomial {
        assert_eq!(m.len(), self.dim);
        let images: Vec<Polynomial> = m
            .iter()
            .map(|row| {
                Polynomial::from_terms(
                    self.dim,
                    row.iter()
                        .enumerate()
                        .map(|(j, c)| (MultiIndex::unit(self.dim, j), c.clone())),
                )
            })
            .collect();
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            let mut t = Polynomial::constant(self.dim, c.clone());
            for (i, &e) in a.as_slice().iter().enumerate() {
                t = &t * &images[i].pow(e);
            }
            out += &t;
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.terms
            .iter()
            .map(|(a, c)| {
                to_f64(c)
                    * a.as_slice()
                        .iter()
                        .zip(x)
                        .map(|(&e, &xi)| xi.powi(e as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn eval_exact(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.dim);
        let mut acc = Rational::zero();
        for (a, c) in &self.terms {
            let mut t = c.clone();
            for (&e, xi) in a.as_slice().iter().zip(x) {
                for _ in 0..e {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        for (a, c) in &rhs.terms {
            self.add_term(a.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        for (a, c) in &rhs.terms {
            self.add_term(a.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, rhs.dim, "polynomial dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.add(b), c * d);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest degree first reads more naturally
        let mut entries: Vec<_> = self.terms.iter().collect();
        entries.sort_by(|(a, _), (b, _)| b.order().cmp(&a.order()).then(b.cmp(a)));
        for (k, (a, c)) in entries.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = monomial_string(a);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn monomial_string(a: &MultiIndex) -> String {
    monomial_string_named(a, "x")
}

pub(crate) fn monomial_string_named(a: &MultiIndex, name: &str) -> String {
    let mut parts = Vec::new();
    for (i, &e) in a.as_slice().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{name}{}", i + 1)),
            _ => parts.push(format!("{name}{}^{e}", i + 1)),
        }
    }
    parts.join("*")
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    alpha: Vec<u32>,
    num: JsonInt,
    den: JsonInt,
}

#[derive(Serialize, Deserialize)]
struct PolynomialWire {
    dim: usize,
    terms: Vec<TermWire>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        PolynomialWire {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| {
                    let (num, den) = wire::split(c);
                    TermWire {
                        alpha: a.as_slice().to_vec(),
                        num,
                        den,
                    }
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = PolynomialWire::deserialize(de)?;
        if w.dim == 0 {
            return Err(D::Error::custom("polynomial dimension must be positive"));
        }
        let mut p = Polynomial::zero(w.dim);
        for t in w.terms {
            if t.alpha.len() != w.dim {
                return Err(D::Error::custom(format!(
                    "exponent vector {:?} does not have length {}",
                    t.alpha, w.dim
                )));
            }
            let c = wire::join(t.num, t.den).map_err(D::Error::custom)?;
            p.add_term(MultiIndex::new(t.alpha), c);
        }
        Ok(p)
    }
}
