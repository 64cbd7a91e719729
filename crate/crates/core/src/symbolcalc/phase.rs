use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::polydiff::wire::{self, JsonInt};
use crate::polydiff::{monomial_string_named, MultiIndex, Polynomial, Rational};

/// Key of one symbol term: `ξ^α x^β i^p` with `p ∈ {0, 1}`.
pub type SymbolKey = (MultiIndex, MultiIndex, u8);

/// A polynomial symbol `Σ c · i^p ξ^α x^β` with rational `c`.
///
/// Powers of `i` are reduced so that only `i^0` and `i^1` are stored; the
/// sign of `i² = −1` is folded into the coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseSymbol {
    dim: usize,
    terms: BTreeMap<SymbolKey, Rational>,
}

impl PhaseSymbol {
    pub fn zero(dim: usize) -> Self {
        PhaseSymbol {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The symbol of multiplication by `p`.
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let mut out = PhaseSymbol::zero(p.dim());
        for (beta, c) in p.terms() {
            out.add_term(MultiIndex::zero(p.dim()), beta.clone(), 0, c.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolKey, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · i^ipow ξ^xi x^x`; any `ipow` is accepted and reduced mod 4.
    pub fn add_term(&mut self, xi: MultiIndex, x: MultiIndex, ipow: u32, c: Rational) {
        assert_eq!(xi.dim(), self.dim, "symbol dimension mismatch");
        assert_eq!(x.dim(), self.dim, "symbol dimension mismatch");
        if c.is_zero() {
            return;
        }
        let p = ipow % 4;
        let c = if p >= 2 { -c } else { c };
        let key = (xi, x, (p % 2) as u8);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Rational) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for ((a, b, p), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), *p as u32, v * c);
        }
        out
    }

    /// Multiplies by `i^k`.
    pub fn times_i(&self, k: u32) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for ((a, b, p), v) in &self.terms {
            out.add_term(a.clone(), b.clone(), *p as u32 + k, v.clone());
        }
        out
    }

    pub fn mul_xi(&self, r: usize) -> PhaseSymbol {
        self.map_terms(|a, b, p, v, out| out.add_term(a.bump(r), b.clone(), p, v.clone()))
    }

    pub fn mul_x(&self, r: usize) -> PhaseSymbol {
        self.map_terms(|a, b, p, v, out| out.add_term(a.clone(), b.bump(r), p, v.clone()))
    }

    pub fn d_x(&self, r: usize) -> PhaseSymbol {
        self.map_terms(|a, b, p, v, out| {
            let e = b.get(r);
            if e > 0 {
                out.add_term(
                    a.clone(),
                    b.with(r, e - 1),
                    p,
                    v * Rational::from_integer(e.into()),
                );
            }
        })
    }

    pub fn d_xi(&self, r: usize) -> PhaseSymbol {
        self.map_terms(|a, b, p, v, out| {
            let e = a.get(r);
            if e > 0 {
                out.add_term(
                    a.with(r, e - 1),
                    b.clone(),
                    p,
                    v * Rational::from_integer(e.into()),
                );
            }
        })
    }

    pub fn laplacian_x(&self) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for r in 0..self.dim {
            out += &self.d_x(r).d_x(r);
        }
        out
    }

    pub fn laplacian_xi(&self) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for r in 0..self.dim {
            out += &self.d_xi(r).d_xi(r);
        }
        out
    }

    /// `Σ_r ξ_r ∂/∂x_r`.
    pub fn xi_dot_grad_x(&self) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for r in 0..self.dim {
            out += &self.d_x(r).mul_xi(r);
        }
        out
    }

    /// `Σ_r x_r ∂/∂ξ_r`.
    pub fn x_dot_grad_xi(&self) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for r in 0..self.dim {
            out += &self.d_xi(r).mul_x(r);
        }
        out
    }

    pub fn mul_poly(&self, q: &Polynomial) -> PhaseSymbol {
        assert_eq!(q.dim(), self.dim, "symbol dimension mismatch");
        let mut out = PhaseSymbol::zero(self.dim);
        for ((a, b, p), v) in &self.terms {
            for (g, c) in q.terms() {
                out.add_term(a.clone(), b.add(g), *p as u32, v * c);
            }
        }
        out
    }

    /// The part homogeneous of degree `k` in `ξ`.
    pub fn xi_part(&self, k: u32) -> PhaseSymbol {
        PhaseSymbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|((a, _, _), _)| a.order() == k)
                .map(|(key, v)| (key.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn xi_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, _, _)| a.order()).max()
    }

    /// True when no odd power of `i` survives.
    pub fn is_real(&self) -> bool {
        self.terms.keys().all(|(_, _, p)| *p == 0)
    }

    fn map_terms<F>(&self, mut f: F) -> PhaseSymbol
    where
        F: FnMut(&MultiIndex, &MultiIndex, u32, &Rational, &mut PhaseSymbol),
    {
        let mut out = PhaseSymbol::zero(self.dim);
        for ((a, b, p), v) in &self.terms {
            f(a, b, *p as u32, v, &mut out);
        }
        out
    }
}

impl AddAssign<&PhaseSymbol> for PhaseSymbol {
    fn add_assign(&mut self, rhs: &PhaseSymbol) {
        assert_eq!(self.dim, rhs.dim, "symbol dimension mismatch");
        for ((a, b, p), v) in &rhs.terms {
            self.add_term(a.clone(), b.clone(), *p as u32, v.clone());
        }
    }
}

impl Add for &PhaseSymbol {
    type Output = PhaseSymbol;
    fn add(self, rhs: &PhaseSymbol) -> PhaseSymbol {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &PhaseSymbol {
    type Output = PhaseSymbol;
    fn neg(self) -> PhaseSymbol {
        self.times_i(2)
    }
}

impl Sub for &PhaseSymbol {
    type Output = PhaseSymbol;
    fn sub(self, rhs: &PhaseSymbol) -> PhaseSymbol {
        self + &(-rhs)
    }
}

impl fmt::Display for PhaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b, p), v)) in self.terms.iter().enumerate() {
            let neg = v.is_negative();
            let mag = v.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut parts = Vec::new();
            let one = mag == Rational::from_integer(1.into());
            if !one {
                parts.push(mag.to_string());
            }
            if *p == 1 {
                parts.push("i".to_string());
            }
            for s in [
                monomial_string_named(b, "x"),
                monomial_string_named(a, "xi"),
            ] {
                if !s.is_empty() {
                    parts.push(s);
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    xi: Vec<u32>,
    x: Vec<u32>,
    num: JsonInt,
    den: JsonInt,
    ipow: u32,
}

#[derive(Serialize, Deserialize)]
struct SymbolWire {
    dim: usize,
    terms: Vec<TermWire>,
}

impl Serialize for PhaseSymbol {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        SymbolWire {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|((a, b, p), v)| {
                    let (num, den) = wire::split(v);
                    TermWire {
                        xi: a.as_slice().to_vec(),
                        x: b.as_slice().to_vec(),
                        num,
                        den,
                        ipow: *p as u32,
                    }
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for PhaseSymbol {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = SymbolWire::deserialize(de)?;
        let mut out = PhaseSymbol::zero(w.dim);
        for t in w.terms {
            if t.xi.len() != w.dim || t.x.len() != w.dim {
                return Err(D::Error::custom("symbol term has the wrong dimension"));
            }
            if t.ipow > 3 {
                return Err(D::Error::custom(format!("ipow {} outside 0..=3", t.ipow)));
            }
            let c = wire::join(t.num, t.den).map_err(D::Error::custom)?;
            out.add_term(MultiIndex::new(t.xi), MultiIndex::new(t.x), t.ipow, c);
        }
        Ok(out)
    }
}

/// `σ = Σ_e ħ^e σ_e`, mirroring the grading of the operator `X_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSymbol {
    pub index: u32,
    dim: usize,
    grades: BTreeMap<i32, PhaseSymbol>,
}

impl GradedSymbol {
    pub fn zero(index: u32, dim: usize) -> Self {
        GradedSymbol {
            index,
            dim,
            grades: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grades(&self) -> impl Iterator<Item = (i32, &PhaseSymbol)> {
        self.grades.iter().map(|(e, s)| (*e, s))
    }

    pub fn grade(&self, e: i32) -> PhaseSymbol {
        self.grades
            .get(&e)
            .cloned()
            .unwrap_or_else(|| PhaseSymbol::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn add_grade(&mut self, e: i32, s: &PhaseSymbol) {
        if s.is_zero() {
            return;
        }
        let entry = self
            .grades
            .entry(e)
            .or_insert_with(|| PhaseSymbol::zero(s.dim()));
        *entry += s;
        if entry.is_zero() {
            self.grades.remove(&e);
        }
    }
}
