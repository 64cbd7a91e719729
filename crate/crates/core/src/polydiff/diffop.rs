use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::polynomial::monomial_string_named;
use super::{MultiIndex, Polynomial, Rational};

/// Differential operator `Σ_α a_α(x) ∂^α` with polynomial coefficients
/// written to the left of the derivatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp {
    dim: usize,
    terms: BTreeMap<MultiIndex, Polynomial>,
}

impl DiffOp {
    pub fn zero(dim: usize) -> Self {
        DiffOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::multiplication(Polynomial::one(dim))
    }

    /// Multiplication by `p`.
    pub fn multiplication(p: Polynomial) -> Self {
        let dim = p.dim();
        let mut d = Self::zero(dim);
        d.add_term(MultiIndex::zero(dim), p);
        d
    }

    /// `∂/∂x_i`.
    pub fn partial(dim: usize, i: usize) -> Self {
        Self::derivative(dim, MultiIndex::unit(dim, i))
    }

    /// Pure derivative `∂^α`.
    pub fn derivative(dim: usize, alpha: MultiIndex) -> Self {
        let mut d = Self::zero(dim);
        d.add_term(alpha, Polynomial::one(dim));
        d
    }

    /// `Δ = Σ ∂_i²`.
    pub fn laplacian(dim: usize) -> Self {
        let mut d = Self::zero(dim);
        for i in 0..dim {
            d.add_term(MultiIndex::unit(dim, i).bump(i), Polynomial::one(dim));
        }
        d
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Polynomial)>,
    {
        let mut d = Self::zero(dim);
        for (a, p) in terms {
            d.add_term(a, p);
        }
        d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Polynomial {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest derivative order with a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn add_term(&mut self, alpha: MultiIndex, p: Polynomial) {
        assert_eq!(alpha.dim(), self.dim, "derivative index length");
        assert_eq!(p.dim(), self.dim, "coefficient dimension");
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(alpha) {
            Entry::Vacant(v) => {
                v.insert(p);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &p;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffOp {
        DiffOp::from_terms(
            self.dim,
            self.terms.iter().map(|(a, p)| (a.clone(), p.scale(c))),
        )
    }

    /// `p · D` (left multiplication by a function).
    pub fn left_mul(&self, p: &Polynomial) -> DiffOp {
        DiffOp::from_terms(self.dim, self.terms.iter().map(|(a, q)| (a.clone(), p * q)))
    }

    /// Terms of derivative order exactly `k`.
    pub fn order_part(&self, k: u32) -> DiffOp {
        DiffOp::from_terms(
            self.dim,
            self.terms
                .iter()
                .filter(|(a, _)| a.order() == k)
                .map(|(a, p)| (a.clone(), p.clone())),
        )
    }

    /// `(D1 ∘ D2)`. For single terms,
    /// `(a ∂^α)(b ∂^β) = Σ_{γ≤α} C(α,γ) a (∂^γ b) ∂^{α−γ+β}`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let mut out = DiffOp::zero(self.dim);
        for (alpha, a) in &self.terms {
            let subs = alpha.sub_indices();
            for (beta, b) in &other.terms {
                for gamma in &subs {
                    let db = b.derivative_multi(gamma);
                    if db.is_zero() {
                        continue;
                    }
                    let binom: BigInt = alpha.binomial(gamma);
                    let coeff = (a * &db).scale(&Rational::from_integer(binom));
                    let rest = alpha.checked_sub(gamma).expect("γ ≤ α");
                    out.add_term(rest.add(beta), coeff);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        &self.compose(other) - &other.compose(self)
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        assert_eq!(self.dim, p.dim(), "operator dimension mismatch");
        let mut out = Polynomial::zero(self.dim);
        for (alpha, a) in &self.terms {
            let dp = p.derivative_multi(alpha);
            if !dp.is_zero() {
                out += &(a * &dp);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> DiffOp {
        (0..k).fold(DiffOp::identity(self.dim), |acc, _| acc.compose(self))
    }

    /// Adds `c` times the identity.
    pub fn plus_constant(&self, c: &Rational) -> DiffOp {
        let mut out = self.clone();
        out.add_term(
            MultiIndex::zero(self.dim),
            Polynomial::constant(self.dim, c.clone()),
        );
        out
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&DiffOp> for DiffOp {
    fn add_assign(&mut self, rhs: &DiffOp) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for (a, p) in &rhs.terms {
            self.add_term(a.clone(), p.clone());
        }
    }
}

impl SubAssign<&DiffOp> for DiffOp {
    fn sub_assign(&mut self, rhs: &DiffOp) {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        for (a, p) in &rhs.terms {
            self.add_term(a.clone(), -p);
        }
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let d = monomial_string_named(a, "d");
            if d.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})*{d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DiffTermWire {
    deriv: Vec<u32>,
    coeff: Polynomial,
}

#[derive(Serialize, Deserialize)]
struct DiffOpWire {
    dim: usize,
    terms: Vec<DiffTermWire>,
}

impl Serialize for DiffOp {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        DiffOpWire {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(a, p)| DiffTermWire {
                    deriv: a.as_slice().to_vec(),
                    coeff: p.clone(),
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DiffOp {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = DiffOpWire::deserialize(de)?;
        let mut d = DiffOp::zero(w.dim);
        for t in w.terms {
            if t.deriv.len() != w.dim || t.coeff.dim() != w.dim {
                return Err(D::Error::custom("operator term dimension mismatch"));
            }
            d.add_term(MultiIndex::new(t.deriv), t.coeff);
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydiff::{int, op_apply, op_commutator, op_compose, rat};

    fn x1() -> Polynomial {
        Polynomial::var(1, 0)
    }

    fn d1() -> DiffOp {
        DiffOp::partial(1, 0)
    }

    #[test]
    fn canonical_commutation() {
        // ∂ ∘ x = x∂ + 1
        let lhs = d1().compose(&DiffOp::multiplication(x1()));
        let rhs = &d1().left_mul(&x1()) + &DiffOp::identity(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_is_neutral() {
        let d = &DiffOp::laplacian(2).left_mul(&Polynomial::var(2, 1)) + &DiffOp::partial(2, 0);
        assert_eq!(d.compose(&DiffOp::identity(2)), d);
        assert_eq!(DiffOp::identity(2).compose(&d), d);
    }

    #[test]
    fn second_derivative_past_x() {
        // ∂² ∘ x = x∂² + 2∂, checked by applying both sides to 1, x, x², x³
        let d2 = DiffOp::derivative(1, MultiIndex::new(vec![2]));
        let lhs = d2.compose(&DiffOp::multiplication(x1()));
        let rhs = &d2.left_mul(&x1()) + &d1().scale(&int(2));
        assert_eq!(lhs, rhs);
        for k in 0..4 {
            let u = x1().pow(k);
            let direct = d2.apply(&(&x1() * &u));
            assert_eq!(lhs.apply(&u), direct);
            assert_eq!(rhs.apply(&u), direct);
        }
    }

    #[test]
    fn commutator_examples() {
        let d2 = DiffOp::derivative(1, MultiIndex::new(vec![2]));
        let c = op_commutator(&d2, &DiffOp::multiplication(x1())).unwrap();
        assert_eq!(c, d1().scale(&int(2)));
        assert!(op_commutator(&d2, &d2).unwrap().is_zero());
    }

    #[test]
    fn half_laplacian_with_half_norm() {
        // [Δ/2, |x|²/2] = Σ x_i ∂_i + n/2; compared against direct evaluation
        for n in 1..=3usize {
            let lap = DiffOp::laplacian(n).scale(&rat(1, 2));
            let q = DiffOp::multiplication(Polynomial::norm_squared(n).scale(&rat(1, 2)));
            let c = op_commutator(&lap, &q).unwrap();
            let mut expect = DiffOp::zero(n);
            for i in 0..n {
                expect += &DiffOp::partial(n, i).left_mul(&Polynomial::var(n, i));
            }
            let expect = expect.plus_constant(&rat(n as i64, 2));
            assert_eq!(c, expect);
            for alpha in MultiIndex::all_up_to(n, 3) {
                let u = Polynomial::monomial(n, alpha, int(1));
                let direct = &lap.apply(&q.apply(&u)) - &q.apply(&lap.apply(&u));
                assert_eq!(c.apply(&u), direct);
            }
        }
    }

    #[test]
    fn apply_examples() {
        assert_eq!(d1().apply(&x1().pow(3)), x1().pow(2).scale(&int(3)));
        let p = &x1().pow(2) + &Polynomial::one(1);
        assert_eq!(DiffOp::identity(1).apply(&p), p);
        let euler = d1().left_mul(&x1());
        for k in 0..6 {
            assert_eq!(euler.apply(&x1().pow(k)), x1().pow(k).scale(&int(k as i64)));
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(op_compose(&DiffOp::identity(1), &DiffOp::identity(2)).is_err());
        assert!(op_apply(&DiffOp::identity(1), &Polynomial::one(3)).is_err());
    }

    #[test]
    fn degree_and_json() {
        let d = &DiffOp::laplacian(2).left_mul(&Polynomial::var(2, 0)) + &DiffOp::identity(2);
        assert_eq!(d.degree(), Some(2));
        let s = serde_json::to_string(&d).unwrap();
        let back: DiffOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
