use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::phase::PhaseSymbol;
use crate::kantorovitz::{c_mu, GaussianLaurent, SLaurent};
use crate::polydiff::{MultiIndex, Polynomial, Rational};
use crate::{Error, Result};

/// A product `Π_k ∂^{δ_k} V` of derivatives of an unspecified potential,
/// kept sorted.
pub type VFactors = Vec<MultiIndex>;

type Key = (MultiIndex, MultiIndex, VFactors, u8);

/// A symbol whose coefficients are polynomial in `x` and in the derivatives
/// of a symbolic potential `V`: `Σ c · i^p ξ^α x^β Π ∂^δ V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericSymbol {
    dim: usize,
    terms: BTreeMap<Key, Rational>,
}

impl GenericSymbol {
    pub fn zero(dim: usize) -> Self {
        GenericSymbol {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The symbol of multiplication by `V`.
    pub fn potential(dim: usize) -> Self {
        let mut out = Self::zero(dim);
        let z = MultiIndex::zero(dim);
        out.add_term(z.clone(), z.clone(), vec![z], 0, Rational::one());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Rational)> {
        self.terms.iter()
    }

    fn add_term(
        &mut self,
        xi: MultiIndex,
        x: MultiIndex,
        mut vf: VFactors,
        ipow: u32,
        c: Rational,
    ) {
        if c.is_zero() {
            return;
        }
        vf.sort();
        let p = ipow % 4;
        let c = if p >= 2 { -c } else { c };
        let key = (xi, x, vf, (p % 2) as u8);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&mut self, other: &GenericSymbol) {
        for ((a, b, vf, p), c) in &other.terms {
            self.add_term(a.clone(), b.clone(), vf.clone(), *p as u32, c.clone());
        }
    }

    fn map<F>(&self, mut f: F) -> GenericSymbol
    where
        F: FnMut(&Key, &Rational, &mut GenericSymbol),
    {
        let mut out = GenericSymbol::zero(self.dim);
        for (k, c) in &self.terms {
            f(k, c, &mut out);
        }
        out
    }

    fn scale(&self, c: &Rational) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            out.add_term(a.clone(), b.clone(), vf.clone(), *p as u32, v * c)
        })
    }

    fn times_i(&self, k: u32) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            out.add_term(a.clone(), b.clone(), vf.clone(), *p as u32 + k, v.clone())
        })
    }

    fn mul_v(&self) -> GenericSymbol {
        let z = MultiIndex::zero(self.dim);
        self.map(|(a, b, vf, p), v, out| {
            let mut vf = vf.clone();
            vf.push(z.clone());
            out.add_term(a.clone(), b.clone(), vf, *p as u32, v.clone())
        })
    }

    /// `∂/∂x_r`, by the product rule over `x^β` and each `V` factor.
    fn d_x(&self, r: usize) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            let e = b.get(r);
            if e > 0 {
                out.add_term(
                    a.clone(),
                    b.with(r, e - 1),
                    vf.clone(),
                    *p as u32,
                    v * Rational::from_integer(e.into()),
                );
            }
            for k in 0..vf.len() {
                let mut vf2 = vf.clone();
                vf2[k] = vf2[k].bump(r);
                out.add_term(a.clone(), b.clone(), vf2, *p as u32, v.clone());
            }
        })
    }

    fn d_xi(&self, r: usize) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            let e = a.get(r);
            if e > 0 {
                out.add_term(
                    a.with(r, e - 1),
                    b.clone(),
                    vf.clone(),
                    *p as u32,
                    v * Rational::from_integer(e.into()),
                );
            }
        })
    }

    fn mul_xi(&self, r: usize) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            out.add_term(a.bump(r), b.clone(), vf.clone(), *p as u32, v.clone())
        })
    }

    fn mul_x(&self, r: usize) -> GenericSymbol {
        self.map(|(a, b, vf, p), v, out| {
            out.add_term(a.clone(), b.bump(r), vf.clone(), *p as u32, v.clone())
        })
    }

    /// `(1/i) Σ ξ_r ∂_{x_r}`.
    fn raise(&self) -> GenericSymbol {
        let mut out = GenericSymbol::zero(self.dim);
        for r in 0..self.dim {
            out.add(&self.d_x(r).mul_xi(r));
        }
        out.times_i(3)
    }

    /// `i Σ x_r ∂_{ξ_r}`.
    fn lower(&self) -> GenericSymbol {
        let mut out = GenericSymbol::zero(self.dim);
        for r in 0..self.dim {
            out.add(&self.d_xi(r).mul_x(r));
        }
        out.times_i(1)
    }

    fn laplacian_x(&self) -> GenericSymbol {
        let mut out = GenericSymbol::zero(self.dim);
        for r in 0..self.dim {
            out.add(&self.d_x(r).d_x(r));
        }
        out
    }

    fn laplacian_xi(&self) -> GenericSymbol {
        let mut out = GenericSymbol::zero(self.dim);
        for r in 0..self.dim {
            out.add(&self.d_xi(r).d_xi(r));
        }
        out
    }

    /// Largest number of `V` factors in any term.
    pub fn v_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|(_, _, vf, _)| vf.len())
            .max()
            .unwrap_or(0)
    }

    /// Smallest number of `V` factors in any term.
    pub fn min_v_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|(_, _, vf, _)| vf.len())
            .min()
            .unwrap_or(0)
    }

    /// Substitutes a concrete potential.
    pub fn instantiate(&self, v: &Polynomial) -> PhaseSymbol {
        let mut out = PhaseSymbol::zero(self.dim);
        for ((a, b, vf, p), c) in &self.terms {
            let mut coeff = Polynomial::monomial(self.dim, b.clone(), c.clone());
            for d in vf {
                coeff = &coeff * &v.derivative_multi(d);
            }
            for (beta, cc) in coeff.terms() {
                out.add_term(a.clone(), beta.clone(), *p as u32, cc.clone());
            }
        }
        out
    }
}

/// Principal and subprincipal symbols of `X_1..X_{m_max}` for a symbolic
/// potential, keyed by ħ-grade.
#[allow(clippy::type_complexity)]
pub fn generic_symbol_chain(
    dim: usize,
    m_max: u32,
) -> Vec<(BTreeMap<i32, GenericSymbol>, BTreeMap<i32, GenericSymbol>)> {
    let half = Rational::new(1.into(), 2.into());
    let mut sigma = BTreeMap::from([(2, GenericSymbol::potential(dim))]);
    let mut sub: BTreeMap<i32, GenericSymbol> = BTreeMap::new();
    let mut out = vec![(sigma.clone(), sub.clone())];
    let push = |map: &mut BTreeMap<i32, GenericSymbol>, e: i32, s: GenericSymbol| {
        let entry = map.entry(e).or_insert_with(|| GenericSymbol::zero(dim));
        entry.add(&s);
        if entry.is_zero() {
            map.remove(&e);
        }
    };
    for _ in 1..m_max {
        let mut next_sigma = BTreeMap::new();
        let mut next_sub = BTreeMap::new();
        for (e, s) in &sigma {
            push(&mut next_sigma, e + 2, s.raise());
            push(&mut next_sigma, *e, s.lower());
            let mut up = s.mul_v();
            up.add(&s.laplacian_x().scale(&-half.clone()));
            push(&mut next_sub, e + 2, up);
            push(&mut next_sub, *e, s.laplacian_xi().scale(&half));
        }
        for (e, s) in &sub {
            push(&mut next_sub, e + 2, s.raise());
            push(&mut next_sub, *e, s.lower());
        }
        sigma = next_sigma;
        sub = next_sub;
        out.push((sigma.clone(), sub.clone()));
    }
    out
}

/// The rotation-averaged form of `∫ ρ_m dx = ∫ p(x, s) V e^{−s|x|²} dx` with
/// `p(x, s) = Σ_i χ_i(s) |x|^{2i}`, for odd `m` and a symbolic `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantStructure {
    pub m: u32,
    pub dim: usize,
    /// `χ_i(s)` for `i = 0..=(m−1)/2`.
    pub chi: Vec<SLaurent>,
    /// `p(x, s)` before averaging, after integration by parts.
    pub weight: GaussianLaurent,
    /// Degree of `p` in `x`.
    pub degree: u32,
    /// Whether `p` already equals its rotation average.
    pub rotation_invariant: bool,
}

impl InvariantStructure {
    /// `Σ_i χ_i(s) |x|^{2i}` as a Gaussian-weighted Laurent polynomial.
    pub fn averaged_weight(&self) -> GaussianLaurent {
        let mut out = GaussianLaurent::zero(self.dim);
        let r2 = Polynomial::norm_squared(self.dim);
        for (i, chi) in self.chi.iter().enumerate() {
            for (j, c) in chi.terms() {
                out.add_term(j, r2.pow(i as u32).scale(c));
            }
        }
        out
    }
}

/// Average of `x^γ` over the unit sphere `S^{n−1}`:
/// `Π (γ_i − 1)!! / Π_{k<|γ|/2} (n + 2k)` when every `γ_i` is even, else 0.
pub fn sphere_monomial_average(gamma: &MultiIndex) -> Rational {
    if !gamma.is_even() {
        return Rational::zero();
    }
    let n = gamma.dim() as i64;
    let mut num = BigInt::one();
    for &g in gamma.as_slice() {
        let mut k = g as i64 - 1;
        while k > 1 {
            num *= k;
            k -= 2;
        }
    }
    let mut den = BigInt::one();
    for k in 0..(gamma.order() / 2) as i64 {
        den *= n + 2 * k;
    }
    Rational::new(num, den)
}

/// Builds [`InvariantStructure`] for odd `m ≤ 7` by iterating the
/// principal-symbol recursion for a symbolic `V`, integrating by parts and
/// averaging over rotations.
pub fn invariant_structure(m: u32, dim: usize) -> Result<InvariantStructure> {
    if m % 2 == 0 || m > 7 {
        return Err(Error::Invalid(format!(
            "invariant structure needs odd m ≤ 7, got {m}"
        )));
    }
    crate::polydiff::check_session_dim(dim)?;
    let chain = generic_symbol_chain(dim, m);
    let sigma = &chain[m as usize - 1].0;
    let mi = m as i32;
    // ρ_m as Σ s^j c x^β ∂^δV
    let mut weight = GaussianLaurent::zero(dim);
    for (e, s) in sigma {
        let i = e - mi;
        let j = (1 - i) / 2;
        for ((alpha, beta, vf, p), c) in s.terms() {
            if alpha.order() as i32 != i - 1 {
                continue;
            }
            let Some(ca) = c_mu(alpha) else { continue };
            let ipow = (*p as u32 + 3 * alpha.order()) % 4;
            if ipow % 2 == 1 || vf.len() != 1 {
                return Err(Error::Internal(format!(
                    "unexpected principal term at grade {e}: ξ^{alpha} with {} V factors",
                    vf.len()
                )));
            }
            let sign = if ipow == 2 {
                -Rational::one()
            } else {
                Rational::one()
            };
            // ∫ x^β ∂^δV e = (−1)^{|δ|} ∫ V ∂^δ(x^β e)
            let delta = &vf[0];
            let mut g =
                GaussianLaurent::single(j, Polynomial::monomial(dim, beta.clone(), c * ca * sign));
            for r in 0..dim {
                for _ in 0..delta.get(r) {
                    g = g.x_derivative(r);
                }
            }
            if delta.order() % 2 == 1 {
                g = g.scale(&-Rational::one());
            }
            weight += &g;
        }
    }
    let degree = weight
        .terms()
        .filter_map(|(_, p)| p.degree())
        .max()
        .unwrap_or(0);
    let k = ((m - 1) / 2) as usize;
    let mut chi = vec![SLaurent::zero(); k + 1];
    for (j, p) in weight.terms() {
        for (gamma, c) in p.terms() {
            let avg = sphere_monomial_average(gamma);
            if avg.is_zero() {
                continue;
            }
            let idx = (gamma.order() / 2) as usize;
            if idx > k {
                return Err(Error::Internal(format!(
                    "weight has degree {} beyond m − 1 = {}",
                    gamma.order(),
                    m - 1
                )));
            }
            chi[idx].add_term(j, c * avg);
        }
    }
    let mut out = InvariantStructure {
        m,
        dim,
        chi,
        weight,
        degree,
        rotation_invariant: false,
    };
    out.rotation_invariant = out.averaged_weight() == out.weight;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polydiff::{int, rat};
    use crate::symbolcalc::symbol_chain;

    #[test]
    fn sphere_averages() {
        assert_eq!(
            sphere_monomial_average(&MultiIndex::new(vec![2, 0])),
            rat(1, 2)
        );
        assert_eq!(
            sphere_monomial_average(&MultiIndex::new(vec![4, 0, 0])),
            rat(1, 5)
        );
        assert_eq!(
            sphere_monomial_average(&MultiIndex::new(vec![2, 2, 0])),
            rat(1, 15)
        );
        assert_eq!(sphere_monomial_average(&MultiIndex::new(vec![4])), int(1));
        assert_eq!(
            sphere_monomial_average(&MultiIndex::new(vec![1, 1])),
            int(0)
        );
    }

    #[test]
    fn generic_chain_instantiates_to_concrete() {
        let v = &Polynomial::var(2, 0).pow(3) + &(&Polynomial::var(2, 0) * &Polynomial::var(2, 1));
        let generic = generic_symbol_chain(2, 4);
        let concrete = symbol_chain(&v, 4).unwrap();
        for (m, ((gs, gt), (cs, ct))) in generic.iter().zip(&concrete).enumerate() {
            for (e, g) in gs {
                assert_eq!(g.instantiate(&v), cs.grade(*e), "σ, m = {}", m + 1);
            }
            for (e, g) in gt {
                assert_eq!(g.instantiate(&v), ct.grade(*e), "σ̃, m = {}", m + 1);
            }
        }
    }

    #[test]
    fn first_structure_is_plain_integral() {
        let st = invariant_structure(1, 2).unwrap();
        assert_eq!(st.chi, vec![SLaurent::monomial(0, int(1))]);
        assert_eq!(st.degree, 0);
    }

    #[test]
    fn third_structure_has_degree_two() {
        for n in 1..=3 {
            let st = invariant_structure(3, n).unwrap();
            assert!(st.degree <= 2);
            assert!(st.rotation_invariant, "n = {n}");
            assert_eq!(st.chi.len(), 2);
        }
        assert!(invariant_structure(4, 1).is_err());
        assert!(invariant_structure(9, 1).is_err());
    }
}
