use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::laurent::{GaussianLaurent, HSeries};
use super::recursion::KantorovitzOp;
use crate::polydiff::{MultiIndex, Polynomial, Rational};
use crate::Result;

/// `∂^μ exp(−|x−y|²/4a)` at `x = y` equals `c_μ a^{−|μ|/2}`, with
/// `c_μ = (−1/4)^{|ν|} μ!/ν!` for `μ = 2ν` and zero otherwise.
pub fn c_mu(mu: &MultiIndex) -> Option<Rational> {
    let nu = mu.half()?;
    let quarter = Rational::new((-1).into(), 4.into());
    let mut c = Rational::from_integer(mu.factorial()) / Rational::from_integer(nu.factorial());
    for _ in 0..nu.order() {
        c *= &quarter;
    }
    Some(c)
}

/// `q_k(u, s)` with `d^k/du^k e^{−su²/4} = q_k e^{−su²/4}`, keyed by
/// `(s-power, u-power)`.
fn q_table(k_max: u32) -> Vec<BTreeMap<(i32, u32), Rational>> {
    let mut out = Vec::with_capacity(k_max as usize + 1);
    let mut q = BTreeMap::new();
    q.insert((0, 0), Rational::one());
    out.push(q.clone());
    let half = Rational::new(1.into(), 2.into());
    for _ in 0..k_max {
        let mut next: BTreeMap<(i32, u32), Rational> = BTreeMap::new();
        for ((j, p), c) in &q {
            if *p > 0 {
                *next.entry((*j, p - 1)).or_insert_with(Rational::zero) +=
                    c * Rational::from_integer((*p).into());
            }
            *next.entry((j + 1, p + 1)).or_insert_with(Rational::zero) -= c * &half;
        }
        next.retain(|_, c| !c.is_zero());
        q = next;
        out.push(q.clone());
    }
    out
}

/// `∂^β exp(−s|x+y|²/4)` at `x = y`, as a polynomial times `e^{−s|x|²}`.
fn sum_factor(beta: &MultiIndex, q: &[BTreeMap<(i32, u32), Rational>]) -> GaussianLaurent {
    let n = beta.dim();
    let mut acc = GaussianLaurent::single(0, Polynomial::one(n));
    for r in 0..n {
        let mut f = GaussianLaurent::zero(n);
        for ((j, p), c) in &q[beta.get(r) as usize] {
            // u = x_r + y_r = 2x_r on the diagonal
            let c = c * Rational::from_integer(num_bigint::BigInt::from(2).pow(*p));
            let mono = MultiIndex::zero(n).with(r, *p);
            f.add_term(*j, Polynomial::monomial(n, mono, c));
        }
        acc = acc.mul_coefficients(&f);
    }
    acc
}

/// `(X_m e)(x, x)` for the Mehler exponential
/// `e = exp(−|x−y|²/(4ħ²s) − s|x+y|²/4)`, exactly.
///
/// Each `∂^α` is split by Leibniz over the two Gaussian factors; the
/// difference factor contributes `c_μ ħ^{−|μ|} s^{−|μ|/2}` for even `μ`.
pub fn diagonal_eval(x: &KantorovitzOp) -> Result<HSeries> {
    x.check_grading()?;
    let n = x.dim();
    let max_order =
        x.op.grades()
            .filter_map(|(_, d)| d.degree())
            .max()
            .unwrap_or(0);
    let q = q_table(max_order);
    // exact: the top grade is ħ^{2m}, so no truncation is needed
    let mut out = HSeries::zero(n, i32::MAX);
    let mut factors: BTreeMap<MultiIndex, GaussianLaurent> = BTreeMap::new();
    for (e, d) in x.op.grades() {
        for (alpha, a) in d.terms() {
            for mu in alpha.sub_indices() {
                let Some(c) = c_mu(&mu) else { continue };
                let beta = alpha.checked_sub(&mu).expect("μ ≤ α");
                let f = factors
                    .entry(beta.clone())
                    .or_insert_with(|| sum_factor(&beta, &q));
                let c = c * Rational::from_integer(alpha.binomial(&mu));
                let shifted = f.mul_coefficients(&GaussianLaurent::single(
                    -(mu.order() as i32) / 2,
                    a.scale(&c),
                ));
                out.add(e - mu.order() as i32, &shifted);
            }
        }
    }
    Ok(out)
}

/// Shape of `(X_m e)(x, x)` in the form
/// `ħ^{b}(Σ_r e_{m,r}(x, s) ħ^{2r}) s^{−l} e^{−s|x|²}`, with `b = m+1`,
/// `l = (m−1)/2` for odd `m` and `b = m+2`, `l = m/2 − 1` for even `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalStructure {
    pub index: u32,
    pub base: i32,
    pub l: i32,
    /// ħ-exponents that are off the `b + 2r`, `0 ≤ r ≤ l` lattice.
    pub stray_exponents: Vec<i32>,
    /// Per `r`: the smallest and largest power of `s` in `e_{m,r}`.
    pub s_range: BTreeMap<u32, (i32, i32)>,
}

impl DiagonalStructure {
    /// ħ-support and parity, and `e_{m,r}` polynomial in `s`.
    pub fn parity_holds(&self) -> bool {
        self.stray_exponents.is_empty() && self.s_range.values().all(|(lo, _)| *lo >= 0)
    }

    /// `deg_s e_{m,r} ≤ 2r` for every `r`.
    pub fn degree_bound_holds(&self) -> bool {
        self.s_range.iter().all(|(r, (_, hi))| *hi <= 2 * *r as i32)
    }

    /// `deg_s e_{m,r} ≤ l + 2r` for odd `m` and `≤ l + 2r + 1` for even `m`.
    ///
    /// This is the bound that actually holds. Already at `m = 2`,
    /// `e_{2,0} = V² − ΔV/2 + s x·∇V` has degree one in `s`, so
    /// [`degree_bound_holds`](Self::degree_bound_holds) fails for any
    /// non-constant `V`.
    pub fn shifted_degree_bound_holds(&self) -> bool {
        let extra = if self.index % 2 == 0 { 1 } else { 0 };
        self.s_range
            .iter()
            .all(|(r, (_, hi))| *hi <= self.l + 2 * *r as i32 + extra)
    }
}

pub fn diagonal_structure(m: u32, series: &HSeries) -> DiagonalStructure {
    let m = m as i32;
    let (base, l) = if m % 2 == 1 {
        (m + 1, (m - 1) / 2)
    } else {
        (m + 2, m / 2 - 1)
    };
    let mut stray = Vec::new();
    let mut s_range = BTreeMap::new();
    for (e, g) in series.coeffs() {
        let off = e - base;
        if off < 0 || off % 2 != 0 || off / 2 > l {
            stray.push(e);
            continue;
        }
        let (lo, hi) = (g.min_s_exp().unwrap_or(0), g.max_s_exp().unwrap_or(0));
        s_range.insert((off / 2) as u32, (lo + l, hi + l));
    }
    DiagonalStructure {
        index: m as u32,
        base,
        l,
        stray_exponents: stray,
        s_range,
    }
}
