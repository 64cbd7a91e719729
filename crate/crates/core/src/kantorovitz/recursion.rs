use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::polydiff::{binomial, rat, DiffOp, HGradedOp, Polynomial, Rational};
use crate::{Error, Result};

/// The Kantorovitz operator `X_m` for the pair `(A, ħ²V)`, stored as an
/// ħ-graded differential operator together with its index `m`.
///
/// For `m ≥ 1` the grade `m + i` holds `X_m^{i−1}`, which has derivative
/// order at most `i − 1`, and only `1 ≤ i ≤ m` with `i ≡ m (mod 2)` occur.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KantorovitzOp {
    pub index: u32,
    pub op: HGradedOp,
}

impl KantorovitzOp {
    /// `X_0 = I`.
    pub fn identity(dim: usize) -> Self {
        KantorovitzOp {
            index: 0,
            op: HGradedOp::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `X_m^{i−1}`, the coefficient of `ħ^{m+i}`.
    pub fn component(&self, i: u32) -> DiffOp {
        self.op
            .grade((self.index + i) as i32)
            .cloned()
            .unwrap_or_else(|| DiffOp::zero(self.dim()))
    }

    pub fn check_grading(&self) -> Result<()> {
        check_grading(self.index, &self.op)
    }
}

/// Verifies the ħ-support and per-grade operator degree bounds of `X_m`.
pub fn check_grading(m: u32, op: &HGradedOp) -> Result<()> {
    for (e, d) in op.grades() {
        let deg = d.degree().unwrap_or(0);
        if m == 0 {
            if e != 0 || deg != 0 {
                return Err(Error::Grading(format!(
                    "X_0 must be the identity, found grade {e} of degree {deg}"
                )));
            }
            continue;
        }
        let i = e - m as i32;
        if i < 1 || i > m as i32 || (i - m as i32) % 2 != 0 {
            return Err(Error::Grading(format!(
                "X_{m} has a component at ħ^{e}, outside its allowed support"
            )));
        }
        if deg as i32 > i - 1 {
            return Err(Error::Grading(format!(
                "X_{m}^{} has derivative order {deg} > {}",
                i - 1,
                i - 1
            )));
        }
    }
    Ok(())
}

fn half() -> Rational {
    rat(1, 2)
}

/// `X_m = ħ²V X_{m−1} − ħ²[Δ/2, X_{m−1}] + [|x|²/2, X_{m−1}]`.
pub fn next_x(prev: &KantorovitzOp, v: &Polynomial) -> Result<KantorovitzOp> {
    Error::check_dim(prev.dim(), v.dim())?;
    prev.check_grading()?;
    let n = v.dim();
    let mult_v = HGradedOp::single(2, DiffOp::multiplication(v.clone()));
    let half_lap = HGradedOp::single(2, DiffOp::laplacian(n).scale(&half()));
    let half_sq = HGradedOp::single(
        0,
        DiffOp::multiplication(Polynomial::norm_squared(n).scale(&half())),
    );
    let x = &prev.op;
    let next = &(&mult_v.compose(x) - &half_lap.commutator(x)) + &half_sq.commutator(x);
    let out = KantorovitzOp {
        index: prev.index + 1,
        op: next,
    };
    out.check_grading()
        .map_err(|e| Error::Internal(format!("recursion produced an ill-graded operator: {e}")))?;
    Ok(out)
}

/// `[X_0, X_1, …, X_{m_max}]`.
pub fn x_chain(v: &Polynomial, m_max: u32) -> Result<Vec<KantorovitzOp>> {
    let mut chain = vec![KantorovitzOp::identity(v.dim())];
    for _ in 0..m_max {
        let next = next_x(chain.last().expect("nonempty"), v)?;
        chain.push(next);
    }
    Ok(chain)
}

/// `A = −ħ²Δ/2 + |x|²/2 − nħ/2` as an ħ-graded operator.
pub fn oscillator_generator(dim: usize) -> HGradedOp {
    let mut a = HGradedOp::single(2, DiffOp::laplacian(dim).scale(&rat(-1, 2)));
    a.add_grade(
        0,
        DiffOp::multiplication(Polynomial::norm_squared(dim).scale(&half())),
    );
    a.add_grade(1, DiffOp::identity(dim).scale(&rat(-(dim as i64), 2)));
    a
}

/// `H = A + ħ²V`.
pub fn perturbed_generator(v: &Polynomial) -> HGradedOp {
    &oscillator_generator(v.dim()) + &HGradedOp::single(2, DiffOp::multiplication(v.clone()))
}

/// Largest index accepted by [`closed_form_x`]; the expansion of `H^m` grows
/// quickly.
pub const CLOSED_FORM_MAX: u32 = 6;

/// `X_m = Σ_j (−1)^j C(m, j) H^{m−j} A^j`.
pub fn closed_form_x(m: u32, v: &Polynomial) -> Result<KantorovitzOp> {
    if m > CLOSED_FORM_MAX {
        return Err(Error::Resource(format!(
            "closed form limited to m ≤ {CLOSED_FORM_MAX}, got {m}"
        )));
    }
    let a = oscillator_generator(v.dim());
    let h = perturbed_generator(v);
    let mut h_pows = vec![HGradedOp::identity(v.dim())];
    let mut a_pows = vec![HGradedOp::identity(v.dim())];
    for k in 1..=m as usize {
        h_pows.push(h_pows[k - 1].compose(&h));
        a_pows.push(a_pows[k - 1].compose(&a));
    }
    let mut acc = HGradedOp::zero(v.dim());
    for j in 0..=m as usize {
        let sign = if j % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let c = sign * Rational::from_integer(binomial(m, j as u32));
        acc += &h_pows[m as usize - j].compose(&a_pows[j]).scale(&c);
    }
    Ok(KantorovitzOp { index: m, op: acc })
}
