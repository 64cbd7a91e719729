use super::phase::{GradedSymbol, PhaseSymbol};
use crate::kantorovitz::{c_mu, GaussianLaurent, KantorovitzOp};
use crate::polydiff::{DiffOp, MultiIndex, Polynomial, Rational};
use crate::{Error, Result};

/// Kohn–Nirenberg symbol of `Σ a_α(x) ∂^α`, with `∂^α = i^{|α|} D^α` and
/// `D^α ↦ ξ^α`.
pub fn symbol_of(d: &DiffOp) -> PhaseSymbol {
    let mut out = PhaseSymbol::zero(d.dim());
    for (alpha, a) in d.terms() {
        for (beta, c) in a.terms() {
            out.add_term(alpha.clone(), beta.clone(), alpha.order(), c.clone());
        }
    }
    out
}

/// Full symbol of `X_m`, grade by grade.
pub fn full_symbol_of(x: &KantorovitzOp) -> GradedSymbol {
    let mut out = GradedSymbol::zero(x.index, x.dim());
    for (e, d) in x.op.grades() {
        out.add_grade(e, &symbol_of(d));
    }
    out
}

/// Principal symbols `σ_m^{i−1}`: the `ξ`-degree `i − 1` part of grade `m+i`.
pub fn principal_of(x: &KantorovitzOp) -> GradedSymbol {
    top_parts(&full_symbol_of(x), 1)
}

/// Subprincipal symbols `σ̃_m^{i−1}`: the `ξ`-degree `i − 2` part.
pub fn subprincipal_of(x: &KantorovitzOp) -> GradedSymbol {
    top_parts(&full_symbol_of(x), 2)
}

fn top_parts(full: &GradedSymbol, drop: i32) -> GradedSymbol {
    let m = full.index as i32;
    let mut out = GradedSymbol::zero(full.index, full.dim());
    for (e, s) in full.grades() {
        let k = e - m - drop;
        if k >= 0 {
            out.add_grade(e, &s.xi_part(k as u32));
        }
    }
    out
}

/// Checks that `σ` has the ħ-support of `X_m` and `ξ`-degree at most `i−1`
/// at grade `m+i`.
pub fn check_symbol_grading(sym: &GradedSymbol) -> Result<()> {
    let m = sym.index as i32;
    for (e, s) in sym.grades() {
        let deg = s.xi_degree().unwrap_or(0) as i32;
        if m == 0 {
            if e != 0 || deg != 0 {
                return Err(Error::Grading(format!(
                    "σ_0 must be 1, found grade {e} of ξ-degree {deg}"
                )));
            }
            continue;
        }
        let i = e - m;
        if i < 1 || i > m || (i - m) % 2 != 0 || deg > i - 1 {
            return Err(Error::Grading(format!(
                "σ_{m} has a grade-{e} part of ξ-degree {deg}, outside the grading"
            )));
        }
    }
    Ok(())
}

/// `(1/i) Σ ξ_r ∂_{x_r}`, raising the ħ-grade by two.
fn raise(s: &PhaseSymbol) -> PhaseSymbol {
    s.xi_dot_grad_x().times_i(3)
}

/// `i Σ x_r ∂_{ξ_r}`, keeping the grade.
fn lower(s: &PhaseSymbol) -> PhaseSymbol {
    s.x_dot_grad_xi().times_i(1)
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// The full symbol of `X_{m+1}` from that of `X_m`, via the composition
/// formula applied to `ħ²V X − ħ²[Δ/2, X] + [|x|²/2, X]`.
pub fn full_symbol_step(p: &GradedSymbol, v: &Polynomial) -> Result<GradedSymbol> {
    crate::Error::check_dim(p.dim(), v.dim())?;
    check_symbol_grading(p)?;
    let mut out = GradedSymbol::zero(p.index + 1, p.dim());
    for (e, s) in p.grades() {
        let up = &(&raise(s) - &s.laplacian_x().scale(&half())) + &s.mul_poly(v);
        out.add_grade(e + 2, &up);
        out.add_grade(e, &(&lower(s) + &s.laplacian_xi().scale(&half())));
    }
    Ok(out)
}

/// `σ_{m+1}` from `σ_m`: `σ^i_{m+1} = (1/i) Σ (ξ_r ∂_{x_r} σ^{i−1}_m − x_r ∂_{ξ_r} σ^{i+1}_m)`.
pub fn principal_step(sigma: &GradedSymbol) -> Result<GradedSymbol> {
    check_symbol_grading(sigma)?;
    let mut out = GradedSymbol::zero(sigma.index + 1, sigma.dim());
    for (e, s) in sigma.grades() {
        out.add_grade(e + 2, &raise(s));
        out.add_grade(e, &lower(s));
    }
    Ok(out)
}

/// `σ̃_{m+1}` from `σ̃_m` and `σ_m`.
pub fn subprincipal_step(
    sub: &GradedSymbol,
    sigma: &GradedSymbol,
    v: &Polynomial,
) -> Result<GradedSymbol> {
    crate::Error::check_dim(sigma.dim(), v.dim())?;
    if sub.index != sigma.index {
        return Err(Error::Grading(format!(
            "subprincipal index {} does not match principal index {}",
            sub.index, sigma.index
        )));
    }
    check_symbol_grading(sub)?;
    check_symbol_grading(sigma)?;
    let mut out = GradedSymbol::zero(sigma.index + 1, sigma.dim());
    for (e, s) in sub.grades() {
        out.add_grade(e + 2, &raise(s));
        out.add_grade(e, &lower(s));
    }
    for (e, s) in sigma.grades() {
        let up = &s.mul_poly(v) - &s.laplacian_x().scale(&half());
        out.add_grade(e + 2, &up);
        out.add_grade(e, &s.laplacian_xi().scale(&half()));
    }
    Ok(out)
}

/// The symbol of `X_0 = I`.
pub fn identity_symbol(dim: usize) -> GradedSymbol {
    let mut out = GradedSymbol::zero(0, dim);
    out.add_grade(0, &PhaseSymbol::from_polynomial(&Polynomial::one(dim)));
    out
}

/// `σ_1 = ħ²V` and `σ̃_1 = 0`.
pub fn initial_symbols(v: &Polynomial) -> (GradedSymbol, GradedSymbol) {
    let mut sigma = GradedSymbol::zero(1, v.dim());
    sigma.add_grade(2, &PhaseSymbol::from_polynomial(v));
    (sigma, GradedSymbol::zero(1, v.dim()))
}

/// `[(σ_1, σ̃_1), …, (σ_m, σ̃_m)]` by the principal and subprincipal
/// recursions alone.
pub fn symbol_chain(v: &Polynomial, m_max: u32) -> Result<Vec<(GradedSymbol, GradedSymbol)>> {
    let mut out = vec![initial_symbols(v)];
    for _ in 1..m_max {
        let (s, t) = out.last().expect("nonempty");
        let next = (principal_step(s)?, subprincipal_step(t, s, v)?);
        out.push(next);
    }
    Ok(out)
}

/// `σ_m^{m−1} = ((1/i) Σ ξ_r ∂_{x_r})^{m−1} V`.
pub fn sigma_top(m: u32, v: &Polynomial) -> Result<PhaseSymbol> {
    if m == 0 {
        return Err(Error::Invalid("sigma_top needs m ≥ 1".into()));
    }
    let mut s = PhaseSymbol::from_polynomial(v);
    for _ in 1..m {
        s = raise(&s);
    }
    Ok(s)
}

/// `ρ_m(x, s) = e^{−s|x|²} Σ_i s^{(1−i)/2} Σ_{|α|=i−1} a_α(x) c_α` for odd `m`,
/// with `a_α` the coefficient of `∂^α` in `X_m^{i−1}`.
///
/// In symbol terms `a_α = (−i)^{|α|}` times the coefficient of `ξ^α`, so
/// each `ξ^α` is replaced by `(−i)^{|α|} c_α`.
pub fn rho_odd(principal: &GradedSymbol) -> Result<GaussianLaurent> {
    rho_odd_with(principal, &c_mu)
}

/// [`rho_odd`] with a caller-supplied table for `c_α`.
pub fn rho_odd_with(
    principal: &GradedSymbol,
    c_table: &dyn Fn(&MultiIndex) -> Option<Rational>,
) -> Result<GaussianLaurent> {
    let m = principal.index as i32;
    if m % 2 == 0 {
        return Err(Error::Invalid(format!(
            "ρ_m from principal symbols needs odd m, got {m}"
        )));
    }
    check_symbol_grading(principal)?;
    let n = principal.dim();
    let mut out = GaussianLaurent::zero(n);
    for (e, s) in principal.grades() {
        let i = e - m;
        let mut poly = Polynomial::zero(n);
        for ((alpha, beta, p), c) in s.terms() {
            if alpha.order() as i32 != i - 1 {
                continue;
            }
            let Some(ca) = c_table(alpha) else { continue };
            // i^p (−i)^{|α|} = i^{p + 3|α|}
            let ipow = (*p as u32 + 3 * alpha.order()) % 4;
            if ipow % 2 == 1 {
                return Err(Error::Internal(format!(
                    "imaginary term survives in ρ_{m} at ξ^{alpha}"
                )));
            }
            let sign = if ipow == 2 { -c.clone() } else { c.clone() };
            let mut term = Polynomial::zero(n);
            term.add_term(beta.clone(), sign * ca);
            poly += &term;
        }
        out.add_term((1 - i) / 2, poly);
    }
    Ok(out)
}
