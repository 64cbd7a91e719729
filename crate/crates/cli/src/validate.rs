use semiheat::invariants::{
    gaussian_integral, invariant_triple, invariant_triple_quadrature, radial_gaussian_integral,
};
use semiheat::kantorovitz::{
    assemble_upsilon, c_mu, closed_form_x, diagonal_eval, diagonal_structure, x_chain,
    GaussianLaurent,
};
use semiheat::oracle::{fit_expansion, FitOptions};
use semiheat::polydiff::int;
use semiheat::symbolcalc::{
    full_symbol_of, full_symbol_step, identity_symbol, principal_of, rho_odd_with, subprincipal_of,
    symbol_chain,
};
use semiheat::{MultiIndex, Polynomial, Rational};
use serde::Serialize;

use crate::config::{Fault, JobConfig};
use crate::output::Writer;
use crate::Failure;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Measured error, or the number of mismatches for exact checks.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Serialize)]
struct Report<'a> {
    potential: String,
    passed: bool,
    first_failure: Option<&'static str>,
    checks: &'a [Check],
}

fn exact(name: &'static str, mismatches: usize, total: usize, what: &str) -> Check {
    Check {
        name,
        pass: mismatches == 0,
        measured: mismatches as f64,
        tolerance: 0.0,
        detail: format!("{}/{total} {what} agree", total - mismatches),
    }
}

fn corrupted_c(mu: &MultiIndex) -> Option<Rational> {
    let c = c_mu(mu)?;
    Some(if mu.order() == 2 { c * int(2) } else { c })
}

fn symbolic_checks(v: &Polynomial, fault: Option<Fault>) -> semiheat::Result<Vec<Check>> {
    let mut out = Vec::new();
    let chain = x_chain(v, 6)?;

    let bad = (0..=4u32)
        .filter(|&m| closed_form_x(m, v).ok().as_ref() != Some(&chain[m as usize]))
        .count();
    out.push(exact(
        "recursion-vs-closed-form",
        bad,
        5,
        "operators X_0..X_4",
    ));

    let bad = chain
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(m, x)| {
            x.check_grading().is_err()
                || !diagonal_eval(x)
                    .map(|d| diagonal_structure(*m as u32, &d).parity_holds())
                    .unwrap_or(false)
        })
        .count();
    out.push(exact("grading-and-parity", bad, 6, "operators X_1..X_6"));

    let syms = symbol_chain(v, 6)?;
    let mut p = identity_symbol(v.dim());
    let mut bad = 0;
    for m in 1..=6 {
        p = full_symbol_step(&p, v)?;
        let (s, t) = &syms[m - 1];
        let x = &chain[m];
        if p != full_symbol_of(x) || *s != principal_of(x) || *t != subprincipal_of(x) {
            bad += 1;
        }
    }
    out.push(exact(
        "operator-vs-symbol",
        bad,
        6,
        "symbol triples m = 1..6",
    ));

    let table: &dyn Fn(&MultiIndex) -> Option<Rational> = match fault {
        Some(Fault::CTable) => &corrupted_c,
        None => &c_mu,
    };
    let mut bad = 0;
    for m in [1usize, 3, 5] {
        let lead = diagonal_eval(&chain[m])?.coeff(m as i32 + 1);
        if rho_odd_with(&syms[m - 1].0, table)? != lead {
            bad += 1;
        }
    }
    out.push(exact(
        "rho-vs-diagonal",
        bad,
        3,
        "leading terms m = 1, 3, 5",
    ));

    let u0 = &assemble_upsilon(v, 0)?[0];
    let expect = GaussianLaurent::single(1, v.scale(&int(2)));
    out.push(exact(
        "upsilon0",
        (*u0 != expect) as usize,
        1,
        "Υ_0 = 2sV e^{-s|x|²}",
    ));
    Ok(out)
}

fn relative(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

fn oracle_check(v: &Polynomial, cfg: &JobConfig) -> semiheat::Result<Check> {
    let ups = assemble_upsilon(v, 1)?;
    let opts = FitOptions {
        terms: 3.min(cfg.hbar.len()),
        tol: 1e-12,
        basis: cfg.basis,
    };
    let fit = fit_expansion(v, cfg.s, &cfg.x, &cfg.hbar, &opts)?;
    let (mut e0, mut e1) = (0.0f64, 0.0f64);
    for (j, x) in cfg.x.iter().enumerate() {
        e0 = e0.max(relative(fit.c1(j), ups[0].eval(cfg.s, &[*x]), 1e-4));
        if let Some(c2) = fit.c2(j) {
            e1 = e1.max(relative(c2, ups[1].eval(cfg.s, &[*x]), 1e-4));
        }
    }
    Ok(Check {
        name: "symbolic-vs-oracle",
        pass: e0 <= 0.01 && e1 <= 0.05,
        measured: e1.max(e0),
        tolerance: 0.05,
        detail: format!("c1 vs Υ_0 rel {e0:.2e} (≤ 1e-2), c2 vs Υ_1 rel {e1:.2e} (≤ 5e-2)"),
    })
}

fn invariant_check(v: &Polynomial, cfg: &JobConfig) -> semiheat::Result<Check> {
    let (mut eq, mut ef) = (0.0f64, 0.0f64);
    for &s in &cfg.s_grid {
        let (a, b, c) = invariant_triple(v, s)?;
        let (qa, qb, qc) = invariant_triple_quadrature(v, s, 1e-12)?;
        for (x, y) in [(a, qa), (b, qb), (c, qc)] {
            eq = eq.max((x - y).abs() / y.abs().max(1.0));
        }
        for p in [v.clone(), v * v] {
            let cart = gaussian_integral(&p).eval(s);
            ef = ef.max((cart - radial_gaussian_integral(&p, s)).abs() / cart.abs().max(1.0));
        }
    }
    Ok(Check {
        name: "invariants",
        pass: eq <= 1e-8 && ef <= 1e-10,
        measured: eq.max(ef),
        tolerance: 1e-8,
        detail: format!("exact vs quadrature {eq:.2e} (≤ 1e-8), radial Fubini {ef:.2e} (≤ 1e-10)"),
    })
}

pub fn run_validate(cfg: &JobConfig, w: &mut Writer) -> Result<(), Failure> {
    let v = cfg.load_polynomial()?;
    let mut checks = symbolic_checks(&v, cfg.fault)?;
    if cfg.dim == 1 {
        checks.push(oracle_check(&v, cfg)?);
    }
    if cfg.dim <= 2 {
        checks.push(invariant_check(&v, cfg)?);
    }
    let first = checks.iter().find(|c| !c.pass).map(|c| c.name);
    for c in &checks {
        println!(
            "[{}] {}: {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    w.json(
        "report.json",
        &Report {
            potential: v.to_string(),
            passed: first.is_none(),
            first_failure: first,
            checks: &checks,
        },
    )?;
    match first {
        Some(name) => Err(Failure::Check(format!("check {name} failed"))),
        None => Ok(()),
    }
}
