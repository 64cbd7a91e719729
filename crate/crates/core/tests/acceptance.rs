//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p semiheat --test acceptance`. The process exits
//! nonzero when a criterion fails that is not listed in [`KNOWN_FAILURES`].

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::{
    exponent_identity_error, grading_potentials, published_operator_mismatches, quadrature_triple,
    random_poly, x_pow, EXACT_FIXTURES,
};
use rand::{rngs::StdRng, Rng, SeedableRng};
use semiheat::fixtures::{polynomial_fixture, RadialBump};
use semiheat::invariants::{
    constancy_detector, gaussian_integral, invariant_triple, odd_linear_detector,
    radial_gaussian_integral, support_annulus,
};
use semiheat::kantorovitz::{
    assemble_upsilon, closed_form_x, diagonal_eval, diagonal_structure, oscillator_generator,
    perturbed_generator, x_chain, GaussianLaurent,
};
use semiheat::mehler::{free_trace, kernel_eval, s_of_t, t_of_s};
use semiheat::oracle::{build_hamiltonian, fit_expansion, FitOptions, DEFAULT_HBARS};
use semiheat::polydiff::{int, DiffOp, HGradedOp, Polynomial};
use semiheat::quad::integrate_line;
use semiheat::symbolcalc::{
    full_symbol_of, full_symbol_step, identity_symbol, principal_of, rho_odd, sigma_top,
    subprincipal_of, symbol_chain,
};

/// Criteria expected to fail, with the reason. The literal s-degree bound
/// `deg_s e_{m,r} ≤ 2r` is false: `e_{2,0} = V² − ΔV/2 + s x·∇V`.
const KNOWN_FAILURES: [(u32, &str); 1] = [(
    5,
    "literal bound deg_s e_{m,r} <= 2r is false for every non-constant V \
     (e_{2,0} = V^2 - lap(V)/2 + s x.grad V has s-degree 1); \
     the shifted bound l+2r (odd m), l+2r+1 (even m) holds",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn free_trace_exactness() -> Outcome {
    let start = Instant::now();
    let (h, s) = (0.1, 0.5);
    let t = t_of_s(s, h).unwrap();
    let model = build_hamiltonian(&Polynomial::zero(1), h, 200).unwrap();
    let tr = model.heat_trace(t, 1e-10).unwrap();
    let exact = free_trace(s, h, 1).unwrap();
    let err = (tr.value - 10.5).abs().max((tr.value - exact).abs());
    let el = start.elapsed();
    outcome(
        err <= 1e-10 && within(el, 5),
        format!(
            "trace = {:.15} |err| = {err:.2e} (kept-basis sum alone: err {:.2e}), {el:.2?}",
            tr.value,
            (tr.raw - 10.5).abs()
        ),
    )
}

fn upsilon_zero_reproduction() -> Outcome {
    let start = Instant::now();
    let mut exact = 0;
    for name in EXACT_FIXTURES {
        let v = polynomial_fixture(name, 2).unwrap();
        let u = assemble_upsilon(&v, 0).unwrap();
        if u[0] == GaussianLaurent::single(1, v.scale(&int(2))) {
            exact += 1;
        }
    }
    let fit = fit_expansion(
        &x_pow(2),
        0.5,
        &[1.0],
        &DEFAULT_HBARS,
        &FitOptions::default(),
    )
    .unwrap();
    let target = (-0.5f64).exp();
    let e = rel(fit.c1(0), target);
    let el = start.elapsed();
    outcome(
        exact == 5 && e <= 0.01 && within(el, 120),
        format!(
            "{exact}/5 fixtures exact; c1 = {:.8} vs e^-0.5 = {target:.8} (rel {e:.2e}), {el:.2?}",
            fit.c1(0)
        ),
    )
}

fn upsilon_one_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut lines = Vec::new();
    for (name, v, xs) in [
        ("x", x_pow(1), [0.5, 1.0, 1.5]),
        ("x^2", x_pow(2), [0.0, 0.5, 1.0]),
    ] {
        let u1 = &assemble_upsilon(&v, 1).unwrap()[1];
        let fit = fit_expansion(&v, 0.5, &xs, &DEFAULT_HBARS, &FitOptions::default()).unwrap();
        for (j, x) in xs.iter().enumerate() {
            let sym = u1.eval(0.5, &[*x]);
            let c2 = fit.c2(j).unwrap();
            let e = rel(c2, sym);
            worst = worst.max(e);
            lines.push(format!(
                "V={name} x={x}: c2={c2:.6} sym={sym:.6} rel={e:.1e} richardson={:.1e} resid={:.1e}",
                fit.uncertainty[j][1], fit.residuals[j]
            ));
        }
    }
    let el = start.elapsed();
    outcome(
        worst <= 0.05 && within(el, 300),
        format!(
            "worst rel {worst:.2e}, {el:.2?}\n      {}",
            lines.join("\n      ")
        ),
    )
}

fn operator_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(41);
    let mut potentials: Vec<Polynomial> = (0..6)
        .map(|i| random_poly(&mut rng, 1 + i % 2, 3))
        .collect();
    potentials.extend(
        EXACT_FIXTURES
            .iter()
            .map(|n| polynomial_fixture(n, 2).unwrap()),
    );
    let (mut closed_ok, mut x2_ok, mut published_ok) = (0, 0, 0);
    for v in &potentials {
        let chain = x_chain(v, 4).unwrap();
        if (0..=4u32).all(|m| chain[m as usize] == closed_form_x(m, v).unwrap()) {
            closed_ok += 1;
        }
        let a = oscillator_generator(v.dim());
        let h = perturbed_generator(v);
        let b = HGradedOp::single(2, DiffOp::multiplication(v.clone()));
        let lhs = &b.compose(&b) + &a.commutator(&b);
        let rhs = &(&h.compose(&h) - &h.compose(&a).scale(&int(2))) + &a.compose(&a);
        if lhs == rhs && chain[2].op == lhs {
            x2_ok += 1;
        }
        if published_operator_mismatches(v).is_empty() {
            published_ok += 1;
        }
    }
    let n = potentials.len();
    outcome(
        closed_ok == n && x2_ok == n && published_ok == n,
        format!(
            "recursion = closed form (m<=4): {closed_ok}/{n}; X_2 identity: {x2_ok}/{n}; \
             published X_1^0, X_2^1, X_3^0, X_3^2: {published_ok}/{n}"
        ),
    )
}

fn grading_and_parity() -> Outcome {
    let (mut graded, mut parity, mut literal, mut shifted, mut total) = (0, 0, 0, 0, 0);
    for v in grading_potentials() {
        let chain = x_chain(&v, 6).unwrap();
        for (m, x) in chain.iter().enumerate().skip(1) {
            total += 1;
            if x.check_grading().is_ok() {
                graded += 1;
            }
            let st = diagonal_structure(m as u32, &diagonal_eval(x).unwrap());
            parity += st.parity_holds() as usize;
            literal += st.degree_bound_holds() as usize;
            shifted += st.shifted_degree_bound_holds() as usize;
        }
    }
    outcome(
        graded == total && parity == total && literal == total,
        format!(
            "support+degree {graded}/{total}; parity {parity}/{total}; \
             s-degree <= 2r {literal}/{total}; s-degree <= l+2r(+1) {shifted}/{total}"
        ),
    )
}

fn symbol_equivalence() -> Outcome {
    let (mut full, mut ps, mut top, mut rho, mut total, mut rho_total) = (0, 0, 0, 0, 0, 0);
    for v in grading_potentials() {
        let ops = x_chain(&v, 6).unwrap();
        let syms = symbol_chain(&v, 6).unwrap();
        let mut p = identity_symbol(v.dim());
        for m in 1..=6usize {
            total += 1;
            p = full_symbol_step(&p, &v).unwrap();
            full += (p == full_symbol_of(&ops[m])) as usize;
            let (s, t) = &syms[m - 1];
            ps += (*s == principal_of(&ops[m]) && *t == subprincipal_of(&ops[m])) as usize;
            top += (sigma_top(m as u32, &v).unwrap() == s.grade(2 * m as i32)) as usize;
            if m % 2 == 1 {
                rho_total += 1;
                let lead = diagonal_eval(&ops[m]).unwrap().coeff(m as i32 + 1);
                rho += (rho_odd(s).unwrap() == lead) as usize;
            }
        }
    }
    outcome(
        full == total && ps == total && top == total && rho == rho_total,
        format!(
            "full symbols {full}/{total}; principal+subprincipal {ps}/{total}; \
             sigma_top {top}/{total}; rho_m = diagonal lead (m=1,3,5) {rho}/{rho_total}"
        ),
    )
}

fn invariant_consistency() -> Outcome {
    let (mut worst_q, mut worst_f) = (0.0f64, 0.0f64);
    for name in EXACT_FIXTURES {
        for dim in 1..=2 {
            let v = polynomial_fixture(name, dim).unwrap();
            for s in [0.5, 1.0, 2.0] {
                let (i1, i2, i3) = invariant_triple(&v, s).unwrap();
                let q = quadrature_triple(&v, s);
                for (a, b) in [i1, i2, i3].iter().zip(q) {
                    worst_q = worst_q.max((a - b).abs() / b.abs().max(1.0));
                }
                for p in [v.clone(), &v * &v] {
                    let cart = gaussian_integral(&p).eval(s);
                    let polar = radial_gaussian_integral(&p, s);
                    worst_f = worst_f.max((cart - polar).abs() / cart.abs().max(1.0));
                }
            }
        }
    }
    outcome(
        worst_q <= 1e-8 && worst_f <= 1e-10,
        format!("exact vs quadrature {worst_q:.2e}; radial Fubini {worst_f:.2e}"),
    )
}

fn detector_suite() -> Outcome {
    let q = polynomial_fixture("quadratic", 2).unwrap();
    let l = polynomial_fixture("linear", 2).unwrap();
    let c = polynomial_fixture("odd-cubic", 2).unwrap();
    let radial_ok = constancy_detector(&q, 1.0, 1e-10).unwrap().constant;
    let linear_rejected = !constancy_detector(&l, 1.0, 1e-10).unwrap().constant;
    let d = odd_linear_detector(&l, 1.0, 1e-10).unwrap();
    let identity = 2.0 * PI * PI;
    let eq_ok = d.in_class
        && rel(d.lhs, identity) < 1e-12
        && rel(d.rhs, identity) < 1e-12
        && (d.chi - 1.0).abs() < 1e-12;
    let dc = odd_linear_detector(&c, 1.0, 1e-10).unwrap();
    let strict = !dc.in_class && dc.gap > 0.0;
    let bump = RadialBump::default();
    let h = 0.05;
    let grid: Vec<f64> = (1..=50).map(|k| k as f64 * h).collect();
    let (lo, hi) = support_annulus(&|x| bump.eval(x), 2, &grid, 1e-9)
        .unwrap()
        .unwrap();
    let annulus = (lo - bump.r1).abs() <= h + 1e-9 && (hi - bump.r2).abs() <= h + 1e-9;
    outcome(
        radial_ok && linear_rejected && eq_ok && strict && annulus,
        format!(
            "constancy |x|^2 {radial_ok}, rejects x1 {linear_rejected}; \
             x1: lhs={:.6} rhs={:.6} (2pi^2={identity:.6}) chi={:.3}; \
             x1^3 gap={:.4}; bump support [{lo}, {hi}] vs [{}, {}]",
            d.lhs, d.rhs, d.chi, dc.gap, bump.r1, bump.r2
        ),
    )
}

fn mehler_algebra() -> Outcome {
    let (expo, bracket) = exponent_identity_error(10_000, 1);
    let h = 0.2;
    let (s1, s2) = (s_of_t(0.3, h).unwrap(), s_of_t(0.6, h).unwrap());
    let mut semigroup = 0.0f64;
    for (x, y) in [(0.0, 0.0), (0.3, -0.1), (1.0, 1.1)] {
        let lhs = integrate_line(
            |z| kernel_eval(&[x], &[z], s1, h).unwrap() * kernel_eval(&[z], &[y], s1, h).unwrap(),
            0.5 * (x + y),
            0.2,
            1e-12,
        );
        let rhs = kernel_eval(&[x], &[y], s2, h).unwrap();
        semigroup = semigroup.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    let mut rng = StdRng::seed_from_u64(3);
    let mut round = 0.0f64;
    for _ in 0..1000 {
        let h = rng.gen_range(0.01..1.0);
        let t = rng.gen_range(0.01..5.0);
        let back = t_of_s(s_of_t(t, h).unwrap(), h).unwrap();
        round = round.max(rel(back, t));
    }
    outcome(
        expo <= 1e-13 && semigroup <= 1e-6 && round <= 1e-14,
        format!(
            "exponent forms {expo:.1e} (raw bracket {bracket:.1e} of term size); \
             semigroup {semigroup:.1e}; time change round trip {round:.1e}"
        ),
    )
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 9] = [
        (1, "free-trace exactness", free_trace_exactness),
        (2, "Upsilon_0 reproduction", upsilon_zero_reproduction),
        (
            3,
            "Upsilon_1 cross-validation",
            upsilon_one_cross_validation,
        ),
        (4, "operator identities", operator_identities),
        (5, "grading/parity/s-degree", grading_and_parity),
        (6, "symbol-calculus equivalence", symbol_equivalence),
        (7, "invariant-triple consistency", invariant_consistency),
        (8, "detector suite", detector_suite),
        (9, "Mehler algebra", mehler_algebra),
    ];
    let mut unexpected = Vec::new();
    for (id, title, run) in criteria {
        let o = run();
        let known = KNOWN_FAILURES
            .iter()
            .find(|(k, _)| *k == id)
            .map(|(_, why)| *why);
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id}. {title}: {}", o.detail);
        match (o.pass, known) {
            (false, Some(why)) => println!("      known failure: {why}"),
            (false, None) => unexpected.push(id),
            (true, Some(_)) => println!("      note: listed as a known failure but passed"),
            (true, None) => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
