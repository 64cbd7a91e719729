#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use semiheat::kantorovitz::x_chain;
use semiheat::mehler::{exponent, exponent_mehler, exponent_split, s_of_t};
use semiheat::polydiff::{int, rat, DiffOp, MultiIndex, Polynomial};
use semiheat::quad::{integrate_line, integrate_plane};

pub const EXACT_FIXTURES: [&str; 5] = ["zero", "linear", "quadratic", "quartic", "odd-cubic"];

pub fn x_pow(k: u32) -> Polynomial {
    Polynomial::monomial(1, MultiIndex::new(vec![k]), int(1))
}

/// Random polynomial with small rational coefficients and at least one
/// non-constant term.
pub fn random_poly(rng: &mut StdRng, dim: usize, deg: u32) -> Polynomial {
    loop {
        let mut p = Polynomial::zero(dim);
        for alpha in MultiIndex::all_up_to(dim, deg) {
            if rng.gen_bool(0.5) {
                let num = rng.gen_range(-4i64..=4);
                let den = rng.gen_range(1i64..=3);
                p.add_term(alpha, rat(num, den));
            }
        }
        if p.degree().unwrap_or(0) > 0 {
            return p;
        }
    }
}

/// The ten potentials of the grading suite: `n ≤ 2`, degree ≤ 3.
pub fn grading_potentials() -> Vec<Polynomial> {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    (0..10)
        .map(|i| {
            let dim = 1 + i % 2;
            let deg = 1 + (i as u32 % 3);
            random_poly(&mut rng, dim, deg)
        })
        .collect()
}

/// `(I1, I2, I3)` by adaptive quadrature, for `n ∈ {1, 2}`.
pub fn quadrature_triple(v: &Polynomial, s: f64) -> [f64; 3] {
    let lap = v.laplacian();
    let f = |x: &[f64]| {
        let (a, l) = (v.eval(x), lap.eval(x));
        let g = (-s * x.iter().map(|t| t * t).sum::<f64>()).exp();
        [a * g, a * a * g, (a * a * a - a * l) * g]
    };
    let sigma = (0.5 / s).sqrt();
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        *o = match v.dim() {
            1 => integrate_line(|x| f(&[x])[k], 0.0, sigma, 1e-13),
            _ => integrate_plane(|x, y| f(&[x, y])[k], sigma, 1e-12),
        };
    }
    out
}

/// Largest relative disagreement between the split form and the `s` form of
/// the exponent, and between the raw bracket and the split form, over
/// `samples` random points. The raw bracket cancels when `x ≈ y` and `tħ` is
/// small, so its error is measured against the size of its terms.
pub fn exponent_identity_error(samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut worst, mut worst_bracket) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let n = rng.gen_range(1..=3);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let h = rng.gen_range(0.02..0.5);
        let t = rng.gen_range(0.1..3.0);
        let s = s_of_t(t, h).unwrap();
        let a = exponent_mehler(&x, &y, t, h);
        let b = exponent_split(&x, &y, t, h);
        let c = exponent(&x, &y, s, h);
        worst = worst.max((b - c).abs() / b.abs().max(1.0));
        let sq: f64 = x.iter().chain(&y).map(|v| v * v).sum();
        let terms = sq / (h * -(-2.0 * t * h).exp_m1());
        worst_bracket = worst_bracket.max((a - b).abs() / terms.max(1.0));
    }
    (worst, worst_bracket)
}

fn grad_dot(v: &Polynomial) -> DiffOp {
    let mut out = DiffOp::zero(v.dim());
    for i in 0..v.dim() {
        out += &DiffOp::partial(v.dim(), i).left_mul(&v.derivative(i));
    }
    out
}

/// Names of the published low-order operators that the recursion fails to
/// reproduce for `V`:
/// `X_1^0 = V`, `X_2^1 = −Σ ∂_iV ∂_i + V² − ΔV/2`, `X_3^0 = Σ x_i ∂_iV`, and
/// `X_3^2 = Σ ∂_i∂_jV ∂_i∂_j + Σ ∂_i(ΔV − 3V²/2) ∂_i + Δ²V/4 − Δ(V²)/2 + V³ − VΔV/2`
/// checked order by order.
pub fn published_operator_mismatches(v: &Polynomial) -> Vec<&'static str> {
    let dim = v.dim();
    let chain = x_chain(v, 3).expect("chain");
    let mult = DiffOp::multiplication;
    let lap = v.laplacian();
    let mut bad = Vec::new();
    if chain[1].component(1) != mult(v.clone()) {
        bad.push("X_1^0");
    }
    let x21 = &(&grad_dot(v).scale(&int(-1)) + &mult(v.pow(2))) - &mult(lap.scale(&rat(1, 2)));
    if chain[2].component(2) != x21 {
        bad.push("X_2^1");
    }
    if chain[3].component(1) != mult(v.euler()) {
        bad.push("X_3^0");
    }
    let x32 = chain[3].component(3);
    let zero_order = &(&(&lap.laplacian().scale(&rat(1, 4))
        - &v.pow(2).laplacian().scale(&rat(1, 2)))
        + &v.pow(3))
        - &(v * &lap).scale(&rat(1, 2));
    if x32.order_part(0) != mult(zero_order) {
        bad.push("X_3^2 order 0");
    }
    let f = &lap - &v.pow(2).scale(&rat(3, 2));
    if x32.order_part(1) != grad_dot(&f) {
        bad.push("X_3^2 order 1");
    }
    let mut second = DiffOp::zero(dim);
    for i in 0..dim {
        for j in 0..dim {
            let alpha = MultiIndex::unit(dim, i).add(&MultiIndex::unit(dim, j));
            second += &DiffOp::derivative(dim, alpha).left_mul(&v.derivative(i).derivative(j));
        }
    }
    if x32.order_part(2) != second {
        bad.push("X_3^2 order 2");
    }
    bad
}
