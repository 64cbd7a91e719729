mod common;

use std::f64::consts::PI;

use common::{quadrature_triple, EXACT_FIXTURES};
use semiheat::fixtures::{polynomial_fixture, RadialBump};
use semiheat::invariants::{
    constancy_detector, gaussian_integral, invariant_triple, invariant_triple_exact,
    laplacian_split, odd_linear_detector, radial_gaussian_integral, sphere_functionals,
    sphere_functionals_numeric, support_annulus,
};
use semiheat::polydiff::rat;
use semiheat::quad::integrate;

#[test]
fn triple_matches_quadrature() {
    for name in EXACT_FIXTURES {
        for dim in 1..=2 {
            let v = polynomial_fixture(name, dim).unwrap();
            for s in [0.5, 1.0, 2.0] {
                let (i1, i2, i3) = invariant_triple(&v, s).unwrap();
                let q = quadrature_triple(&v, s);
                for (a, b) in [i1, i2, i3].iter().zip(q) {
                    assert!(
                        (a - b).abs() <= 1e-8 * b.abs().max(1.0),
                        "{name} n={dim} s={s}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn linear_potential_reference_values() {
    let v = polynomial_fixture("linear", 1).unwrap();
    let (i1, i2, i3) = invariant_triple(&v, 1.0).unwrap();
    assert_eq!(i1, 0.0);
    assert!((i2 - PI.sqrt() / 2.0).abs() < 1e-15);
    assert_eq!(i3, 0.0);
}

#[test]
fn invariants_are_rotation_invariant() {
    // rational rotations: Pythagorean triples
    for (a, b, c) in [(3, 4, 5), (5, 12, 13), (8, 15, 17)] {
        let rot = vec![vec![rat(a, c), rat(-b, c)], vec![rat(b, c), rat(a, c)]];
        for name in EXACT_FIXTURES {
            let v = polynomial_fixture(name, 2).unwrap();
            let w = v.linear_substitute(&rot);
            assert_eq!(
                invariant_triple_exact(&v),
                invariant_triple_exact(&w),
                "{name}"
            );
        }
    }
}

#[test]
fn radial_fubini() {
    for name in EXACT_FIXTURES {
        for dim in 1..=3 {
            let v = polynomial_fixture(name, dim).unwrap();
            let v2 = &v * &v;
            for s in [0.7, 1.5] {
                for p in [&v, &v2] {
                    let cart = gaussian_integral(p).eval(s);
                    let polar = radial_gaussian_integral(p, s);
                    assert!((cart - polar).abs() <= 1e-10 * cart.abs().max(1.0));
                }
                // I1 = ∫ M1(r) e^{−sr²} dr with M1 from the sphere formulas
                let via_spheres = integrate(
                    |r| sphere_functionals(&v, r).unwrap().m1 * (-s * r * r).exp(),
                    0.0,
                    12.0,
                    16,
                    1e-13,
                );
                let cart = gaussian_integral(&v).eval(s);
                assert!(
                    (cart - via_spheres).abs() <= 1e-10 * cart.abs().max(1.0),
                    "{name} n={dim}"
                );
            }
            let split = laplacian_split(&v, 0.9);
            assert!(
                (split.cartesian - split.polar_total()).abs()
                    <= 1e-10 * split.cartesian.abs().max(1.0)
            );
        }
    }
}

#[test]
fn constancy_on_radial_and_linear() {
    let q = polynomial_fixture("quadratic", 2).unwrap();
    let l = polynomial_fixture("linear", 2).unwrap();
    assert!(constancy_detector(&q, 1.0, 1e-10).unwrap().constant);
    assert!(!constancy_detector(&l, 1.0, 1e-10).unwrap().constant);
    let bump = RadialBump::default();
    let sf = sphere_functionals_numeric(&|x| bump.eval(x), 2, 1.0, 256).unwrap();
    assert!((sf.area * sf.m2 - sf.m1 * sf.m1).abs() <= 1e-6 * sf.area * sf.m2);
}

#[test]
fn odd_linear_equality_and_strictness() {
    let l = polynomial_fixture("linear", 2).unwrap();
    for r in [0.5, 1.0, 2.0] {
        let d = odd_linear_detector(&l, r, 1e-10).unwrap();
        let expect = 2.0 * PI * PI * r.powi(4);
        assert!((d.lhs - expect).abs() < 1e-10 * expect);
        assert!((d.rhs - expect).abs() < 1e-10 * expect);
        assert!(d.in_class);
        assert!((d.chi - 1.0 / r).abs() < 1e-12);
    }
    let c = polynomial_fixture("odd-cubic", 2).unwrap();
    let d = odd_linear_detector(&c, 1.0, 1e-10).unwrap();
    assert!(!d.in_class && d.gap > 0.0);
    assert!(odd_linear_detector(&polynomial_fixture("quadratic", 2).unwrap(), 1.0, 1e-10).is_err());
}

#[test]
fn bump_support_recovered_within_grid() {
    let bump = RadialBump::default();
    let h = 0.05;
    let grid: Vec<f64> = (1..=50).map(|k| k as f64 * h).collect();
    let (lo, hi) = support_annulus(&|x| bump.eval(x), 2, &grid, 1e-9)
        .unwrap()
        .unwrap();
    assert!(
        (lo - bump.r1).abs() <= h + 1e-9 && (hi - bump.r2).abs() <= h + 1e-9,
        "{lo} {hi}"
    );
}
