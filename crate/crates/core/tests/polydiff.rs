use proptest::prelude::*;
use semiheat::polydiff::{rat, DiffOp, HGradedOp, MultiIndex, Polynomial};

const DIM: usize = 2;

fn poly(max_deg: u32) -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((0..=max_deg, 0..=max_deg, -6i64..=6, 1i64..=4), 0..5).prop_map(
        |terms| {
            let mut p = Polynomial::zero(DIM);
            for (a, b, num, den) in terms {
                p.add_term(MultiIndex::new(vec![a, b]), rat(num, den));
            }
            p
        },
    )
}

fn op() -> impl Strategy<Value = DiffOp> {
    proptest::collection::vec((0u32..=2, 0u32..=1, poly(2)), 0..3).prop_map(|terms| {
        let mut d = DiffOp::zero(DIM);
        for (a, b, p) in terms {
            d.add_term(MultiIndex::new(vec![a, b]), p);
        }
        d
    })
}

fn point() -> impl Strategy<Value = Vec<semiheat::Rational>> {
    proptest::collection::vec((-5i64..=5, 1i64..=3), DIM)
        .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in poly(3), q in poly(3), r in poly(2)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(p in poly(3), q in poly(3), x in point()) {
        prop_assert_eq!((&p * &q).eval_exact(&x), p.eval_exact(&x) * q.eval_exact(&x));
        prop_assert_eq!((&p + &q).eval_exact(&x), p.eval_exact(&x) + q.eval_exact(&x));
    }

    #[test]
    fn leibniz_rule(p in poly(3), q in poly(3), i in 0usize..DIM) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_acts_as_composition(a in op(), b in op(), p in poly(4)) {
        prop_assert_eq!(a.compose(&b).apply(&p), a.apply(&b.apply(&p)));
    }

    #[test]
    fn jacobi_identity(a in op(), b in op(), c in op()) {
        let j = &(&a.commutator(&b.commutator(&c)) + &b.commutator(&c.commutator(&a)))
            + &c.commutator(&a.commutator(&b));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn graded_composition_is_associative(a in op(), b in op(), c in op()) {
        let (ga, gb, gc) = (HGradedOp::single(0, a), HGradedOp::single(2, b), HGradedOp::single(1, c));
        prop_assert_eq!(ga.compose(&gb).compose(&gc), ga.compose(&gb.compose(&gc)));
    }

    #[test]
    fn json_round_trips(p in poly(4), d in op()) {
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let back: DiffOp = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(&back, &d);
        let g = HGradedOp::single(3, d);
        let back: HGradedOp = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}
