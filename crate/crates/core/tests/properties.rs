//! Algebraic invariants under random inputs.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cp2q::ncrewrite::{
    evaluate_classical, normal_form, random_sphere_point, Letter, NcMonomial, NcPoly,
};
use cp2q::qarith::LaurentScalar;

fn laurent() -> impl Strategy<Value = LaurentScalar> {
    prop::collection::vec((-24i32..24, -5i64..6), 0..5).prop_map(|terms| {
        let mut s = LaurentScalar::zero();
        for (e, c) in terms {
            s.add_term(e, BigRational::from_integer(BigInt::from(c)));
        }
        s
    })
}

fn poly() -> impl Strategy<Value = NcPoly> {
    let word = prop::collection::vec(0usize..6, 0..4)
        .prop_map(|w| NcMonomial(w.into_iter().map(|i| Letter::ALL[i]).collect()));
    prop::collection::vec((word, -2i32..3, -3i64..4), 1..4).prop_map(|terms| {
        let mut f = NcPoly::zero();
        for (w, e, c) in terms {
            let coeff = LaurentScalar::monomial(12 * e, BigRational::from_integer(BigInt::from(c)));
            f = &f + &NcPoly::term(w, coeff);
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_evaluation_is_a_homomorphism(a in laurent(), b in laurent(), q in 0.3f64..0.95) {
        let scale = 1.0 + a.eval(q).abs() * b.eval(q).abs() + a.eval(q).abs() + b.eval(q).abs();
        prop_assert!(((&a * &b).eval(q) - a.eval(q) * b.eval(q)).abs() <= 1e-9 * scale);
        prop_assert!(((&a + &b).eval(q) - a.eval(q) - b.eval(q)).abs() <= 1e-9 * scale);
    }

    #[test]
    fn laurent_ring_axioms(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn normal_form_is_idempotent(f in poly()) {
        let n = normal_form(&f).unwrap();
        prop_assert!(n.is_normal());
        prop_assert_eq!(normal_form(&n).unwrap(), n);
    }

    #[test]
    fn normal_form_is_linear(f in poly(), g in poly()) {
        let lhs = normal_form(&(&f + &g)).unwrap();
        let rhs = &normal_form(&f).unwrap() + &normal_form(&g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn classical_evaluation_is_a_homomorphism(f in poly(), g in poly(), seed in 0u64..1000) {
        let z = random_sphere_point(&mut ChaCha8Rng::seed_from_u64(seed));
        let (a, b) = (evaluate_classical(&f, &z), evaluate_classical(&g, &z));
        let prod = evaluate_classical(&(&f * &g), &z);
        prop_assert!((prod - a * b).norm() <= 1e-9 * (1.0 + a.norm() * b.norm()));
        // rewriting respects the sphere at q = 1
        let n = normal_form(&f).unwrap();
        prop_assert!((evaluate_classical(&n, &z) - a).norm() <= 1e-9 * (1.0 + a.norm()));
    }
}
