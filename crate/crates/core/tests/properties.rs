//! Property-based invariants for the exact arithmetic layer and the
//! analytic verifiers, plus seeded randomized checks that tie the two
//! together.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nevlab_core::{
    characteristic_t, divides_report, parse_exact, wronskian, CircleQuad, DividesVerdict,
    ExactExpPoly, ExpPoly, GaussianRational, LocateOptions, Poly, Term,
};

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn arb_gauss() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, -3i64..=3).prop_map(|(re, im)| g(re, im))
}

fn arb_coeff_poly() -> impl Strategy<Value = Poly<GaussianRational>> {
    prop::collection::vec(arb_gauss(), 0..3).prop_map(Poly::new)
}

fn arb_exp_poly() -> impl Strategy<Value = ExactExpPoly> {
    prop::collection::vec((arb_coeff_poly(), -2i64..=2, -2i64..=2), 0..3).prop_map(|ts| {
        ExpPoly::from_terms(
            ts.into_iter()
                .map(|(coef, re, im)| Term { coef, freq: g(re, im) })
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(
        a in arb_exp_poly(), b in arb_exp_poly(), c in arb_exp_poly(),
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in arb_exp_poly(), b in arb_exp_poly(), c in arb_exp_poly(),
    ) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn multiplication_distributes_over_addition(
        a in arb_exp_poly(), b in arb_exp_poly(), c in arb_exp_poly(),
    ) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn additive_and_multiplicative_identities(a in arb_exp_poly()) {
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.add(&ExpPoly::zero()), a.clone());
        prop_assert_eq!(a.mul(&parse_exact("1").unwrap()), a);
    }

    #[test]
    fn derivative_satisfies_the_product_rule(
        a in arb_exp_poly(), b in arb_exp_poly(),
    ) {
        let lhs = a.mul(&b).derivative();
        let rhs = a.derivative().mul(&b).add(&a.mul(&b.derivative()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_trips_through_the_parser(a in arb_exp_poly()) {
        let text = format!("{a}");
        let back = parse_exact(&text).map_err(|e| {
            TestCaseError::fail(format!("failed to re-parse {text:?}: {e}"))
        })?;
        prop_assert_eq!(back, a);
    }

    #[test]
    fn float_evaluation_is_additive(
        a in arb_exp_poly(), b in arb_exp_poly(),
        re in -2.0f64..2.0, im in -2.0f64..2.0,
    ) {
        let z = Complex64::new(re, im);
        let fa = a.to_float().eval(z).unwrap();
        let fb = b.to_float().eval(z).unwrap();
        let fab = a.add(&b).to_float().eval(z).unwrap();
        let scale = 1.0 + fa.norm() + fb.norm();
        prop_assert!((fab - (fa + fb)).norm() <= 1e-9 * scale,
            "eval mismatch at {}: {} vs {}", z, fab, fa + fb);
    }

    #[test]
    fn wronskian_vanishes_on_dependent_families(
        a in arb_exp_poly(), b in arb_exp_poly(),
        c1 in arb_gauss(), c2 in arb_gauss(),
    ) {
        let combo = a.scale(&c1).add(&b.scale(&c2));
        let w = wronskian(&[a, b, combo]).unwrap();
        prop_assert!(w.is_zero());
    }

    #[test]
    fn wronskian_of_distinct_pure_exponentials_is_nonzero(
        f1 in (-3i64..=3, -3i64..=3), f2 in (-3i64..=3, -3i64..=3),
    ) {
        prop_assume!(f1 != f2);
        let w = wronskian(&[
            ExpPoly::exp(g(f1.0, f1.1)),
            ExpPoly::exp(g(f2.0, f2.1)),
        ])
        .unwrap();
        prop_assert!(!w.is_zero());
    }
}

proptest! {
    // The characteristic checks integrate on circles, so keep the case
    // count small enough for the suite to stay fast.
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn characteristic_is_nondecreasing_in_the_radius(a in arb_exp_poly()) {
        prop_assume!(!a.is_zero());
        let f = a.to_float();
        let cfg = CircleQuad::default();
        let mut prev = f64::NEG_INFINITY;
        for r in [2.0, 4.0, 8.0] {
            let t = characteristic_t(&f, r, &cfg).map_err(|e| {
                TestCaseError::fail(format!("characteristic failed at r = {r}: {e}"))
            })?;
            prop_assert!(t >= prev - 1e-7 * (1.0 + prev.abs()),
                "characteristic decreased: T({r}) = {t} < {prev}");
            prev = t;
        }
    }
}

/// A product divided by one of its factors is always certified entire:
/// fifty seeded random pairs, checked on a fixed disk.
#[test]
fn products_divided_by_a_factor_are_certified_entire() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x44495649);
    let random_factor = |rng: &mut ChaCha8Rng| loop {
        let nterms = rng.gen_range(1..=2usize);
        let mut freqs: Vec<(i64, i64)> = Vec::new();
        while freqs.len() < nterms {
            let fr = (rng.gen_range(-2..=2i64), rng.gen_range(-2..=2i64));
            if !freqs.contains(&fr) {
                freqs.push(fr);
            }
        }
        let terms: Vec<Term<GaussianRational>> = freqs
            .into_iter()
            .map(|fr| {
                let coeffs: Vec<GaussianRational> = (0..rng.gen_range(1..=2usize))
                    .map(|_| g(rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
                    .collect();
                Term { coef: Poly::new(coeffs), freq: g(fr.0, fr.1) }
            })
            .collect();
        let f = ExpPoly::from_terms(terms);
        if !f.is_zero() {
            return f;
        }
    };
    let opts = LocateOptions::default();
    for instance in 0..50 {
        let f = random_factor(&mut rng);
        let gdiv = random_factor(&mut rng);
        let product = f.mul(&gdiv);
        let cert = divides_report(&product.to_float(), &gdiv.to_float(), 3.0, 1e-6, &opts)
            .unwrap_or_else(|e| panic!("instance {instance} ({product}) / ({gdiv}): {e}"));
        assert_eq!(
            cert.verdict,
            DividesVerdict::EntireUpTo,
            "instance {instance}: ({product}) / ({gdiv}) flagged {:?}",
            cert.witnesses,
        );
    }
}
