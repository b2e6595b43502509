use cremona_core::algebra::{gcd, parse_poly, resultant, Monomial, MultiPoly, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// Sparse polynomials with up to five terms of degree at most 3 in each variable.
fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..=3, 0u32..=3, 0u32..=3), rational()), 0..5)
        .prop_map(|terms| MultiPoly::from_terms(terms.into_iter().map(|((a, b, c), q)| (Monomial([a, b, c]), q))))
}

fn nonzero_poly() -> impl Strategy<Value = MultiPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_sums_match_cross_multiplication(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let s = Rational::new(a.into(), b.into()) + Rational::new(c.into(), d.into());
        prop_assert_eq!(s, Rational::new((a * d + b * c).into(), (b * d).into()));
    }

    #[test]
    fn printing_then_parsing_is_the_identity(p in poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn gcd_divides_both_and_contains_common_factor(p in nonzero_poly(), q in nonzero_poly(), r in nonzero_poly()) {
        let (a, b) = (&p * &r, &q * &r);
        let g = gcd(&a, &b);
        prop_assert!(a.rem(&g).is_zero());
        prop_assert!(b.rem(&g).is_zero());
        prop_assert!(g.rem(&r).is_zero(), "gcd {} misses factor {}", g, r);
    }

    #[test]
    fn substitution_is_a_ring_map(p in poly(), q in poly(), s0 in poly(), s1 in poly(), s2 in poly()) {
        let s = [s0, s1, s2];
        prop_assert_eq!((&p * &q).substitute(&s), &p.substitute(&s) * &q.substitute(&s));
        prop_assert_eq!((&p + &q).substitute(&s), &p.substitute(&s) + &q.substitute(&s));
    }

    #[test]
    fn order_is_additive(p in nonzero_poly(), q in nonzero_poly()) {
        prop_assert_eq!((&p * &q).order(), Some(p.order().unwrap() + q.order().unwrap()));
    }

    #[test]
    fn resultant_vanishes_exactly_on_common_factors(p in nonzero_poly(), q in nonzero_poly(), r in nonzero_poly()) {
        // r shares x with both products whenever it involves x
        let var = 0;
        let (a, b) = (&p * &r, &q * &r);
        if r.degree_in(var).unwrap_or(0) > 0 {
            prop_assert!(resultant(&a, &b, var).is_zero());
        }
        let common = gcd(&p, &q).degree_in(var).unwrap_or(0) > 0;
        if p.degree_in(var).unwrap_or(0) > 0 && q.degree_in(var).unwrap_or(0) > 0 {
            prop_assert_eq!(resultant(&p, &q, var).is_zero(), common);
        }
    }
}
