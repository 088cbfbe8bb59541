use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qtoda_core::algebra::{parse_poly, parse_ratfunc, poly_gcd, MPoly, Monomial, RatFunc};
use qtoda_core::Error;

fn small_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec(((-2i32..=2, -2i32..=2, -1i32..=1), -3i64..=3), 1..4).prop_map(|terms| {
        MPoly::from_terms(terms.into_iter().map(|((a, b, c), k)| {
            (
                Monomial::from_exponents(vec![a, b, c]),
                BigRational::from_integer(BigInt::from(k)),
            )
        }))
    })
}

fn nonzero_poly() -> impl Strategy<Value = MPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_filter("nonzero", |f| !f.is_zero())
}

fn q_inv() -> RatFunc {
    RatFunc::q_pow(-1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn addition_is_associative_and_commutative(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_distributes(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn inverses(a in nonzero_ratfunc()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert!((&a - &a).is_zero());
        prop_assert!(a.checked_div(&a).unwrap().is_one());
    }

    #[test]
    fn canonical_form_is_idempotent(a in ratfunc()) {
        let again = RatFunc::new(a.num().clone(), a.den().clone()).unwrap();
        prop_assert_eq!(again.num(), a.num());
        prop_assert_eq!(again.den(), a.den());
    }

    #[test]
    fn canonical_form_is_unique(n in small_poly(), d in nonzero_poly(), k in nonzero_poly()) {
        // scaling numerator and denominator by a common factor changes nothing
        let a = RatFunc::new(n.clone(), d.clone()).unwrap();
        let b = RatFunc::new(&n * &k, &d * &k).unwrap();
        prop_assert_eq!(a.num(), b.num());
        prop_assert_eq!(a.den(), b.den());
    }

    #[test]
    fn text_round_trip(a in ratfunc()) {
        let s = a.to_string();
        prop_assert_eq!(parse_ratfunc(&s).unwrap(), a);
    }

    #[test]
    fn poly_text_round_trip(p in small_poly()) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn q_inversion_is_an_involution(a in ratfunc()) {
        let once = a.substitute_q(&q_inv()).unwrap();
        prop_assert_eq!(once.substitute_q(&q_inv()).unwrap(), a);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in ratfunc(), b in ratfunc()) {
        let v = parse_ratfunc("q^2").unwrap();
        let lhs = (&a * &b).substitute_q(&v);
        let rhs = a.substitute_q(&v).and_then(|x| Ok(&x * &b.substitute_q(&v)?));
        if let (Ok(l), Ok(r)) = (lhs, rhs) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let x = &a * &c;
        let y = &b * &c;
        let g = poly_gcd(&x, &y);
        prop_assert!(x.exact_div(&g).is_some());
        prop_assert!(y.exact_div(&g).is_some());
        // the common factor survives, up to a unit
        let gc = poly_gcd(&g, &c);
        prop_assert!(c.exact_div(&gc).map(|u| u.is_monomial()).unwrap_or(false));
    }
}

#[test]
fn arithmetic_examples() {
    let a = parse_ratfunc("1/(1-q)").unwrap();
    let b = parse_ratfunc("1/(1-q^-1)").unwrap();
    assert!((&a + &b).is_one());
    assert_eq!(
        parse_ratfunc("(1-q^2)/(1-q)").unwrap(),
        parse_ratfunc("1+q").unwrap()
    );
    let c = parse_ratfunc("Λ1/(1-q)").unwrap();
    let d = parse_ratfunc("(1-q)/Λ1").unwrap();
    assert!((&c * &d).is_one());
    assert_eq!(
        RatFunc::one().checked_div(&RatFunc::zero()),
        Err(Error::DivisionByZero("div"))
    );
}

#[test]
fn degree_gap_examples() {
    let g = |s: &str| parse_ratfunc(s).unwrap().q_degree_gap().unwrap();
    assert_eq!(g("1/(1-q)"), 1);
    assert_eq!(g("(1-q^3)/(1-q)"), -2);
    assert_eq!(g("1/((1-q)*(1-Λ1^-2*q))"), 2);
    assert!(RatFunc::zero().q_degree_gap().is_err());
}

#[test]
fn substitution_examples() {
    let f = parse_ratfunc("1/(1-q)").unwrap();
    assert_eq!(
        f.substitute_q(&q_inv()).unwrap(),
        parse_ratfunc("-q/(1-q)").unwrap()
    );
    assert_eq!(
        parse_ratfunc("q").unwrap().substitute_q(&parse_ratfunc("q^2").unwrap()).unwrap(),
        parse_ratfunc("q^2").unwrap()
    );
    let g = parse_ratfunc("(1+q)/(1-Λ1*q)").unwrap();
    assert_eq!(
        g.substitute_q(&q_inv()).unwrap(),
        parse_ratfunc("(1+q^-1)/(1-Λ1*q^-1)").unwrap()
    );
    assert!(matches!(
        parse_ratfunc("1/(1-q^2)").unwrap().substitute_q(&RatFunc::one()),
        Err(Error::Pole(_))
    ));
}
