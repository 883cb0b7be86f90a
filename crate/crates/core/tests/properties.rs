mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use starmul_core::algebra::{MultiPoly, RationalFunction as Rf};
use starmul_core::dsl::{parse_expression, parse_mupoly};
use starmul_core::mu_ring::{companion, divmod_mu, reduce, star_mul, star_mul_matrix_route, MuPoly};

proptest! {
    #[test]
    fn polynomial_ring_axioms(a in poly_strategy(2), b in poly_strategy(2), c in poly_strategy(2)) {
        let v = xy();
        let (a, b, c) = (poly_from(&v, &a), poly_from(&v, &b), poly_from(&v, &c));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn polynomial_canonical_form(raw in poly_strategy(3)) {
        let v = vars(3);
        let p = poly_from(&v, &raw);
        prop_assert!(p.terms().all(|(m, c)| m.0.len() == 3 && !num_traits::Zero::is_zero(c)));
        let mut rev = raw.clone();
        rev.reverse();
        prop_assert_eq!(&poly_from(&v, &rev), &p);
        // splitting every coefficient in two halves gives the same polynomial
        let split: Vec<_> = raw.iter().flat_map(|(e, a, b)| [(e.clone(), *a, 2 * b), (e.clone(), *a, 2 * b)]).collect();
        prop_assert_eq!(poly_from(&v, &split), p);
    }

    #[test]
    fn rational_function_field_axioms(
        an in poly_strategy(2), ad in poly_strategy(2),
        bn in poly_strategy(2), bd in poly_strategy(2),
        cn in poly_strategy(2), cd in poly_strategy(2),
    ) {
        let v = xy();
        let (a, b, c) = (rf_from(&v, &an, &ad), rf_from(&v, &bn, &bd), rf_from(&v, &cn, &cd));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }
    }

    #[test]
    fn rational_function_canonical_form(
        n in poly_strategy(2), d in poly_strategy(2), f in poly_strategy(2),
    ) {
        let v = xy();
        let num = poly_from(&v, &n);
        let den = poly_from(&v, &d).add(&MultiPoly::from_int(&v, 5));
        let factor = poly_from(&v, &f).add(&MultiPoly::from_int(&v, 3));
        prop_assume!(!den.is_zero() && !factor.is_zero());
        let a = Rf::normalize(num.clone(), den.clone()).unwrap();
        let b = Rf::normalize(num.mul(&factor), den.mul(&factor)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.denom().leading_coeff() > num_traits::Zero::zero());
        let g = a.numer().gcd(a.denom());
        prop_assert!(g.total_degree() == 0);
        if a.is_zero() {
            prop_assert!(a.denom().is_one());
        }
    }

    #[test]
    fn leibniz_rule(
        an in poly_strategy(2), ad in poly_strategy(2),
        bn in poly_strategy(2), bd in poly_strategy(2),
        idx in 0usize..2,
    ) {
        let v = xy();
        let (a, b) = (rf_from(&v, &an, &ad), rf_from(&v, &bn, &bd));
        let lhs = (&a * &b).partial(idx);
        let rhs = &(&a.partial(idx) * &b) + &(&a * &b.partial(idx));
        prop_assert_eq!(lhs, rhs);
        if !b.is_zero() {
            let quotient = a.checked_div(&b).unwrap().partial(idx);
            let expected = (&(&a.partial(idx) * &b) - &(&a * &b.partial(idx))).checked_div(&b.pow(2)).unwrap();
            prop_assert_eq!(quotient, expected);
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        an in poly_strategy(2), ad in poly_strategy(2),
        bn in poly_strategy(2), bd in poly_strategy(2),
        px in -4i64..=4, py in 1i64..=4,
    ) {
        let v = xy();
        let (a, b) = (rf_from(&v, &an, &ad), rf_from(&v, &bn, &bd));
        let pt = [q(px, 1), q(1, py)];
        if let (Some(ea), Some(eb)) = (a.eval(&pt), b.eval(&pt)) {
            prop_assert_eq!((&a * &b).eval(&pt), Some(&ea * &eb));
            prop_assert_eq!((&a + &b).eval(&pt), Some(&ea + &eb));
        }
    }

    #[test]
    fn star_product_routes_and_division(seed in any::<u64>(), m in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = xy();
        let z = random_z(&mut rng, &v, m);
        let (a, b) = (random_reduced(&mut rng, &v, m), random_reduced(&mut rng, &v, m));
        prop_assert_eq!(star_mul(&a, &b, &z).unwrap(), star_mul_matrix_route(&a, &b, &z).unwrap());
        let p = a.mul(&b).add(&a);
        let (quot, rem) = divmod_mu(&p, &z);
        prop_assert!(rem.degree().map_or(true, |d| d < m));
        prop_assert_eq!(quot.mul(&z.to_mupoly()).add(&rem), p);
    }

    #[test]
    fn cayley_hamilton(seed in any::<u64>(), m in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = xy();
        let z = random_z(&mut rng, &v, m);
        let c = companion(&z).entries;
        prop_assert!(z.to_mupoly().at_matrix(&c).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dsl_round_trip(
        n in poly_strategy(2), d in poly_strategy(2), seed in any::<u64>(),
    ) {
        let v = xy();
        let f = rf_from(&v, &n, &d);
        prop_assert_eq!(parse_expression(&f.to_string(), &v).unwrap(), f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = MuPoly::from_coeffs(&v, vec![f, random_rf(&mut rng, &v, true), random_rf(&mut rng, &v, true)]);
        prop_assert_eq!(parse_mupoly(&p.to_string(), &v).unwrap(), p);
    }
}

#[test]
fn star_ring_axioms_on_random_triples() {
    for m in 2..=4 {
        let v = vars(m);
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        let z = starmul_core::mu_ring::MonicZ::new(&v, (0..m).map(|i| Rf::var(&v, i)).collect()).unwrap();
        for _ in 0..500 {
            let (a, b, c) = (
                random_reduced(&mut rng, &v, m),
                random_reduced(&mut rng, &v, m),
                random_reduced(&mut rng, &v, m),
            );
            let k = q(rand::Rng::gen_range(&mut rng, -3..=3), 2);
            let ab = star_mul(&a, &b, &z).unwrap();
            assert_eq!(ab, star_mul(&b, &a, &z).unwrap());
            assert_eq!(star_mul(&ab, &c, &z).unwrap(), star_mul(&a, &star_mul(&b, &c, &z).unwrap(), &z).unwrap());
            let lin = star_mul(&a.scale_q(&k).add(&b), &c, &z).unwrap();
            let expected = star_mul(&a, &c, &z).unwrap().scale_q(&k).add(&star_mul(&b, &c, &z).unwrap());
            assert_eq!(lin, expected);
            assert_eq!(reduce(&ab, &z), ab);
        }
    }
}
