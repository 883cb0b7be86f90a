#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use starmul_core::algebra::{MultiPoly, Rational, RationalFunction as Rf, Vars};
use starmul_core::mu_ring::{MonicZ, MuPoly};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn vars(n: usize) -> Vars {
    let names: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    Vars::new(&names).unwrap()
}

pub fn xy() -> Vars {
    Vars::new(&["x", "y"]).unwrap()
}

/// Sparse polynomial with at most `terms` terms of degree at most `deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, v: &Vars, terms: usize, deg: u32) -> MultiPoly {
    let n = v.len();
    let count = rng.gen_range(0..=terms);
    MultiPoly::from_terms(
        v,
        (0..count).map(|_| {
            let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=deg)).collect();
            (e, q(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
        }),
    )
}

pub fn random_rf(rng: &mut ChaCha8Rng, v: &Vars, with_denominator: bool) -> Rf {
    let num = random_poly(rng, v, 3, 2);
    if !with_denominator || rng.gen_bool(0.5) {
        return Rf::from_poly(num);
    }
    let mut den = random_poly(rng, v, 2, 1);
    den = den.add(&MultiPoly::from_int(v, 1 + rng.gen_range(0..3)));
    if den.is_zero() {
        return Rf::from_poly(num);
    }
    Rf::normalize(num, den).unwrap()
}

/// Reduced μ-polynomial with polynomial coefficients.
pub fn random_reduced(rng: &mut ChaCha8Rng, v: &Vars, m: usize) -> MuPoly {
    MuPoly::from_coeffs(v, (0..m).map(|_| Rf::from_poly(random_poly(rng, v, 2, 1))).collect())
}

pub fn random_z(rng: &mut ChaCha8Rng, v: &Vars, m: usize) -> MonicZ {
    MonicZ::new(v, (0..m).map(|_| random_rf(rng, v, false)).collect()).unwrap()
}

pub fn poly_strategy(n: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec((prop::collection::vec(0u32..3, n), -6i64..=6, 1i64..=4), 0..4)
}

pub fn poly_from(v: &Vars, raw: &[(Vec<u32>, i64, i64)]) -> MultiPoly {
    MultiPoly::from_terms(v, raw.iter().map(|(e, a, b)| (e.clone(), q(*a, *b))))
}

pub fn rf_from(v: &Vars, num: &[(Vec<u32>, i64, i64)], den: &[(Vec<u32>, i64, i64)]) -> Rf {
    let d = poly_from(v, den).add(&MultiPoly::from_int(v, 7));
    let d = if d.is_zero() { MultiPoly::one(v) } else { d };
    Rf::normalize(poly_from(v, num), d).unwrap()
}
