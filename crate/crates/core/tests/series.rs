mod common;

use common::q;
use num_traits::ToPrimitive;

use starmul_core::catalog::generic_221;
use starmul_core::mu_ring::{star_pow, MuPoly};
use starmul_core::numeric::{linspace, NumericSystem};
use starmul_core::series::{
    partial_sum_gaps, series_eval_lower, sum_direct, verify_series_solution_numeric, ConvergenceMode, SeriesSpec,
};
use starmul_core::Error;

fn grid(xs: &[f64], ys: &[f64]) -> Vec<Vec<f64>> {
    xs.iter().flat_map(|&x| ys.iter().map(move |&y| vec![x, y])).collect()
}

#[test]
fn exp_with_distinct_roots_matches_closed_form() {
    for p in grid(&linspace(-1.0, 1.0, 10), &linspace(1.5, 3.0, 10)) {
        let (a, b) = (p[0], p[1]);
        // Z = (μ − a)(μ − b)
        let lower = [a * b, -(a + b)];
        let v = series_eval_lower(&SeriesSpec::exp(), &lower, &p, 1e-9, ConvergenceMode::Strict).unwrap();
        let p1 = (a.exp() - b.exp()) / (a - b);
        let p0 = (a * b.exp() - b * a.exp()) / (a - b);
        assert!((v.values[0] - p0).abs() < 1e-10 * (1.0 + p0.abs()), "{p:?}");
        assert!((v.values[1] - p1).abs() < 1e-10 * (1.0 + p1.abs()), "{p:?}");
        assert!(v.routes_agree());
    }
}

#[test]
fn exp_with_repeated_root_matches_closed_form() {
    for a in linspace(-2.0, 2.0, 100) {
        let lower = [a * a, -2.0 * a];
        let v = series_eval_lower(&SeriesSpec::exp(), &lower, &[a], 1e-9, ConvergenceMode::Strict).unwrap();
        assert_eq!(v.spectrum.pattern(), vec![2]);
        let e = a.exp();
        assert!((v.values[0] - e * (1.0 - a)).abs() < 1e-10 * (1.0 + e), "{a}");
        assert!((v.values[1] - e).abs() < 1e-10 * (1.0 + e), "{a}");
    }
}

#[test]
fn exact_partial_sums_agree_with_numeric_summation() {
    let s = generic_221().unwrap();
    let spec = SeriesSpec::exp();
    let mu = s.mu();
    for (px, py) in [(q(1, 5), q(9, 10)), (q(1, 2), q(-3, 2)), (q(3, 10), q(2, 1))] {
        let pt = [px.clone(), py.clone()];
        let lower = [px.to_f64().unwrap(), py.to_f64().unwrap()];
        for n in [3usize, 8, 15] {
            let mut exact = MuPoly::zero(s.vars());
            for r in 0..=n {
                exact = exact.add(&star_pow(&mu, r as i64, s.z()).unwrap().scale_q(&spec.coeff(r)));
            }
            let (num, _) = sum_direct(&spec.truncated(n), &lower).unwrap();
            for i in 0..2 {
                let e = exact.coeff(i).eval(&pt).unwrap().to_f64().unwrap();
                assert!((e - num[i]).abs() < 1e-12, "n = {n}, entry {i}: {e} vs {}", num[i]);
            }
        }
    }
}

#[test]
fn partial_sums_approach_the_limit() {
    let gaps = partial_sum_gaps(&SeriesSpec::exp(), &[0.3, 1.2], &[5, 10, 20]).unwrap();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    assert!(gaps[2] < 1e-12);
}

#[test]
fn exp_series_solves_generic_221_on_a_grid() {
    let ns = NumericSystem::from_spec(&generic_221().unwrap());
    let pts = grid(&linspace(0.1, 0.2, 10), &linspace(1.0, 2.0, 10));
    let r = verify_series_solution_numeric(&SeriesSpec::exp(), &ns, &pts, 1e-9, ConvergenceMode::Strict, 1e-6)
        .unwrap();
    assert_eq!(r.points, 100);
    assert_eq!(r.pattern, vec![1, 1]);
    assert!(r.passes(), "worst residual {:e}", r.worst_residual);
}

#[test]
fn grid_across_a_root_collision_is_rejected() {
    let ns = NumericSystem::from_spec(&generic_221().unwrap());
    // y² = 4x at the first point, distinct real roots at the second
    let pts = vec![vec![0.25, 1.0], vec![0.2, 1.0]];
    let err = verify_series_solution_numeric(&SeriesSpec::exp(), &ns, &pts, 1e-9, ConvergenceMode::Relaxed, 1e-6)
        .unwrap_err();
    assert_eq!(err, Error::JordanStructureChanged);
}

#[test]
fn geometric_series_outside_radius_is_refused() {
    let spec = SeriesSpec::geometric(q(1, 1));
    let err = series_eval_lower(&spec, &[6.0, -5.0], &[], 1e-9, ConvergenceMode::Strict).unwrap_err();
    assert_eq!(err, Error::OutsideConvergence);
    let ok = series_eval_lower(&spec, &[0.06, -0.5], &[], 1e-9, ConvergenceMode::Strict).unwrap();
    // (I − C)⁻¹e₁ for roots 0.2, 0.3: Hermite interpolant of 1/(1 − t)
    let (a, b) = (0.2f64, 0.3f64);
    let p1 = (1.0 / (1.0 - a) - 1.0 / (1.0 - b)) / (a - b);
    let p0 = 1.0 / (1.0 - a) - p1 * a;
    assert!((ok.values[0] - p0).abs() < 1e-12 && (ok.values[1] - p1).abs() < 1e-12);
}
