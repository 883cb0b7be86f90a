//! Power series `Σ aᵣ μ^r_* = Σ aᵣ Cʳe₁` evaluated numerically at points.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Rational, RationalFunction as Rf};
use crate::error::{Error, Result};
use crate::mu_ring::MonicZ;
use crate::numeric::{companion_apply, grid_residuals, NumericSystem};
use crate::roots::{spectrum_of, z_at_point, SpectrumAtPoint};

const MAX_TERMS: usize = 10_000;
const TERM_TOL: f64 = 1e-14;
const SMALL_RUN: usize = 5;
/// Route agreement tolerance and the gap above which it is checked.
pub const ROUTE_TOL: f64 = 1e-9;
pub const ROUTE_GAP: f64 = 1e-6;

/// Coefficient rule of a series.
#[derive(Clone, Debug, PartialEq)]
pub enum SeriesKind {
    Exp,
    Sin,
    Cos,
    /// `aᵣ = ρʳ`.
    Geometric(Rational),
    /// Finitely many coefficients, zero afterwards.
    Explicit(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    kind: SeriesKind,
}

impl SeriesSpec {
    pub fn new(kind: SeriesKind) -> Self {
        SeriesSpec { kind }
    }

    pub fn exp() -> Self {
        Self::new(SeriesKind::Exp)
    }

    pub fn sin() -> Self {
        Self::new(SeriesKind::Sin)
    }

    pub fn cos() -> Self {
        Self::new(SeriesKind::Cos)
    }

    pub fn geometric(ratio: Rational) -> Self {
        Self::new(SeriesKind::Geometric(ratio))
    }

    pub fn explicit(coeffs: Vec<Rational>) -> Self {
        Self::new(SeriesKind::Explicit(coeffs))
    }

    pub fn kind(&self) -> &SeriesKind {
        &self.kind
    }

    /// Radius of convergence, possibly infinite.
    pub fn radius(&self) -> f64 {
        match &self.kind {
            SeriesKind::Geometric(r) if !r.is_zero() => 1.0 / r.abs().to_f64().unwrap_or(f64::NAN),
            _ => f64::INFINITY,
        }
    }

    /// Exact coefficient `aᵣ`.
    pub fn coeff(&self, r: usize) -> Rational {
        let fact = || (1..=r).fold(BigInt::one(), |a, k| a * BigInt::from(k));
        let inv_fact = |sign: i64| Rational::new(BigInt::from(sign), fact());
        match &self.kind {
            SeriesKind::Exp => inv_fact(1),
            SeriesKind::Sin if r % 2 == 1 => inv_fact(if r % 4 == 1 { 1 } else { -1 }),
            SeriesKind::Cos if r % 2 == 0 => inv_fact(if r % 4 == 0 { 1 } else { -1 }),
            SeriesKind::Sin | SeriesKind::Cos => Rational::zero(),
            SeriesKind::Geometric(q) => num_traits::pow(q.clone(), r),
            SeriesKind::Explicit(c) => c.get(r).cloned().unwrap_or_else(Rational::zero),
        }
    }

    /// The first `n + 1` coefficients as an explicit series.
    pub fn truncated(&self, n: usize) -> SeriesSpec {
        SeriesSpec::explicit((0..=n).map(|r| self.coeff(r)).collect())
    }

    fn min_terms(&self) -> usize {
        match &self.kind {
            SeriesKind::Explicit(c) => c.len(),
            _ => 0,
        }
    }

    /// `f⁽ʲ⁾(λ)/j!` for `j < count`, where `f(t) = Σ aᵣ tʳ`.
    pub fn taylor_coefficients(&self, lambda: Complex64, count: usize) -> Vec<Complex64> {
        let fact = |j: usize| (1..=j).fold(1.0, |a, k| a * k as f64);
        match &self.kind {
            SeriesKind::Exp => (0..count).map(|j| lambda.exp() / fact(j)).collect(),
            SeriesKind::Sin | SeriesKind::Cos => {
                let (s, c) = (lambda.sin(), lambda.cos());
                let base = if matches!(self.kind, SeriesKind::Sin) { 0 } else { 1 };
                (0..count)
                    .map(|j| {
                        let v = match (base + j) % 4 {
                            0 => s,
                            1 => c,
                            2 => -s,
                            _ => -c,
                        };
                        v / fact(j)
                    })
                    .collect()
            }
            SeriesKind::Geometric(q) => {
                let rho = q.to_f64().unwrap_or(f64::NAN);
                let base = (Complex64::new(1.0, 0.0) - lambda * rho).inv();
                (0..count).map(|j| base * (base * rho).powu(j as u32)).collect()
            }
            SeriesKind::Explicit(c) => {
                let a: Vec<f64> = c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
                (0..count)
                    .map(|j| {
                        a.iter()
                            .enumerate()
                            .map(|(r, ar)| *ar * jordan_block_power_entry(lambda, count, r, 1, j + 1))
                            .sum()
                    })
                    .collect()
            }
        }
    }
}

impl std::fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            SeriesKind::Exp => write!(f, "exp"),
            SeriesKind::Sin => write!(f, "sin"),
            SeriesKind::Cos => write!(f, "cos"),
            SeriesKind::Geometric(q) => write!(f, "geometric({q})"),
            SeriesKind::Explicit(c) => {
                let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                write!(f, "explicit[{}]", parts.join(", "))
            }
        }
    }
}

fn binom_f64(r: usize, k: usize) -> f64 {
    if k > r {
        return 0.0;
    }
    let k = k.min(r - k);
    (0..k).fold(1.0, |a, i| a * (r - i) as f64 / (i + 1) as f64)
}

fn binom_exact(r: usize, k: usize) -> BigInt {
    if k > r {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |a, i| a * BigInt::from(r - i) / BigInt::from(i + 1))
}

/// Entry `(i, j)` (1-based) of `Jʳ` for a Jordan block of the given size:
/// `C(r, j−i) λ^{r+i−j}`.
pub fn jordan_block_power_entry(lambda: Complex64, size: usize, r: usize, i: usize, j: usize) -> Complex64 {
    assert!(1 <= i && i <= size && 1 <= j && j <= size, "index outside the block");
    if j < i || j - i > r {
        return Complex64::new(0.0, 0.0);
    }
    lambda.powu((r + i - j) as u32) * binom_f64(r, j - i)
}

/// Exact form of [`jordan_block_power_entry`] with `λ` a rational function.
pub fn jordan_block_power_entry_exact(lambda: &Rf, size: usize, r: usize, i: usize, j: usize) -> Rf {
    assert!(1 <= i && i <= size && 1 <= j && j <= size, "index outside the block");
    if j < i || j - i > r {
        return Rf::zero(lambda.vars());
    }
    lambda
        .pow((r + i - j) as u32)
        .scale(&Rational::from_integer(binom_exact(r, j - i)))
}

/// Strict mode demands real roots; relaxed mode accepts complex roots in the disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceMode {
    Strict,
    Relaxed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceVerdict {
    pub passes: bool,
    /// Set when the verdict relies on complex roots accepted in relaxed mode.
    pub unproved_regime: bool,
    pub reason: Option<String>,
}

pub fn convergence_check_spectrum(
    spec: &SeriesSpec,
    spectrum: &SpectrumAtPoint,
    epsilon: f64,
    mode: ConvergenceMode,
) -> ConvergenceVerdict {
    let radius = spec.radius();
    let real = spectrum.is_real();
    if !real && mode == ConvergenceMode::Strict {
        return ConvergenceVerdict {
            passes: false,
            unproved_regime: false,
            reason: Some("complex eigenvalue in strict mode".into()),
        };
    }
    if radius.is_finite() {
        if let Some((l, _)) = spectrum
            .eigenvalues
            .iter()
            .find(|(l, _)| l.norm() > radius - epsilon)
        {
            return ConvergenceVerdict {
                passes: false,
                unproved_regime: false,
                reason: Some(format!("eigenvalue {l} outside [-R+eps, R-eps] with R = {radius}")),
            };
        }
    }
    ConvergenceVerdict {
        passes: true,
        unproved_regime: !real,
        reason: None,
    }
}

pub fn convergence_check(
    spec: &SeriesSpec,
    z: &MonicZ,
    point: &[f64],
    epsilon: f64,
    mode: ConvergenceMode,
) -> Result<ConvergenceVerdict> {
    let s = crate::roots::roots_at_point(z, point)?;
    Ok(convergence_check_spectrum(spec, &s, epsilon, mode))
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

/// Direct summation of `Σ aᵣCʳe₁` for the companion matrix of `lower`.
/// Returns the sum and the number of terms used.
pub fn sum_direct(spec: &SeriesSpec, lower: &[f64]) -> Result<(Vec<f64>, usize)> {
    let m = lower.len();
    let mut w = vec![0.0; m];
    w[0] = 1.0;
    let mut sum = vec![0.0; m];
    // w holds Cʳe₁ scaled by the smooth part of the coefficient
    let (ratio, sign): (Box<dyn Fn(usize) -> f64>, Box<dyn Fn(usize) -> f64>) = match spec.kind() {
        SeriesKind::Exp => (Box::new(|r| 1.0 / r as f64), Box::new(|_| 1.0)),
        SeriesKind::Sin => (
            Box::new(|r| 1.0 / r as f64),
            Box::new(|r| [0.0, 1.0, 0.0, -1.0][r % 4]),
        ),
        SeriesKind::Cos => (
            Box::new(|r| 1.0 / r as f64),
            Box::new(|r| [1.0, 0.0, -1.0, 0.0][r % 4]),
        ),
        SeriesKind::Geometric(q) => {
            let rho = q.to_f64().unwrap_or(f64::NAN);
            (Box::new(move |_| rho), Box::new(|_| 1.0))
        }
        SeriesKind::Explicit(c) => {
            let a: Vec<f64> = c.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
            (Box::new(|_| 1.0), Box::new(move |r| a.get(r).copied().unwrap_or(0.0)))
        }
    };
    let min_terms = spec.min_terms();
    let mut small = 0;
    for r in 0..MAX_TERMS {
        if r > 0 {
            let f = ratio(r);
            w = companion_apply(lower, &w).into_iter().map(|v| v * f).collect();
        }
        let s = sign(r);
        let mut term_norm = 0.0f64;
        if s != 0.0 {
            for (acc, wi) in sum.iter_mut().zip(&w) {
                *acc += s * wi;
                term_norm = term_norm.max((s * wi).abs());
            }
        }
        if !term_norm.is_finite() || sum.iter().any(|v| !v.is_finite()) {
            return Err(Error::SlowConvergence);
        }
        if term_norm < TERM_TOL * (1.0 + max_norm(&sum)) {
            small += 1;
            if small >= SMALL_RUN && r + 1 >= min_terms {
                return Ok((sum, r + 1));
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SlowConvergence)
}

/// Solves the confluent Vandermonde system: returns `p₀…p_{m−1}` with
/// `p⁽ʲ⁾(λ)/j! = data[s][j]` for every root `λ_s` of multiplicity `k_s`.
pub fn hermite_interpolate(eigen: &[(Complex64, usize)], data: &[Vec<Complex64>]) -> Result<Vec<Complex64>> {
    let m: usize = eigen.iter().map(|e| e.1).sum();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); m + 1]; m];
    let mut row = 0;
    for ((l, k), d) in eigen.iter().zip(data) {
        for j in 0..*k {
            for i in j..m {
                a[row][i] = l.powu((i - j) as u32) * binom_f64(i, j);
            }
            a[row][m] = d[j];
            row += 1;
        }
    }
    for c in 0..m {
        let p = (c..m)
            .max_by(|&x, &y| a[x][c].norm().partial_cmp(&a[y][c].norm()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        if a[p][c].norm() == 0.0 {
            return Err(Error::Singular);
        }
        a.swap(c, p);
        for r in c + 1..m {
            let f = a[r][c] / a[c][c];
            for k in c..=m {
                let t = a[c][k];
                a[r][k] -= f * t;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for c in (0..m).rev() {
        let s: Complex64 = (c + 1..m).map(|k| a[c][k] * x[k]).sum();
        x[c] = (a[c][m] - s) / a[c][c];
    }
    Ok(x)
}

/// `f(C)e₁` through the spectrum: the Hermite interpolant of `f` on the roots.
pub fn sum_spectral(spec: &SeriesSpec, spectrum: &SpectrumAtPoint) -> Result<Vec<f64>> {
    let data: Vec<Vec<Complex64>> = spectrum
        .eigenvalues
        .iter()
        .map(|(l, k)| spec.taylor_coefficients(*l, *k))
        .collect();
    Ok(hermite_interpolate(&spectrum.eigenvalues, &data)?
        .into_iter()
        .map(|c| c.re)
        .collect())
}

/// Result of [`series_eval`].
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesValue {
    pub values: Vec<f64>,
    pub terms: usize,
    pub spectrum: SpectrumAtPoint,
    pub verdict: ConvergenceVerdict,
    /// Spectral-route value when the roots are well separated.
    pub spectral: Option<Vec<f64>>,
    /// Max difference between the two routes, relative to `1 + ‖P‖`.
    pub route_difference: Option<f64>,
}

impl SeriesValue {
    pub fn routes_agree(&self) -> bool {
        self.route_difference.map_or(true, |d| d <= ROUTE_TOL)
    }
}

/// Evaluates the series for the companion matrix with lower coefficients `lower`.
pub fn series_eval_lower(
    spec: &SeriesSpec,
    lower: &[f64],
    point: &[f64],
    epsilon: f64,
    mode: ConvergenceMode,
) -> Result<SeriesValue> {
    let spectrum = spectrum_of(lower, point)?;
    let verdict = convergence_check_spectrum(spec, &spectrum, epsilon, mode);
    if !verdict.passes {
        return Err(Error::OutsideConvergence);
    }
    let (values, terms) = sum_direct(spec, lower)?;
    let (spectral, route_difference) = if spectrum.simple() && spectrum.min_gap() > ROUTE_GAP && spectrum.jordan_ok {
        let sp = sum_spectral(spec, &spectrum)?;
        let diff = values
            .iter()
            .zip(&sp)
            .fold(0.0f64, |a, (u, v)| a.max((u - v).abs()))
            / (1.0 + max_norm(&values));
        (Some(sp), Some(diff))
    } else {
        (None, None)
    };
    Ok(SeriesValue {
        values,
        terms,
        spectrum,
        verdict,
        spectral,
        route_difference,
    })
}

pub fn series_eval(
    spec: &SeriesSpec,
    z: &MonicZ,
    point: &[f64],
    epsilon: f64,
    mode: ConvergenceMode,
) -> Result<SeriesValue> {
    series_eval_lower(spec, &z_at_point(z, point)?, point, epsilon, mode)
}

/// `‖P − P_N‖` for each `N`, where `P_N` is the partial sum up to `aₙ`.
pub fn partial_sum_gaps(spec: &SeriesSpec, lower: &[f64], ns: &[usize]) -> Result<Vec<f64>> {
    let (full, _) = sum_direct(spec, lower)?;
    ns.iter()
        .map(|&n| {
            let (p, _) = sum_direct(&spec.truncated(n), lower)?;
            Ok(full
                .iter()
                .zip(&p)
                .fold(0.0f64, |a, (u, v)| a.max((u - v).abs())))
        })
        .collect()
}

/// Numeric `V * W` at a point, through values and derivatives at the roots.
pub fn numeric_star_mul(v: &[f64], w: &[f64], spectrum: &SpectrumAtPoint) -> Result<Vec<f64>> {
    let taylor = |p: &[f64], l: Complex64, k: usize| -> Vec<Complex64> {
        (0..k)
            .map(|j| {
                p.iter()
                    .enumerate()
                    .skip(j)
                    .map(|(i, c)| l.powu((i - j) as u32) * (*c * binom_f64(i, j)))
                    .sum()
            })
            .collect()
    };
    let data: Vec<Vec<Complex64>> = spectrum
        .eigenvalues
        .iter()
        .map(|(l, k)| {
            let (a, b) = (taylor(v, *l, *k), taylor(w, *l, *k));
            (0..*k)
                .map(|j| (0..=j).map(|i| a[i] * b[j - i]).sum())
                .collect()
        })
        .collect();
    Ok(hermite_interpolate(&spectrum.eigenvalues, &data)?
        .into_iter()
        .map(|c| c.re)
        .collect())
}

/// Outcome of checking a series solution on a sample of points.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesGridReport {
    pub points: usize,
    pub worst_point: Vec<f64>,
    pub worst_residual: f64,
    pub tolerance: f64,
    pub pattern: Vec<usize>,
    pub unproved_regime: bool,
}

impl SeriesGridReport {
    pub fn passes(&self) -> bool {
        self.worst_residual < self.tolerance
    }
}

/// Finite-difference residuals of the series solution over `sample`.
pub fn verify_series_solution_numeric(
    spec: &SeriesSpec,
    sys: &NumericSystem,
    sample: &[Vec<f64>],
    epsilon: f64,
    mode: ConvergenceMode,
    tolerance: f64,
) -> Result<SeriesGridReport> {
    let mut pattern: Option<Vec<usize>> = None;
    let mut unproved = false;
    for p in sample {
        let data = sys.at(p)?;
        let s = spectrum_of(&data.z, p)?;
        match &pattern {
            None => pattern = Some(s.pattern()),
            Some(q) if *q != s.pattern() || !s.jordan_ok => return Err(Error::JordanStructureChanged),
            Some(_) => {}
        }
        if !s.jordan_ok {
            return Err(Error::JordanStructureChanged);
        }
        let v = convergence_check_spectrum(spec, &s, epsilon, mode);
        if !v.passes {
            return Err(Error::OutsideConvergence);
        }
        unproved |= v.unproved_regime;
    }
    let inner = sys.clone();
    let spec2 = spec.clone();
    let candidate = move |q: &[f64]| -> Result<Vec<f64>> {
        let d = inner.at(q)?;
        Ok(sum_direct(&spec2, &d.z)?.0)
    };
    let g = grid_residuals(sys, &candidate, sample, 1e-6)?;
    Ok(SeriesGridReport {
        points: g.points,
        worst_point: g.worst_point,
        worst_residual: g.worst_residual,
        tolerance,
        pattern: pattern.unwrap_or_default(),
        unproved_regime: unproved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RfMatrix, Vars};
    use crate::dsl::parse_mupoly;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn jordan_entries() {
        let l = c(0.7);
        assert!((jordan_block_power_entry(l, 1, 5, 1, 1) - l.powu(5)).norm() < 1e-15);
        assert!((jordan_block_power_entry(l, 2, 3, 1, 2) - l.powu(2) * 3.0).norm() < 1e-15);
        assert_eq!(jordan_block_power_entry(l, 3, 1, 1, 3), c(0.0));
        assert_eq!(jordan_block_power_entry(l, 3, 3, 2, 1), c(0.0));
    }

    #[test]
    fn jordan_entries_exact_against_matrix_power() {
        let v = Vars::new(&["l"]).unwrap();
        let l = Rf::var(&v, 0);
        for size in 1..=4 {
            let mut j = RfMatrix::zeros(&v, size, size);
            for i in 0..size {
                j.set(i, i, l.clone());
                if i + 1 < size {
                    j.set(i, i + 1, Rf::one(&v));
                }
            }
            for r in [0usize, 1, 7, 20] {
                let p = j.pow(r as u32).unwrap();
                for a in 1..=size {
                    for b in 1..=size {
                        assert_eq!(*p.get(a - 1, b - 1), jordan_block_power_entry_exact(&l, size, r, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn exp_closed_forms() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let z = MonicZ::from_mupoly(&parse_mupoly("x*y - (x + y)*mu + mu^2", &v).unwrap()).unwrap();
        let (l1, l2) = (0.3f64, -0.8f64);
        let r = series_eval(&SeriesSpec::exp(), &z, &[l1, l2], 0.0, ConvergenceMode::Strict).unwrap();
        let e0 = (l1 * l2.exp() - l2 * l1.exp()) / (l1 - l2);
        let e1 = (l1.exp() - l2.exp()) / (l1 - l2);
        assert!((r.values[0] - e0).abs() < 1e-10 && (r.values[1] - e1).abs() < 1e-10);
        assert!(r.routes_agree());
        let l = 1.5f64;
        let r2 = series_eval(&SeriesSpec::exp(), &z, &[l, l], 0.0, ConvergenceMode::Strict).unwrap();
        assert!(r2.spectral.is_none());
        assert!((r2.values[0] - l.exp() * (1.0 - l)).abs() < 1e-10);
        assert!((r2.values[1] - l.exp()).abs() < 1e-10);
    }

    #[test]
    fn convergence_modes() {
        let v = Vars::new(&["x"]).unwrap();
        let z = MonicZ::from_mupoly(&parse_mupoly("-x + mu", &v).unwrap()).unwrap();
        let geo = SeriesSpec::geometric(Rational::from_integer(2.into()));
        assert_eq!(geo.radius(), 0.5);
        assert!(!convergence_check(&geo, &z, &[0.7], 1e-3, ConvergenceMode::Strict).unwrap().passes);
        assert!(convergence_check(&geo, &z, &[0.3], 1e-3, ConvergenceMode::Strict).unwrap().passes);
        let i = MonicZ::from_mupoly(&parse_mupoly("1 + mu^2", &v).unwrap()).unwrap();
        let exp = SeriesSpec::exp();
        assert!(!convergence_check(&exp, &i, &[0.0], 0.0, ConvergenceMode::Strict).unwrap().passes);
        let relaxed = convergence_check(&exp, &i, &[0.0], 0.0, ConvergenceMode::Relaxed).unwrap();
        assert!(relaxed.passes && relaxed.unproved_regime);
        assert_eq!(
            series_eval(&geo, &z, &[0.7], 1e-3, ConvergenceMode::Strict).unwrap_err(),
            Error::OutsideConvergence
        );
    }

    #[test]
    fn slow_convergence_is_reported() {
        let geo = SeriesSpec::geometric(Rational::from_integer(1.into()));
        assert_eq!(sum_direct(&geo, &[-0.9999]).unwrap_err(), Error::SlowConvergence);
    }

    #[test]
    fn trivial_series_is_mu() {
        let spec = SeriesSpec::explicit(vec![Rational::zero(), Rational::one()]);
        let (v, _) = sum_direct(&spec, &[0.3, -0.2, 5.0]).unwrap();
        assert_eq!(v, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn trig_identity_through_roots() {
        let lower = [0.06, 0.5];
        let s = spectrum_of(&lower, &[]).unwrap();
        let (cv, _) = sum_direct(&SeriesSpec::cos(), &lower).unwrap();
        let (sv, _) = sum_direct(&SeriesSpec::sin(), &lower).unwrap();
        let a = numeric_star_mul(&cv, &cv, &s).unwrap();
        let b = numeric_star_mul(&sv, &sv, &s).unwrap();
        assert!((a[0] + b[0] - 1.0).abs() < 1e-9 && (a[1] + b[1]).abs() < 1e-9);
    }

    #[test]
    fn partial_sums_approach_the_limit() {
        let gaps = partial_sum_gaps(&SeriesSpec::exp(), &[0.2, 0.9], &[5, 10, 20]).unwrap();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
    }
}
