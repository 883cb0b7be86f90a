//! Roots of `Z_μ` at a point, i.e. the eigenvalues of the numeric companion matrix.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mu_ring::MonicZ;
use crate::numeric::eval_rf;

const MAX_ITER: usize = 200;
const RESIDUAL_TOL: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-8;
const MERGE_TOL: f64 = 1e-4;
const DERIVATIVE_TOL: f64 = 1e-9;
/// Imaginary parts below this count as real.
pub const REAL_TOL: f64 = 1e-10;

/// Distinct roots with their multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumAtPoint {
    pub point: Vec<f64>,
    pub eigenvalues: Vec<(Complex64, usize)>,
    /// False when two distinct roots sit close enough that the multiplicity
    /// pattern cannot be trusted.
    pub jordan_ok: bool,
}

impl SpectrumAtPoint {
    pub fn is_real(&self) -> bool {
        self.eigenvalues.iter().all(|(l, _)| l.im.abs() < REAL_TOL)
    }

    /// Multiplicities in descending order.
    pub fn pattern(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.eigenvalues.iter().map(|e| e.1).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        p
    }

    /// Smallest distance between distinct roots, `∞` when there is only one.
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (i, (a, _)) in self.eigenvalues.iter().enumerate() {
            for (b, _) in &self.eigenvalues[i + 1..] {
                gap = gap.min((a - b).norm());
            }
        }
        gap
    }

    pub fn simple(&self) -> bool {
        self.eigenvalues.iter().all(|e| e.1 == 1)
    }
}

/// `t^m + Σ lower[i] tⁱ` and its first `d` derivatives divided by `j!`.
pub(crate) fn taylor_at(lower: &[f64], t: Complex64, d: usize) -> Vec<Complex64> {
    let m = lower.len();
    let mut coeffs: Vec<Complex64> = lower.iter().map(|&c| Complex64::new(c, 0.0)).collect();
    coeffs.push(Complex64::new(1.0, 0.0));
    let mut out = Vec::with_capacity(d + 1);
    for _ in 0..=d.min(m) {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * t + c;
        }
        out.push(acc);
        // synthetic division by (x - t)
        let mut next = Vec::with_capacity(coeffs.len().saturating_sub(1));
        let mut carry = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev().take(coeffs.len().saturating_sub(1)) {
            carry = carry * t + c;
            next.push(carry);
        }
        next.reverse();
        coeffs = next;
    }
    out.resize(d + 1, Complex64::new(0.0, 0.0));
    out
}

fn scale(lambda: Complex64, m: usize) -> f64 {
    (1.0 + lambda.norm()).powi(m as i32)
}

/// All `m` roots of the monic polynomial with lower coefficients `lower`
/// by Aberth–Ehrlich iteration.
pub fn aberth(lower: &[f64]) -> Result<Vec<Complex64>> {
    let m = lower.len();
    if lower.iter().any(|c| !c.is_finite()) {
        return Err(Error::PoleAtPoint);
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    if m == 1 {
        return Ok(vec![Complex64::new(-lower[0], 0.0)]);
    }
    let bound = 1.0 + lower.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let radius = lower
        .iter()
        .enumerate()
        .fold(0.0f64, |a, (i, c)| a.max(c.abs().powf(1.0 / (m - i) as f64)))
        .clamp(1e-3, bound);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64 + 0.4))
        .collect();
    for _ in 0..MAX_ITER {
        let mut moved = 0.0f64;
        for k in 0..m {
            let t = taylor_at(lower, z[k], 1);
            if t[0].norm() == 0.0 {
                continue;
            }
            let ratio = t[0] / t[1];
            let sum: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() == 0.0 || !t[1].is_finite() || t[1].norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                ratio / denom
            };
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for r in &z {
        if !r.is_finite() || taylor_at(lower, *r, 0)[0].norm() > RESIDUAL_TOL * scale(*r, m) {
            return Err(Error::RootsNotConverged);
        }
    }
    Ok(z)
}

/// Groups roots into clusters and returns `(mean, size)` pairs, together with
/// whether every near-collision was resolved.
pub fn cluster_roots(lower: &[f64], roots: &[Complex64]) -> (Vec<(Complex64, usize)>, bool) {
    let m = lower.len();
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &r in roots {
        match groups
            .iter_mut()
            .find(|g| g.iter().any(|s| (s - r).norm() < CLUSTER_TOL * (1.0 + r.norm())))
        {
            Some(g) => g.push(r),
            None => groups.push(vec![r]),
        }
    }
    let mean = |g: &[Complex64]| g.iter().sum::<Complex64>() / g.len() as f64;
    let mut ok = true;
    loop {
        let mut merged = false;
        'outer: for i in 0..groups.len() {
            for j in i + 1..groups.len() {
                let (a, b) = (mean(&groups[i]), mean(&groups[j]));
                if (a - b).norm() >= MERGE_TOL * (1.0 + a.norm()) {
                    continue;
                }
                let mut g = groups[i].clone();
                g.extend_from_slice(&groups[j]);
                let c = mean(&g);
                let t = taylor_at(lower, c, g.len() - 1);
                if t.iter().all(|v| v.norm() <= DERIVATIVE_TOL * scale(c, m)) {
                    groups[i] = g;
                    groups.remove(j);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups.iter().map(|g| (refine(lower, mean(g), g.len()), g.len())).collect();
    for (i, (a, _)) in out.iter().enumerate() {
        for (b, _) in &out[i + 1..] {
            if (a - b).norm() < MERGE_TOL * (1.0 + a.norm()) {
                ok = false;
            }
        }
    }
    for (l, _) in out.iter_mut() {
        if l.im.abs() < REAL_TOL {
            l.im = 0.0;
        }
    }
    out.sort_by(|a, b| {
        a.0.re
            .partial_cmp(&b.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.im.partial_cmp(&b.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    (out, ok)
}

/// Newton on the `(k−1)`-th derivative, which has a simple root at a root of multiplicity `k`.
fn refine(lower: &[f64], mut c: Complex64, k: usize) -> Complex64 {
    if k < 2 {
        return c;
    }
    for _ in 0..8 {
        let t = taylor_at(lower, c, k);
        let d = t[k] * k as f64;
        if d.norm() == 0.0 {
            break;
        }
        let step = t[k - 1] / d;
        if !step.is_finite() {
            break;
        }
        c -= step;
        if step.norm() <= 1e-16 * (1.0 + c.norm()) {
            break;
        }
    }
    c
}

/// Spectrum of a monic polynomial given by its lower coefficients.
pub fn spectrum_of(lower: &[f64], point: &[f64]) -> Result<SpectrumAtPoint> {
    let roots = aberth(lower)?;
    let (eigenvalues, jordan_ok) = cluster_roots(lower, &roots);
    Ok(SpectrumAtPoint {
        point: point.to_vec(),
        eigenvalues,
        jordan_ok,
    })
}

/// Evaluates `Z` at a point.
pub fn z_at_point(z: &MonicZ, point: &[f64]) -> Result<Vec<f64>> {
    if point.len() != z.vars().len() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, Z uses {}",
            point.len(),
            z.vars().len()
        )));
    }
    z.lower().iter().map(|c| eval_rf(c, point)).collect()
}

pub fn roots_at_point(z: &MonicZ, point: &[f64]) -> Result<SpectrumAtPoint> {
    spectrum_of(&z_at_point(z, point)?, point)
}
