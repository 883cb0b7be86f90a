//! Floating-point evaluation of systems at points and finite-difference residuals.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::system::SystemSpec;

/// `Z` coefficients and `A` matrices evaluated at one point.
#[derive(Clone, Debug)]
pub struct PointData {
    pub z: Vec<f64>,
    pub a: Vec<Vec<Vec<f64>>>,
}

type Evaluator = dyn Fn(&[f64]) -> Result<PointData> + Send + Sync;
/// A candidate solution evaluated at a point.
pub type NumericCandidate = dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync;

/// A system known only through point evaluation.
#[derive(Clone)]
pub struct NumericSystem {
    pub n: usize,
    pub m: usize,
    eval: Arc<Evaluator>,
}

impl NumericSystem {
    pub fn new(
        n: usize,
        m: usize,
        eval: impl Fn(&[f64]) -> Result<PointData> + Send + Sync + 'static,
    ) -> Self {
        NumericSystem {
            n,
            m,
            eval: Arc::new(eval),
        }
    }

    pub fn from_spec(sys: &SystemSpec) -> Self {
        let s = sys.clone();
        NumericSystem::new(sys.n(), sys.m(), move |p| point_data(&s, p))
    }

    pub fn at(&self, point: &[f64]) -> Result<PointData> {
        (self.eval)(point)
    }
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::PoleAtPoint)
    }
}

/// Evaluates `Z` and `A` of an exact system, failing on a pole.
pub fn point_data(sys: &SystemSpec, point: &[f64]) -> Result<PointData> {
    if point.len() != sys.n() {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, system has {}",
            point.len(),
            sys.n()
        )));
    }
    let z = sys
        .z()
        .lower()
        .iter()
        .map(|c| eval_rf(c, point))
        .collect::<Result<Vec<f64>>>()?;
    let n = sys.n();
    let a = sys
        .a()
        .mats()
        .iter()
        .map(|m| {
            (0..n)
                .map(|i| (0..n).map(|j| eval_rf(m.get(i, j), point)).collect())
                .collect()
        })
        .collect::<Result<Vec<Vec<Vec<f64>>>>>()?;
    Ok(PointData { z, a })
}

pub fn eval_rf(f: &crate::algebra::RationalFunction, point: &[f64]) -> Result<f64> {
    let d = f.denom().eval_f64(point);
    if d == 0.0 || !d.is_finite() {
        return Err(Error::PoleAtPoint);
    }
    finite(f.numer().eval_f64(point) / d)
}

/// `C · u` for the companion matrix with lower coefficients `z`.
pub fn companion_apply(z: &[f64], u: &[f64]) -> Vec<f64> {
    let m = z.len();
    let last = u[m - 1];
    (0..m)
        .map(|j| if j == 0 { -z[0] * last } else { u[j - 1] - z[j] * last })
        .collect()
}

/// `Σᵢ Cⁱ V′ Aᵢ` with `V′[j][c] = ∂_c V_j`.
pub fn residual_matrix(data: &PointData, vprime: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = data.z.len();
    let n = vprime.first().map_or(0, Vec::len);
    let times = |a: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        vprime
            .iter()
            .map(|row| (0..n).map(|b| (0..n).map(|c| row[c] * a[c][b]).sum()).collect())
            .collect()
    };
    let k = data.a.len() - 1;
    let mut acc = times(&data.a[k]);
    for i in (0..k).rev() {
        let add = times(&data.a[i]);
        let mut next = vec![vec![0.0; n]; m];
        for b in 0..n {
            let col: Vec<f64> = acc.iter().map(|r| r[b]).collect();
            let cc = companion_apply(&data.z, &col);
            for a in 0..m {
                next[a][b] = cc[a] + add[a][b];
            }
        }
        acc = next;
    }
    acc
}

/// Central-difference Jacobian `V′` with step `h_c = h_rel · max(1, |q_c|)`.
pub fn fd_jacobian(v: &NumericCandidate, point: &[f64], h_rel: f64) -> Result<Vec<Vec<f64>>> {
    let n = point.len();
    let base = v(point)?;
    let m = base.len();
    let mut jac = vec![vec![0.0; n]; m];
    let mut p = point.to_vec();
    for c in 0..n {
        let h = h_rel * point[c].abs().max(1.0);
        p[c] = point[c] + h;
        let up = v(&p)?;
        p[c] = point[c] - h;
        let down = v(&p)?;
        p[c] = point[c];
        for j in 0..m {
            jac[j][c] = (up[j] - down[j]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Worst residual over a sample of points.
#[derive(Clone, Debug, PartialEq)]
pub struct GridReport {
    pub points: usize,
    pub worst_point: Vec<f64>,
    pub worst_residual: f64,
}

/// Max-norm finite-difference residual at every point, evaluated in parallel.
pub fn grid_residuals(
    sys: &NumericSystem,
    v: &NumericCandidate,
    points: &[Vec<f64>],
    h_rel: f64,
) -> Result<GridReport> {
    let res: Vec<(usize, f64)> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let data = sys.at(p)?;
            let jac = fd_jacobian(v, p, h_rel)?;
            let r = residual_matrix(&data, &jac);
            let worst = r.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
            Ok((i, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let (wi, wr) = res
        .into_iter()
        .fold((0, 0.0f64), |acc, (i, r)| if r > acc.1 || r.is_nan() { (i, r) } else { acc });
    Ok(GridReport {
        points: points.len(),
        worst_point: points.get(wi).cloned().unwrap_or_default(),
        worst_residual: wr,
    })
}

/// `lo..=hi` in `count` equal steps.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RationalFunction as Rf, RfMatrix, Vars};
    use crate::mu_ring::MonicZ;
    use crate::system::TensorPoly;

    #[test]
    fn cauchy_riemann_numeric() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let one = Rf::one(&v);
        let zero = Rf::zero(&v);
        let z = MonicZ::new(&v, vec![one.clone(), zero.clone()]).unwrap();
        let a0 = RfMatrix::from_rows(&v, vec![vec![zero.clone(), one.clone()], vec![one.neg(), zero]])
            .unwrap();
        let s = SystemSpec::new("cr", &v, z, TensorPoly::new(vec![a0, RfMatrix::identity(&v, 2)]).unwrap())
            .unwrap();
        let ns = NumericSystem::from_spec(&s);
        let holo = |p: &[f64]| Ok(vec![p[0].exp() * p[1].cos(), p[0].exp() * p[1].sin()]);
        let anti = |p: &[f64]| Ok(vec![p[0], -p[1]]);
        let pts: Vec<Vec<f64>> = linspace(-1.0, 1.0, 5).into_iter().map(|t| vec![t, 0.5 * t]).collect();
        assert!(grid_residuals(&ns, &holo, &pts, 1e-6).unwrap().worst_residual < 1e-6);
        assert!(grid_residuals(&ns, &anti, &pts, 1e-6).unwrap().worst_residual > 0.5);
    }
}
