//! PDE systems `A_μ dV_μ ≡ 0 (mod Z_μ)`: residuals, verification and admissibility.

use std::fmt;

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::error::{Error, Result};
use crate::mu_ring::{companion, divmod_mu, CompanionMatrix, MonicZ, MuPoly, SolutionVec};

/// `A₀ + μA₁ + … + μᵏA_k` with square matrix coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPoly {
    n: usize,
    mats: Vec<RfMatrix>,
}

impl TensorPoly {
    pub fn new(mats: Vec<RfMatrix>) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::Dimension("tensor polynomial needs at least A0".into()))?;
        let n = first.rows();
        for a in &mats {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "A matrices must all be {n}x{n}, found {}x{}",
                    a.rows(),
                    a.cols()
                )));
            }
            first.vars().check_same(a.vars())?;
        }
        Ok(TensorPoly { n, mats })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn mats(&self) -> &[RfMatrix] {
        &self.mats
    }

    pub fn get(&self, i: usize) -> &RfMatrix {
        &self.mats[i]
    }

    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        TensorPoly {
            n: self.n,
            mats: self.mats.iter().map(|a| a.embed(target, map)).collect(),
        }
    }

    fn reduce(mut self, z: &MonicZ) -> Result<Self> {
        let m = z.m();
        while self.mats.len() > m {
            let d = self.mats.len() - 1;
            let lead = self.mats.pop().expect("nonempty");
            for j in 0..m {
                let t = lead.scale(z.coeff(j));
                self.mats[d - m + j] = self.mats[d - m + j].sub(&t)?;
            }
        }
        while self.mats.len() > 1 && self.mats.last().map_or(false, RfMatrix::is_zero) {
            self.mats.pop();
        }
        Ok(self)
    }
}

/// A full system instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    name: String,
    vars: Vars,
    z: MonicZ,
    a: TensorPoly,
}

impl SystemSpec {
    /// Builds a system, reducing `A_μ` modulo `Z_μ` when its degree reaches `m`.
    pub fn new(name: &str, vars: &Vars, z: MonicZ, a: TensorPoly) -> Result<Self> {
        vars.check_same(z.vars())?;
        vars.check_same(a.get(0).vars())?;
        if a.n() != vars.len() {
            return Err(Error::Dimension(format!(
                "A is {0}x{0} but there are {1} coordinates",
                a.n(),
                vars.len()
            )));
        }
        let a = a.reduce(&z)?;
        Ok(SystemSpec {
            name: name.to_string(),
            vars: vars.clone(),
            z,
            a,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn m(&self) -> usize {
        self.z.m()
    }

    pub fn k(&self) -> usize {
        self.a.k()
    }

    pub fn z(&self) -> &MonicZ {
        &self.z
    }

    pub fn a(&self) -> &TensorPoly {
        &self.a
    }

    pub fn companion(&self) -> CompanionMatrix {
        companion(&self.z)
    }

    /// `(Z₀,…,Z_{m−1})`, i.e. `Z_μ − μᵐ` as a solution candidate.
    pub fn z_vector(&self) -> SolutionVec {
        SolutionVec::new(self.z.lower().to_vec()).expect("m >= 1")
    }

    pub fn mu(&self) -> MuPoly {
        crate::mu_ring::reduce(&MuPoly::mu(&self.vars), &self.z)
    }
}

/// Rows `B₀,…,B_{m−1}` of the residual, each a covector of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualForms {
    pub rows: Vec<Vec<Rf>>,
}

/// A nonzero residual component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub form: usize,
    pub component: usize,
    pub value: Rf,
}

impl ResidualForms {
    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Rf::is_zero)
    }

    pub fn witness(&self) -> Option<Witness> {
        for (a, row) in self.rows.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    return Some(Witness {
                        form: a,
                        component: b,
                        value: v.clone(),
                    });
                }
            }
        }
        None
    }
}

impl fmt::Display for ResidualForms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(Rf::to_string).collect();
            writeln!(f, "B{a} = [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn check_candidate(sys: &SystemSpec, v: &SolutionVec) -> Result<()> {
    if v.len() != sys.m() {
        return Err(Error::Dimension(format!(
            "solution has {} entries, system has m = {}",
            v.len(),
            sys.m()
        )));
    }
    sys.vars.check_same(v.vars())
}

/// `V′`, the `m×n` matrix of partials `∂ⱼVᵢ`.
pub fn functional_matrix(v: &SolutionVec) -> Vec<Vec<Rf>> {
    let n = v.vars().len();
    v.entries()
        .iter()
        .map(|e| (0..n).map(|j| e.partial(j)).collect())
        .collect()
}

fn row_times(rows: &[Vec<Rf>], a: &RfMatrix) -> Vec<Vec<Rf>> {
    let n = a.cols();
    rows.iter()
        .map(|row| {
            (0..n)
                .map(|b| {
                    let mut acc = Rf::zero(a.vars());
                    for (c, x) in row.iter().enumerate() {
                        let e = a.get(c, b);
                        if !x.is_zero() && !e.is_zero() {
                            acc = &acc + &(x * e);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn companion_rows(z: &MonicZ, rows: &[Vec<Rf>]) -> Vec<Vec<Rf>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut out = vec![Vec::with_capacity(n); m];
    for b in 0..n {
        let col: Vec<Rf> = rows.iter().map(|r| r[b].clone()).collect();
        for (a, v) in z.companion_apply(&col).into_iter().enumerate() {
            out[a].push(v);
        }
    }
    out
}

fn add_rows(x: &[Vec<Rf>], y: &[Vec<Rf>]) -> Vec<Vec<Rf>> {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
        .collect()
}

fn matrix_route(sys: &SystemSpec, vp: &[Vec<Rf>]) -> ResidualForms {
    let k = sys.k();
    let mut acc = row_times(vp, sys.a.get(k));
    for i in (0..k).rev() {
        acc = add_rows(&companion_rows(&sys.z, &acc), &row_times(vp, sys.a.get(i)));
    }
    ResidualForms { rows: acc }
}

/// `Σᵢ Cⁱ V′ Aᵢ`; row `a` is `B_a`.
pub fn residuals(sys: &SystemSpec, v: &SolutionVec) -> Result<ResidualForms> {
    check_candidate(sys, v)?;
    Ok(matrix_route(sys, &functional_matrix(v)))
}

/// Expands `A_μ dV_μ` as a μ-polynomial of covectors and reduces it modulo `Z_μ`.
pub fn residuals_direct(sys: &SystemSpec, v: &SolutionVec) -> Result<ResidualForms> {
    check_candidate(sys, v)?;
    let vp = functional_matrix(v);
    Ok(direct_route(sys, &vp))
}

fn direct_route(sys: &SystemSpec, vp: &[Vec<Rf>]) -> ResidualForms {
    let (m, n, k) = (sys.m(), sys.n(), sys.k());
    let vars = &sys.vars;
    let mut series: Vec<Vec<Rf>> = vec![vec![Rf::zero(vars); m + k]; n];
    for (i, a) in sys.a.mats.iter().enumerate() {
        let prod = row_times(vp, a);
        for (j, row) in prod.into_iter().enumerate() {
            for (b, e) in row.into_iter().enumerate() {
                series[b][i + j] = &series[b][i + j] + &e;
            }
        }
    }
    let mut rows = vec![vec![Rf::zero(vars); n]; m];
    for (b, coeffs) in series.into_iter().enumerate() {
        let (_, r) = divmod_mu(&MuPoly::from_coeffs(vars, coeffs), &sys.z);
        for (a, row) in rows.iter_mut().enumerate() {
            row[b] = r.coeff(a);
        }
    }
    ResidualForms { rows }
}

/// Exact check that every residual component vanishes.
pub fn verify_solution(sys: &SystemSpec, v: &SolutionVec) -> Result<bool> {
    Ok(residuals(sys, v)?.is_zero())
}

/// Admissibility verdict with a nonzero entry of `Σ Cⁱ Z′ Aᵢ` when it fails.
#[derive(Clone, Debug)]
pub struct Admissibility {
    pub admissible: bool,
    pub witness: Option<Witness>,
    pub matrix_route: ResidualForms,
}

pub fn check_admissibility(sys: &SystemSpec) -> Admissibility {
    let zp = functional_matrix(&sys.z_vector());
    let mat = matrix_route(sys, &zp);
    let direct = direct_route(sys, &zp);
    assert_eq!(mat, direct, "matrix and division routes disagree on admissibility");
    Admissibility {
        admissible: mat.is_zero(),
        witness: mat.witness(),
        matrix_route: mat,
    }
}

/// `A_μ dZ_μ ≡ 0 (mod Z_μ)`.
pub fn admits_multiplication(sys: &SystemSpec) -> bool {
    check_admissibility(sys).admissible
}

/// Coefficient of `∂_c V_j` in residual component `(a, b)`:
/// `E[(a,b)][(j,c)] = Σᵢ (Cⁱ)_{aj} (Aᵢ)_{cb}`.
pub fn derivative_coefficients(sys: &SystemSpec) -> Result<RfMatrix> {
    let (m, n) = (sys.m(), sys.n());
    let c = sys.companion().entries;
    let mut powers = vec![RfMatrix::identity(&sys.vars, m)];
    for i in 1..=sys.k() {
        powers.push(powers[i - 1].mul(&c)?);
    }
    Ok(RfMatrix::from_fn(&sys.vars, m * n, m * n, |r, s| {
        let (a, b) = (r / n, r % n);
        let (j, cc) = (s / n, s % n);
        let mut acc = Rf::zero(&sys.vars);
        for (i, p) in powers.iter().enumerate() {
            let x = p.get(a, j);
            let y = sys.a.get(i).get(cc, b);
            if !x.is_zero() && !y.is_zero() {
                acc = &acc + &(x * y);
            }
        }
        acc
    }))
}

/// True when the two systems impose the same linear conditions on `V′`.
pub fn equivalent_systems(s1: &SystemSpec, s2: &SystemSpec) -> Result<bool> {
    if s1.m() != s2.m() || s1.n() != s2.n() {
        return Ok(false);
    }
    let e1 = derivative_coefficients(s1)?;
    let e2 = derivative_coefficients(s2)?;
    let r1 = e1.rank()?;
    if r1 != e2.rank()? {
        return Ok(false);
    }
    let mut rows = e1.to_rows();
    rows.extend(e2.to_rows());
    let stacked = RfMatrix::from_rows(s1.vars(), rows)?;
    Ok(stacked.rank()? == r1)
}

/// A (1,1)-tensor field in components, `X[a][b] = Xᵃ_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XTensor {
    x: RfMatrix,
}

impl XTensor {
    pub fn new(x: RfMatrix) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::Dimension("X must be square".into()));
        }
        if x.rows() != x.vars().len() {
            return Err(Error::Dimension(format!(
                "X is {0}x{0} on {1} coordinates",
                x.rows(),
                x.vars().len()
            )));
        }
        Ok(XTensor { x })
    }

    pub fn matrix(&self) -> &RfMatrix {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    pub fn vars(&self) -> &Vars {
        self.x.vars()
    }
}

/// Coefficients `c₀,…,c_{n−1}` of `det(μI + X) = μⁿ + Σ cᵢμⁱ` (Faddeev–LeVerrier).
pub fn det_x_plus_mu(x: &RfMatrix) -> Result<Vec<Rf>> {
    let n = x.rows();
    let vars = x.vars();
    let b = x.scale_q(&Rational::from_integer((-1).into()));
    let mut c = vec![Rf::zero(vars); n + 1];
    c[n] = Rf::one(vars);
    let mut mk = RfMatrix::zeros(vars, n, n);
    for k in 1..=n {
        mk = b.mul(&mk)?.add(&RfMatrix::identity(vars, n).scale(&c[n - k + 1]))?;
        let t = b.mul(&mk)?.trace();
        c[n - k] = t.scale(&Rational::new((-1).into(), (k as i64).into()));
    }
    c.truncate(n);
    Ok(c)
}

/// `A_μ = X + μI`, `Z_μ = det(X + μI)`.
pub fn from_tensor_x(x: &XTensor, name: &str) -> Result<SystemSpec> {
    let vars = x.vars().clone();
    let z = MonicZ::new(&vars, det_x_plus_mu(&x.x)?)?;
    let a = TensorPoly::new(vec![x.x.clone(), RfMatrix::identity(&vars, x.n())])?;
    SystemSpec::new(name, &vars, z, a)
}

/// Nijenhuis torsion, indexed `[k][i][j]` for `Nᵏᵢⱼ`.
pub fn nijenhuis(x: &XTensor) -> Vec<Vec<Vec<Rf>>> {
    let n = x.n();
    let xm = &x.x;
    let vars = x.vars();
    let d: Vec<RfMatrix> = (0..n).map(|l| xm.partial(l)).collect();
    let mut out = vec![vec![vec![Rf::zero(vars); n]; n]; n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rf::zero(vars);
                for l in 0..n {
                    let t1 = xm.get(l, i) * d[l].get(k, j);
                    let t2 = xm.get(l, j) * d[l].get(k, i);
                    let t3 = xm.get(k, l) * &(d[i].get(l, j) - d[j].get(l, i));
                    acc = &(&(&acc + &t1) - &t2) - &t3;
                }
                out[k][i][j] = acc;
            }
        }
    }
    out
}

/// Both sides of the torsion identity,
/// `(Xʲᵢ ∂ⱼ det X − det X ∂ᵢ tr X)` and `Nᵏᵢⱼ (cof X)ʲₖ`.
pub fn torsion_identity_sides(x: &XTensor) -> Result<(Vec<Rf>, Vec<Rf>)> {
    let n = x.n();
    let xm = &x.x;
    let vars = x.vars();
    let det = xm.det()?;
    let tr = xm.trace();
    let cof = xm.adjugate()?;
    let nij = nijenhuis(x);
    let mut lhs = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = Rf::zero(vars);
        for j in 0..n {
            a = &a + &(xm.get(j, i) * &det.partial(j));
        }
        lhs.push(&a - &(&det * &tr.partial(i)));
        let mut b = Rf::zero(vars);
        for j in 0..n {
            for k in 0..n {
                b = &b + &(&nij[k][i][j] * cof.get(j, k));
            }
        }
        rhs.push(b);
    }
    Ok((lhs, rhs))
}

/// `∂ᵢf = Σⱼ Mᵢⱼ ∂ⱼg` for all `i`.
pub fn check_fmg(m: &[Vec<Rational>], f: &Rf, g: &Rf) -> Result<bool> {
    f.vars().check_same(g.vars())?;
    let n = f.vars().len();
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("M must be {n}x{n}")));
    }
    let dg: Vec<Rf> = (0..n).map(|j| g.partial(j)).collect();
    for (i, row) in m.iter().enumerate() {
        let mut acc = Rf::zero(f.vars());
        for (mij, d) in row.iter().zip(&dg) {
            acc = &acc + &d.scale(mij);
        }
        if acc != f.partial(i) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::print_system(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic221() -> SystemSpec {
        let v = Vars::new(&["x", "y"]).unwrap();
        let (x, y) = (Rf::var(&v, 0), Rf::var(&v, 1));
        let z = MonicZ::new(&v, vec![x.clone(), y.clone()]).unwrap();
        let c = companion(&z).entries;
        let a = TensorPoly::new(vec![c.scale_q(&Rational::from_integer((-1).into())), RfMatrix::identity(&v, 2)])
            .unwrap();
        SystemSpec::new("g", &v, z, a).unwrap()
    }

    fn sol(sys: &SystemSpec, e: Vec<Rf>) -> SolutionVec {
        let _ = sys;
        SolutionVec::new(e).unwrap()
    }

    #[test]
    fn generic_residuals() {
        let s = generic221();
        let v = s.vars().clone();
        let (x, y) = (Rf::var(&v, 0), Rf::var(&v, 1));
        assert!(verify_solution(&s, &sol(&s, vec![Rf::one(&v), Rf::zero(&v)])).unwrap());
        assert!(verify_solution(&s, &sol(&s, vec![x.neg(), y.neg()])).unwrap());
        let bad = sol(&s, vec![x.clone(), Rf::zero(&v)]);
        let r = residuals(&s, &bad).unwrap();
        assert!(!r.is_zero());
        assert_eq!(r, residuals_direct(&s, &bad).unwrap());
        assert!(admits_multiplication(&s));
    }

    #[test]
    fn perturbed_generic_not_admissible() {
        let s = generic221();
        let v = s.vars().clone();
        let mut a0 = s.a().get(0).clone();
        a0.set(0, 0, a0.get(0, 0) + &Rf::one(&v));
        let a = TensorPoly::new(vec![a0, s.a().get(1).clone()]).unwrap();
        let broken = SystemSpec::new("b", &v, s.z().clone(), a).unwrap();
        let adm = check_admissibility(&broken);
        assert!(!adm.admissible);
        assert!(adm.witness.is_some());
    }

    #[test]
    fn tensor_reduced_modulo_z() {
        let v = Vars::new(&["x"]).unwrap();
        let z = MonicZ::new(&v, vec![Rf::var(&v, 0)]).unwrap();
        let one = RfMatrix::identity(&v, 1);
        let a = TensorPoly::new(vec![one.clone(), one.clone()]).unwrap();
        let s = SystemSpec::new("r", &v, z, a).unwrap();
        assert_eq!(s.k(), 0);
        assert_eq!(s.a().get(0).get(0, 0).to_string(), "1 - x");
    }

    #[test]
    fn diagonal_x_system() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = RfMatrix::from_rows(
            &v,
            vec![vec![Rf::var(&v, 0), Rf::zero(&v)], vec![Rf::zero(&v), Rf::var(&v, 1)]],
        )
        .unwrap();
        let xt = XTensor::new(x).unwrap();
        let s = from_tensor_x(&xt, "d").unwrap();
        assert_eq!(s.z().to_string(), "x*y + (y + x)*mu + mu^2");
        assert!(admits_multiplication(&s));
        assert!(nijenhuis(&xt).iter().flatten().flatten().all(Rf::is_zero));
    }

    #[test]
    fn torsion_identity_small() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = RfMatrix::from_rows(
            &v,
            vec![vec![Rf::zero(&v), Rf::var(&v, 0)], vec![Rf::one(&v), Rf::var(&v, 1)]],
        )
        .unwrap();
        let (l, r) = torsion_identity_sides(&XTensor::new(x).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn fmg_examples() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let (x, y) = (Rf::var(&v, 0), Rf::var(&v, 1));
        let q = |n: i64| Rational::from_integer(n.into());
        let rot = vec![vec![q(0), q(1)], vec![q(-1), q(0)]];
        let f = &(&x * &x) - &(&y * &y);
        let g = (&x * &y).scale(&q(2));
        assert!(check_fmg(&rot, &f, &g).unwrap());
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert!(check_fmg(&id, &f, &f).unwrap());
        assert!(!check_fmg(&id, &f, &g).unwrap());
    }
}
