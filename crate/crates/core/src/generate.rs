//! Constructing exact solutions and admissible systems from known ones.

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::error::{Error, Result};
use crate::mu_ring::{mult_matrix, reduce, star_mul, star_pow, MonicZ, MuPoly, SolutionVec};
use crate::system::{admits_multiplication, verify_solution, SystemSpec, TensorPoly, XTensor};

/// Labelled solutions of one system, all verified.
#[derive(Clone, Debug)]
pub struct GeneratedFamily {
    pub sys: SystemSpec,
    pub members: Vec<(String, SolutionVec)>,
}

impl GeneratedFamily {
    pub fn new(sys: SystemSpec) -> Self {
        GeneratedFamily {
            sys,
            members: Vec::new(),
        }
    }

    /// Adds a member after checking that it solves the system.
    pub fn push(&mut self, label: impl Into<String>, v: SolutionVec) -> Result<()> {
        let label = label.into();
        if !verify_solution(&self.sys, &v)? {
            return Err(Error::Invalid(format!("`{label}` does not solve {}", self.sys.name())));
        }
        self.members.push((label, v));
        Ok(())
    }
}

/// `μ^r_*` for `r` in `r_min..=r_max`.
pub fn mu_power_table(sys: &SystemSpec, r_min: i64, r_max: i64) -> Result<GeneratedFamily> {
    if !admits_multiplication(sys) {
        return Err(Error::NotAdmissible);
    }
    let mu = sys.mu();
    let mut fam = GeneratedFamily::new(sys.clone());
    for r in r_min..=r_max {
        let p = star_pow(&mu, r, sys.z())?;
        fam.push(format!("mu^{r}"), SolutionVec::from_mupoly(&p, sys.m())?)?;
    }
    Ok(fam)
}

/// Univariate polynomial `Σ cᵢ tⁱ` evaluated at coordinate `idx`.
pub fn univariate_at(coeffs: &[Rational], vars: &Vars, idx: usize) -> Rf {
    let t = Rf::var(vars, idx);
    let mut acc = Rf::zero(vars);
    for c in coeffs.iter().rev() {
        acc = &(&acc * &t) + &Rf::constant(vars, c.clone());
    }
    acc
}

/// Derivative of a univariate coefficient list.
pub fn univariate_derivative(coeffs: &[Rational]) -> Vec<Rational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect()
}

/// `V₀ = (xφ(y) − yψ(x))/(x − y)`, `V₁ = (ψ(x) − φ(y))/(x − y)` in the root
/// chart, where `x` and `y` (coordinates 0 and 1) are the two roots of `Z`.
pub fn general_solution_221(vars: &Vars, phi: &[Rational], psi: &[Rational]) -> Result<SolutionVec> {
    if vars.len() != 2 {
        return Err(Error::Dimension("the root chart has two coordinates".into()));
    }
    let (x, y) = (Rf::var(vars, 0), Rf::var(vars, 1));
    let fy = univariate_at(phi, vars, 1);
    let gx = univariate_at(psi, vars, 0);
    let d = &x - &y;
    let v0 = (&(&x * &fy) - &(&y * &gx)).checked_div(&d)?;
    let v1 = (&gx - &fy).checked_div(&d)?;
    SolutionVec::new(vec![v0, v1])
}

/// The pair `(λ₁, −1)/(λ₁−λ₂)`, `(−λ₂, 1)/(λ₁−λ₂)` for given root functions.
pub fn idempotents_with_roots(l1: &Rf, l2: &Rf) -> Result<(SolutionVec, SolutionVec)> {
    let d = l1 - l2;
    if d.is_zero() {
        return Err(Error::EigenvaluesCoincide);
    }
    let inv = d.recip()?;
    let one = Rf::one(l1.vars());
    let a = SolutionVec::new(vec![l1 * &inv, (&one * &inv).neg()])?;
    let b = SolutionVec::new(vec![(l2 * &inv).neg(), inv])?;
    Ok((a, b))
}

/// Idempotents for a system in the root chart (`Z = (μ − x)(μ − y)`).
pub fn idempotents_m2(sys: &SystemSpec) -> Result<(SolutionVec, SolutionVec)> {
    if sys.m() != 2 || sys.n() < 2 {
        return Err(Error::Dimension("idempotents need m = 2 and two root coordinates".into()));
    }
    let v = sys.vars();
    let (x, y) = (Rf::var(v, 0), Rf::var(v, 1));
    if *sys.z().coeff(0) != &x * &y || *sys.z().coeff(1) != (&x + &y).neg() {
        return Err(Error::Invalid(
            "system is not in the root chart Z = (mu - x)(mu - y)".into(),
        ));
    }
    idempotents_with_roots(&x, &y)
}

fn disjoint_union(a: &Vars, b: &Vars) -> Result<(Vars, Vec<usize>, Vec<usize>)> {
    for n in b.names() {
        if a.names().contains(n) {
            return Err(Error::CoordinateClash(n.clone()));
        }
    }
    let mut names = a.names().to_vec();
    names.extend(b.names().iter().cloned());
    let vars = Vars::new(&names)?;
    let ma = (0..a.len()).collect();
    let mb = (a.len()..a.len() + b.len()).collect();
    Ok((vars, ma, mb))
}

/// Product-chart system with `A_μ ⊕ Ã_μ` and `Z_μ Z̃_μ`.
pub fn direct_sum(sa: &SystemSpec, sb: &SystemSpec) -> Result<SystemSpec> {
    let (vars, ma, mb) = disjoint_union(sa.vars(), sb.vars())?;
    if !admits_multiplication(sa) || !admits_multiplication(sb) {
        return Err(Error::NotAdmissible);
    }
    let za = sa.z().embed(&vars, &ma).to_mupoly();
    let zb = sb.z().embed(&vars, &mb).to_mupoly();
    let z = MonicZ::from_mupoly(&za.mul(&zb))?;
    let (na, nb) = (sa.n(), sb.n());
    let k = sa.k().max(sb.k());
    let zero = RfMatrix::zeros(&vars, na + nb, na + nb);
    let mut mats = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut m = zero.clone();
        if i <= sa.k() {
            let a = sa.a().get(i).embed(&vars, &ma);
            for r in 0..na {
                for c in 0..na {
                    m.set(r, c, a.get(r, c).clone());
                }
            }
        }
        if i <= sb.k() {
            let b = sb.a().get(i).embed(&vars, &mb);
            for r in 0..nb {
                for c in 0..nb {
                    m.set(na + r, na + c, b.get(r, c).clone());
                }
            }
        }
        mats.push(m);
    }
    let name = format!("{}+{}", sa.name(), sb.name());
    SystemSpec::new(&name, &vars, z, TensorPoly::new(mats)?)
}

/// Solution of `direct_sum(sa, sb)` congruent to `v` modulo `Z_a` and to `w`
/// modulo `Z_b`. Both `Z` must be constant.
pub fn direct_sum_lift(
    sa: &SystemSpec,
    sb: &SystemSpec,
    sum: &SystemSpec,
    v: &SolutionVec,
    w: &SolutionVec,
) -> Result<SolutionVec> {
    if !sa.z().is_constant() || !sb.z().is_constant() {
        return Err(Error::Invalid("lifting needs constant Z on both sides".into()));
    }
    let vars = sum.vars();
    let ma: Vec<usize> = (0..sa.n()).collect();
    let mb: Vec<usize> = (sa.n()..sa.n() + sb.n()).collect();
    let za = sa.z().embed(vars, &ma);
    let zb = sb.z().embed(vars, &mb);
    // e_a = Z_b s with Z_b s ≡ 1 mod Z_a
    let m = mult_matrix(&reduce(&zb.to_mupoly(), &za), &za);
    let mut one = vec![Rf::zero(vars); za.m()];
    one[0] = Rf::one(vars);
    let s = match m.solve(&one)? {
        Some((x, _)) => MuPoly::from_coeffs(vars, x),
        None => return Err(Error::Invalid("Z_a and Z_b share a factor".into())),
    };
    let ea = zb.to_mupoly().mul(&s);
    let eb = MuPoly::one(vars).sub(&ea);
    let vv = v.to_mupoly().embed(vars, &ma);
    let ww = w.to_mupoly().embed(vars, &mb);
    let u = reduce(&ea.mul(&vv).add(&eb.mul(&ww)), sum.z());
    SolutionVec::from_mupoly(&u, sum.m())
}

/// A trivial solution `Σ cᵢμⁱ` (constant coefficients) reduced modulo `Z`.
pub fn lift_trivial(sys: &SystemSpec, coeffs: &[Rational]) -> Result<SolutionVec> {
    let p = reduce(&MuPoly::from_rationals(sys.vars(), coeffs), sys.z());
    SolutionVec::from_mupoly(&p, sys.m())
}

/// `X = diag(φ₁ I_{n₁}, …, φ_s I_{n_s})`, each `φ_a` depending only on its block.
pub fn diagonal_block_x(vars: &Vars, sizes: &[usize], functions: &[Rf]) -> Result<XTensor> {
    if sizes.len() != functions.len() {
        return Err(Error::Dimension("one function per block".into()));
    }
    let n: usize = sizes.iter().sum();
    if n != vars.len() {
        return Err(Error::Dimension(format!(
            "block sizes sum to {n}, expected {}",
            vars.len()
        )));
    }
    let mut x = RfMatrix::zeros(vars, n, n);
    let mut start = 0;
    for (b, (&s, f)) in sizes.iter().zip(functions).enumerate() {
        vars.check_same(f.vars())?;
        for j in 0..n {
            if (j < start || j >= start + s) && f.depends_on(j) {
                return Err(Error::BlockDependence {
                    block: b,
                    coord: vars.names()[j].clone(),
                });
            }
        }
        for i in start..start + s {
            x.set(i, i, f.clone());
        }
        start += s;
    }
    XTensor::new(x)
}

/// Exact inverse via the adjugate.
pub fn invert_x(x: &XTensor) -> Result<XTensor> {
    XTensor::new(x.matrix().inverse()?)
}

/// Closure of `{μ^r_*}` under `*` stays in the span: returns the product
/// `μ^a_* * μ^b_*` together with `μ^{a+b}_*`.
pub fn power_product_pair(sys: &SystemSpec, a: i64, b: i64) -> Result<(MuPoly, MuPoly)> {
    let mu = sys.mu();
    let pa = star_pow(&mu, a, sys.z())?;
    let pb = star_pow(&mu, b, sys.z())?;
    Ok((star_mul(&pa, &pb, sys.z())?, star_pow(&mu, a + b, sys.z())?))
}
