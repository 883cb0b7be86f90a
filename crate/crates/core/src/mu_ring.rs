//! The quotient ring of μ-polynomials modulo a monic `Z`.

use std::fmt;

use num_traits::Signed;

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::error::{Error, Result};

/// Polynomial in μ with rational-function coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuPoly {
    vars: Vars,
    coeffs: Vec<Rf>,
}

impl MuPoly {
    pub fn zero(vars: &Vars) -> Self {
        MuPoly {
            vars: vars.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(Rf::one(vars))
    }

    pub fn constant(c: Rf) -> Self {
        let vars = c.vars().clone();
        Self::from_coeffs(&vars, vec![c])
    }

    pub fn mu(vars: &Vars) -> Self {
        Self::monomial(vars, 1, Rf::one(vars))
    }

    /// `c · μ^k`.
    pub fn monomial(vars: &Vars, k: usize, c: Rf) -> Self {
        let mut coeffs = vec![Rf::zero(vars); k];
        coeffs.push(c);
        Self::from_coeffs(vars, coeffs)
    }

    pub fn from_coeffs(vars: &Vars, mut coeffs: Vec<Rf>) -> Self {
        while coeffs.last().map_or(false, Rf::is_zero) {
            coeffs.pop();
        }
        MuPoly {
            vars: vars.clone(),
            coeffs,
        }
    }

    /// Constant-coefficient polynomial `Σ cᵢ μⁱ`.
    pub fn from_rationals(vars: &Vars, coeffs: &[Rational]) -> Self {
        Self::from_coeffs(vars, coeffs.iter().map(|c| Rf::constant(vars, c.clone())).collect())
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coeffs(&self) -> &[Rf] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rf {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Rf::zero(&self.vars))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn neg(&self) -> Self {
        MuPoly {
            vars: self.vars.clone(),
            coeffs: self.coeffs.iter().map(Rf::neg).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs(&self.vars, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Ordinary (unreduced) product.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = vec![Rf::zero(&self.vars); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(&self.vars, out)
    }

    pub fn scale(&self, k: &Rf) -> Self {
        Self::from_coeffs(&self.vars, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn scale_q(&self, k: &Rational) -> Self {
        Self::from_coeffs(&self.vars, self.coeffs.iter().map(|c| c.scale(k)).collect())
    }

    pub fn partial(&self, idx: usize) -> Self {
        Self::from_coeffs(&self.vars, self.coeffs.iter().map(|c| c.partial(idx)).collect())
    }

    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        Self::from_coeffs(target, self.coeffs.iter().map(|c| c.embed(target, map)).collect())
    }

    /// `P(M) = Σ Pᵢ Mⁱ` for a square matrix `M`.
    pub fn at_matrix(&self, m: &RfMatrix) -> Result<RfMatrix> {
        let n = m.rows();
        let mut acc = RfMatrix::zeros(&self.vars, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?.add(&RfMatrix::identity(&self.vars, n).scale(c))?;
        }
        Ok(acc)
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let simple = c.denom().is_one() && c.numer().num_terms() == 1;
            let neg = simple && c.numer().leading_coeff().is_negative();
            let body = if neg { c.neg() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mono = if i == 1 { "mu".to_string() } else { format!("mu^{i}") };
            if i == 0 {
                body.fmt_with(names, f)?;
            } else if body.is_one() {
                write!(f, "{mono}")?;
            } else if simple {
                body.fmt_with(names, f)?;
                write!(f, "*{mono}")?;
            } else {
                write!(f, "(")?;
                body.fmt_with(names, f)?;
                write!(f, ")*{mono}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Display for MuPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.vars.names().to_vec();
        self.fmt_with(&names, f)
    }
}

/// `Z₀ + Z₁μ + … + Z_{m−1}μ^{m−1} + μᵐ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicZ {
    vars: Vars,
    lower: Vec<Rf>,
}

impl MonicZ {
    pub fn new(vars: &Vars, lower: Vec<Rf>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::NotMonic);
        }
        for c in &lower {
            vars.check_same(c.vars())?;
        }
        Ok(MonicZ {
            vars: vars.clone(),
            lower,
        })
    }

    pub fn from_mupoly(p: &MuPoly) -> Result<Self> {
        match p.degree() {
            Some(m) if m >= 1 && p.coeffs[m].is_one() => {
                Self::new(&p.vars, (0..m).map(|i| p.coeff(i)).collect())
            }
            _ => Err(Error::NotMonic),
        }
    }

    pub fn to_mupoly(&self) -> MuPoly {
        let mut c = self.lower.clone();
        c.push(Rf::one(&self.vars));
        MuPoly::from_coeffs(&self.vars, c)
    }

    pub fn m(&self) -> usize {
        self.lower.len()
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn lower(&self) -> &[Rf] {
        &self.lower
    }

    pub fn coeff(&self, i: usize) -> &Rf {
        &self.lower[i]
    }

    pub fn is_constant(&self) -> bool {
        self.lower.iter().all(|c| c.as_constant().is_some())
    }

    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        MonicZ {
            vars: target.clone(),
            lower: self.lower.iter().map(|c| c.embed(target, map)).collect(),
        }
    }

    /// `C · u` for the companion matrix `C`, without forming `C`.
    pub fn companion_apply(&self, u: &[Rf]) -> Vec<Rf> {
        let m = self.m();
        let last = &u[m - 1];
        (0..m)
            .map(|j| {
                let t = if last.is_zero() {
                    Rf::zero(&self.vars)
                } else {
                    &self.lower[j] * last
                };
                if j == 0 {
                    t.neg()
                } else {
                    &u[j - 1] - &t
                }
            })
            .collect()
    }
}

impl fmt::Display for MonicZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_mupoly().fmt(f)
    }
}

/// Companion matrix of a monic `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionMatrix {
    pub z: MonicZ,
    pub entries: RfMatrix,
}

pub fn companion(z: &MonicZ) -> CompanionMatrix {
    let m = z.m();
    let entries = RfMatrix::from_fn(&z.vars, m, m, |i, j| {
        if j == m - 1 {
            z.lower[i].neg()
        } else if i == j + 1 {
            Rf::one(&z.vars)
        } else {
            Rf::zero(&z.vars)
        }
    });
    CompanionMatrix {
        z: z.clone(),
        entries,
    }
}

/// Column `[V₀,…,V_{m−1}]ᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionVec {
    entries: Vec<Rf>,
}

impl SolutionVec {
    pub fn new(entries: Vec<Rf>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Dimension("empty solution vector".into()));
        }
        for e in &entries[1..] {
            entries[0].vars().check_same(e.vars())?;
        }
        Ok(SolutionVec { entries })
    }

    /// Pads `p` to length `m`; fails when `deg p ≥ m`.
    pub fn from_mupoly(p: &MuPoly, m: usize) -> Result<Self> {
        check_reduced(p, m)?;
        Ok(SolutionVec {
            entries: (0..m).map(|i| p.coeff(i)).collect(),
        })
    }

    pub fn to_mupoly(&self) -> MuPoly {
        MuPoly::from_coeffs(self.vars(), self.entries.clone())
    }

    pub fn unit(vars: &Vars, m: usize) -> Self {
        let mut e = vec![Rf::zero(vars); m];
        e[0] = Rf::one(vars);
        SolutionVec { entries: e }
    }

    pub fn entries(&self) -> &[Rf] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0].vars()
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            e.fmt_with(names, f)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SolutionVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.vars().names().to_vec();
        self.fmt_with(&names, f)
    }
}

fn check_reduced(p: &MuPoly, m: usize) -> Result<()> {
    match p.degree() {
        Some(d) if d >= m => Err(Error::NotReduced { degree: d, m }),
        _ => Ok(()),
    }
}

/// Euclidean division by the monic `Z`: `P = Q·Z + R` with `deg R < m`.
pub fn divmod_mu(p: &MuPoly, z: &MonicZ) -> (MuPoly, MuPoly) {
    let m = z.m();
    let vars = p.vars.clone();
    let mut r = p.coeffs.clone();
    if r.len() <= m {
        return (MuPoly::zero(&vars), p.clone());
    }
    let mut q = vec![Rf::zero(&vars); r.len() - m];
    for d in (m..r.len()).rev() {
        let lead = std::mem::replace(&mut r[d], Rf::zero(&vars));
        if lead.is_zero() {
            continue;
        }
        for (j, zj) in z.lower.iter().enumerate() {
            if !zj.is_zero() {
                r[d - m + j] = &r[d - m + j] - &(&lead * zj);
            }
        }
        q[d - m] = lead;
    }
    r.truncate(m);
    (MuPoly::from_coeffs(&vars, q), MuPoly::from_coeffs(&vars, r))
}

pub fn reduce(p: &MuPoly, z: &MonicZ) -> MuPoly {
    divmod_mu(p, z).1
}

/// `Σ Pᵢ Cⁱ e₁`, the residue of `P` read off through the companion matrix.
pub fn eval_at_companion(p: &MuPoly, z: &MonicZ) -> SolutionVec {
    let m = z.m();
    let vars = &z.vars;
    let mut acc = vec![Rf::zero(vars); m];
    for c in p.coeffs.iter().rev() {
        acc = z.companion_apply(&acc);
        acc[0] = &acc[0] + c;
    }
    SolutionVec { entries: acc }
}

/// `V_C · w`, the action of multiplication by `V` on the column `w`.
pub fn mult_apply(v: &MuPoly, w: &[Rf], z: &MonicZ) -> Vec<Rf> {
    let m = z.m();
    let vars = &z.vars;
    let mut acc = vec![Rf::zero(vars); m];
    for c in v.coeffs.iter().rev() {
        acc = z.companion_apply(&acc);
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(w) {
            if !x.is_zero() {
                *a = &*a + &(c * x);
            }
        }
    }
    acc
}

/// Matrix of multiplication by `V` in the basis `1, μ, …, μ^{m−1}`.
pub fn mult_matrix(v: &MuPoly, z: &MonicZ) -> RfMatrix {
    let m = z.m();
    let vars = &z.vars;
    let cols: Vec<Vec<Rf>> = (0..m)
        .map(|j| {
            let mut e = vec![Rf::zero(vars); m];
            e[j] = Rf::one(vars);
            mult_apply(v, &e, z)
        })
        .collect();
    RfMatrix::from_fn(vars, m, m, |i, j| cols[j][i].clone())
}

/// Residue of `V·W` modulo `Z`; both operands must be reduced.
pub fn star_mul(v: &MuPoly, w: &MuPoly, z: &MonicZ) -> Result<MuPoly> {
    let m = z.m();
    check_reduced(v, m)?;
    check_reduced(w, m)?;
    let r = reduce(&v.mul(w), z);
    debug_assert_eq!(
        r,
        star_mul_matrix_route(v, w, z).expect("reduced operands"),
        "division and companion routes disagree"
    );
    Ok(r)
}

/// `V_C W_C e₁`.
pub fn star_mul_matrix_route(v: &MuPoly, w: &MuPoly, z: &MonicZ) -> Result<MuPoly> {
    let m = z.m();
    check_reduced(v, m)?;
    check_reduced(w, m)?;
    let wcol = SolutionVec::from_mupoly(w, m)?;
    Ok(MuPoly::from_coeffs(&z.vars, mult_apply(v, wcol.entries(), z)))
}

/// `μ⁻¹ = −(Z₁ + Z₂μ + … + μ^{m−1}) / Z₀`.
pub fn mu_inverse(z: &MonicZ) -> Result<MuPoly> {
    let z0 = &z.lower[0];
    if z0.is_zero() {
        return Err(Error::MuNotUnit);
    }
    let k = z0.recip()?.neg();
    let mut c: Vec<Rf> = z.lower[1..].to_vec();
    c.push(Rf::one(&z.vars));
    Ok(MuPoly::from_coeffs(&z.vars, c).scale(&k))
}

fn is_mu(v: &MuPoly, z: &MonicZ) -> bool {
    *v == reduce(&MuPoly::mu(&z.vars), z)
}

/// `V^r` under `*`; negative exponents only for `V = μ`.
pub fn star_pow(v: &MuPoly, r: i64, z: &MonicZ) -> Result<MuPoly> {
    check_reduced(v, z.m())?;
    let base = if r < 0 {
        if !is_mu(v, z) {
            return Err(Error::NegativePowerBase);
        }
        mu_inverse(z)?
    } else {
        v.clone()
    };
    let mut acc = reduce(&MuPoly::one(&z.vars), z);
    for _ in 0..r.unsigned_abs() {
        acc = star_mul(&acc, &base, z)?;
    }
    Ok(acc)
}

/// Inverse of an arbitrary unit of the quotient ring, by solving `V_C X = e₁`.
/// Not part of the solution calculus; no claim is made that the result solves
/// any PDE system.
pub fn unit_inverse(v: &MuPoly, z: &MonicZ) -> Result<MuPoly> {
    check_reduced(v, z.m())?;
    let mm = mult_matrix(v, z);
    let e1 = SolutionVec::unit(&z.vars, z.m());
    match mm.solve(e1.entries())? {
        Some((x, ker)) if ker.is_empty() => Ok(MuPoly::from_coeffs(&z.vars, x)),
        _ => Err(Error::NotAUnit),
    }
}
