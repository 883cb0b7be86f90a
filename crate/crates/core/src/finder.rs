//! Solving the admissibility condition for the tensors `Aᵢ` given `Z`.
//!
//! The condition `Σᵢ Cⁱ Z′ Aᵢ = 0` splits column by column: column `b` of
//! every `Aᵢ` must lie in the kernel of `[Z′ | CZ′ | … | CᵏZ′]`.

use crate::algebra::{Rational, RationalFunction as Rf, RfMatrix, Vars};
use crate::error::{Error, Result};
use crate::mu_ring::{MonicZ, SolutionVec};
use crate::system::{admits_multiplication, functional_matrix, SystemSpec, TensorPoly};

/// Admissible tensors `A_μ` for a fixed `Z`, parametrised by free functions.
///
/// Column `b` of the stacked unknowns `(A₀,…,A_k)` is
/// `particular[b] + Σₛ p_{b,s} basis[s]`.
#[derive(Clone, Debug)]
pub struct TensorFamily {
    pub z: MonicZ,
    pub vars: Vars,
    pub k: usize,
    pub basis: Vec<Vec<Rf>>,
    pub particular: Option<Vec<Vec<Rf>>>,
}

impl TensorFamily {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Number of free function slots.
    pub fn dimension(&self) -> usize {
        self.n() * self.basis.len()
    }

    pub fn slot_names(&self) -> Vec<String> {
        (0..self.n())
            .flat_map(|b| (0..self.basis.len()).map(move |s| format!("p{b}_{s}")))
            .collect()
    }

    /// The system obtained from parameters `params[b][s]`.
    pub fn specialize(&self, params: &[Vec<Rf>]) -> Result<SystemSpec> {
        let n = self.n();
        let d = self.basis.len();
        if params.len() != n || params.iter().any(|p| p.len() != d) {
            return Err(Error::Dimension(format!("expected {n} columns of {d} parameters")));
        }
        let free = if self.particular.is_some() { self.k } else { self.k + 1 };
        let mut mats = vec![RfMatrix::zeros(&self.vars, n, n); self.k + 1];
        for b in 0..n {
            let mut col = match &self.particular {
                Some(p) => p[b].clone(),
                None => vec![Rf::zero(&self.vars); n * free],
            };
            for (s, v) in self.basis.iter().enumerate() {
                if params[b][s].is_zero() {
                    continue;
                }
                for (c, e) in col.iter_mut().zip(v) {
                    *c = &*c + &(&params[b][s] * e);
                }
            }
            for i in 0..free {
                for c in 0..n {
                    mats[i].set(c, b, col[i * n + c].clone());
                }
            }
        }
        if self.particular.is_some() {
            mats[self.k] = RfMatrix::identity(&self.vars, n);
        }
        SystemSpec::new("family", &self.vars, self.z.clone(), TensorPoly::new(mats)?)
    }

    /// All parameters equal to one.
    pub fn representative(&self) -> Result<SystemSpec> {
        let one = Rf::one(&self.vars);
        self.specialize(&vec![vec![one; self.basis.len()]; self.n()])
    }
}

/// Blocks `CⁱZ′` for `i = 0..=k`.
fn blocks(z: &MonicZ, k: usize) -> Result<Vec<Vec<Vec<Rf>>>> {
    let zp = functional_matrix(&SolutionVec::new(z.lower().to_vec())?);
    let n = z.vars().len();
    let mut out = vec![zp];
    for _ in 0..k {
        let prev = out.last().expect("nonempty");
        let mut next = vec![Vec::with_capacity(n); z.m()];
        for b in 0..n {
            let col: Vec<Rf> = prev.iter().map(|r| r[b].clone()).collect();
            for (a, v) in z.companion_apply(&col).into_iter().enumerate() {
                next[a].push(v);
            }
        }
        out.push(next);
    }
    Ok(out)
}

fn stacked(vars: &Vars, blocks: &[Vec<Vec<Rf>>]) -> Result<RfMatrix> {
    let m = blocks[0].len();
    let rows = (0..m)
        .map(|a| blocks.iter().flat_map(|bl| bl[a].iter().cloned()).collect())
        .collect();
    RfMatrix::from_rows(vars, rows)
}

fn check_dims(z: &MonicZ, n: usize, vars: &Vars) -> Result<()> {
    vars.check_same(z.vars())?;
    if vars.len() != n {
        return Err(Error::Dimension(format!(
            "n = {n} but {} coordinates were given",
            vars.len()
        )));
    }
    Ok(())
}

/// All `(A₀,…,A_k)` with `Σ Cⁱ Z′ Aᵢ = 0`.
pub fn find_a(z: &MonicZ, n: usize, k: usize, vars: &Vars) -> Result<TensorFamily> {
    check_dims(z, n, vars)?;
    let bl = blocks(z, k)?;
    let basis = stacked(vars, &bl)?.kernel()?;
    Ok(TensorFamily {
        z: z.clone(),
        vars: vars.clone(),
        k,
        basis,
        particular: None,
    })
}

/// As [`find_a`] with the leading tensor fixed to `A_k = I`.
/// `None` when no such family exists.
pub fn find_a_monic(z: &MonicZ, n: usize, k: usize, vars: &Vars) -> Result<Option<TensorFamily>> {
    check_dims(z, n, vars)?;
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1 when A_k = I".into()));
    }
    let bl = blocks(z, k)?;
    let mat = stacked(vars, &bl[..k])?;
    let mut particular = Vec::with_capacity(n);
    let mut basis = Vec::new();
    for b in 0..n {
        let rhs: Vec<Rf> = bl[k].iter().map(|r| r[b].neg()).collect();
        match mat.solve(&rhs)? {
            Some((x, ker)) => {
                particular.push(x);
                basis = ker;
            }
            None => return Ok(None),
        }
    }
    Ok(Some(TensorFamily {
        z: z.clone(),
        vars: vars.clone(),
        k,
        basis,
        particular: Some(particular),
    }))
}

/// Re-verifies a specialisation.
pub fn verify_specialization(fam: &TensorFamily, params: &[Vec<Rf>]) -> Result<bool> {
    Ok(admits_multiplication(&fam.specialize(params)?))
}

/// The two nonlinear conditions on `φ(x, y)` for the `(2,3,1)` construction.
pub fn check_231_phi(phi: &Rf) -> Result<bool> {
    let vars = phi.vars();
    if vars.len() != 2 {
        return Err(Error::Dimension("phi must be a function of two coordinates".into()));
    }
    let (x, y) = (Rf::var(vars, 0), Rf::var(vars, 1));
    let px = phi.partial(0);
    let py = phi.partial(1);
    let e1 = &(&(&(&x * &(&px * &px)) - &(phi * &px)) + &(&y * &(&px * &py))) - &py;
    let e2 = &(&(&Rf::one(vars) + &(&x * &(&px * &py))) + &(&y * &(&py * &py))) - &(phi * &py);
    Ok(e1.is_zero() && e2.is_zero())
}

/// `φ = ay − a²x + 1/a`.
pub fn phi_231(vars: &Vars, a: &Rational) -> Result<Rf> {
    if num_traits::Zero::is_zero(a) {
        return Err(Error::ZeroParameter);
    }
    let (x, y) = (Rf::var(vars, 0), Rf::var(vars, 1));
    Ok(&(&y.scale(a) - &x.scale(&(a * a))) + &Rf::constant(vars, a.recip()))
}

/// `Z = x + yμ + φμ² + μ³`, `A₀ = [[xφₓ, xφ_y], [yφₓ − 1, yφ_y]]`, `A₁ = I`.
pub fn build_231(a: &Rational) -> Result<SystemSpec> {
    let vars = Vars::new(&["x", "y"])?;
    let phi = phi_231(&vars, a)?;
    let (x, y) = (Rf::var(&vars, 0), Rf::var(&vars, 1));
    let (px, py) = (phi.partial(0), phi.partial(1));
    let z = MonicZ::new(&vars, vec![x.clone(), y.clone(), phi])?;
    let a0 = RfMatrix::from_rows(
        &vars,
        vec![
            vec![&x * &px, &x * &py],
            vec![&(&y * &px) - &Rf::one(&vars), &y * &py],
        ],
    )?;
    let a1 = RfMatrix::identity(&vars, 2);
    SystemSpec::new(&format!("generic-231({a})"), &vars, z, TensorPoly::new(vec![a0, a1])?)
}
