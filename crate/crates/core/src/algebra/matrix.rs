//! Dense matrices of rational functions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{MultiPoly, Rational, Vars};
use super::ratfunc::RationalFunction as Rf;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RfMatrix {
    vars: Vars,
    rows: usize,
    cols: usize,
    data: Vec<Rf>,
}

/// Row echelon form produced by fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Rf>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl RfMatrix {
    pub fn zeros(vars: &Vars, rows: usize, cols: usize) -> Self {
        RfMatrix {
            vars: vars.clone(),
            rows,
            cols,
            data: vec![Rf::zero(vars); rows * cols],
        }
    }

    pub fn identity(vars: &Vars, n: usize) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, Rf::one(vars));
        }
        m
    }

    pub fn from_rows(vars: &Vars, rows: Vec<Vec<Rf>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Dimension("ragged matrix rows".into()));
            }
            for e in row {
                vars.check_same(e.vars())?;
                data.push(e);
            }
        }
        Ok(RfMatrix {
            vars: vars.clone(),
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_fn(vars: &Vars, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rf) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RfMatrix {
            vars: vars.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rf {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rf) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Rf> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rf>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rf::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map(&self, f: impl Fn(&Rf) -> Rf) -> Self {
        RfMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.vars, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(RfMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(RfMatrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        self.vars.check_same(&other.vars)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.vars.check_same(&other.vars)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(&self.vars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rf::zero(&self.vars);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rf]) -> Result<Vec<Rf>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rf::zero(&self.vars);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, k: &Rf) -> Self {
        self.map(|e| e * k)
    }

    pub fn scale_q(&self, k: &Rational) -> Self {
        self.map(|e| e.scale(k))
    }

    pub fn partial(&self, idx: usize) -> Self {
        self.map(|e| e.partial(idx))
    }

    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        RfMatrix {
            vars: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.embed(target, map)).collect(),
        }
    }

    pub fn trace(&self) -> Rf {
        let mut acc = Rf::zero(&self.vars);
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(&self.vars, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != skip_r).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip_c).collect();
        Self::from_fn(&self.vars, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn det(&self) -> Result<Rf> {
        if !self.is_square() {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        match n {
            0 => Ok(Rf::one(&self.vars)),
            1 => Ok(self.get(0, 0).clone()),
            2 => Ok(&(self.get(0, 0) * self.get(1, 1)) - &(self.get(0, 1) * self.get(1, 0))),
            3 | 4 => {
                let mut acc = Rf::zero(&self.vars);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let t = a * &self.minor(0, j).det()?;
                    acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                Ok(acc)
            }
            _ => self.det_elimination(),
        }
    }

    fn det_elimination(&self) -> Result<Rf> {
        let mut a = self.to_rows();
        let n = self.rows;
        let mut sign = false;
        let mut prev = Rf::one(&self.vars);
        for k in 0..n {
            let p = (k..n)
                .filter(|&i| !a[i][k].is_zero())
                .min_by_key(|&i| a[i][k].weight());
            let Some(p) = p else {
                return Ok(Rf::zero(&self.vars));
            };
            if p != k {
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = v.checked_div(&prev)?;
                }
                a[i][k] = Rf::zero(&self.vars);
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { d.neg() } else { d })
    }

    /// Transposed cofactor matrix, so that `adj(A)·A = det(A)·I`.
    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(&self.vars, 1));
        }
        let mut out = Self::zeros(&self.vars, n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det()?;
                out.set(j, i, if (i + j) % 2 == 0 { c } else { c.neg() });
            }
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        let inv = d.recip()?;
        Ok(self.adjugate()?.scale(&inv))
    }

    /// Fraction-free elimination. Each column picks the nonzero candidate of
    /// smallest [`Rf::weight`]; divisions by the previous pivot are exact.
    pub fn echelon(&self) -> Result<Echelon> {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut prev = Rf::one(&self.vars);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let p = (r..m)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].weight());
            let Some(p) = p else { continue };
            a.swap(p, r);
            for i in r + 1..m {
                for j in c + 1..n {
                    let mut v = &a[r][c] * &a[i][j];
                    if !a[i][c].is_zero() && !a[r][j].is_zero() {
                        v = &v - &(&a[i][c] * &a[r][j]);
                    }
                    a[i][j] = v.checked_div(&prev)?;
                }
                a[i][c] = Rf::zero(&self.vars);
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        Ok(Echelon {
            rows: a,
            pivots,
            cols: n,
        })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.pivots.len())
    }

    /// Basis of the right kernel, each vector scaled to coprime polynomial entries.
    pub fn kernel(&self) -> Result<Vec<Vec<Rf>>> {
        let ech = self.echelon()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![Rf::zero(&self.vars); self.cols];
            x[f] = Rf::one(&self.vars);
            ech.back_substitute(&mut x, None)?;
            basis.push(primitive_vector(&x));
        }
        Ok(basis)
    }

    /// Solves `self · x = b`. Returns a particular solution (free variables
    /// set to zero) together with a kernel basis, or `None` if inconsistent.
    pub fn solve(&self, b: &[Rf]) -> Result<Option<(Vec<Rf>, Vec<Vec<Rf>>)>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let aug = Self::from_fn(&self.vars, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let ech = aug.echelon()?;
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rf::zero(&self.vars); self.cols];
        let rhs: Vec<Rf> = ech.rows.iter().map(|r| r[self.cols].clone()).collect();
        let trimmed = Echelon {
            rows: ech.rows.iter().map(|r| r[..self.cols].to_vec()).collect(),
            pivots: ech.pivots.clone(),
            cols: self.cols,
        };
        trimmed.back_substitute(&mut x, Some(&rhs))?;
        Ok(Some((x, self.kernel()?)))
    }
}

impl Echelon {
    /// Fills pivot entries of `x` from its free entries.
    pub fn back_substitute(&self, x: &mut [Rf], rhs: Option<&[Rf]>) -> Result<()> {
        for (i, &p) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut acc = match rhs {
                Some(r) => r[i].clone(),
                None => Rf::zero(x[0].vars()),
            };
            for j in p + 1..self.cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = &acc - &(&row[j] * &x[j]);
                }
            }
            x[p] = acc.checked_div(&row[p])?;
        }
        Ok(())
    }
}

/// Rescales a vector so its entries are polynomials with no common factor
/// and the first nonzero entry has positive leading coefficient.
pub fn primitive_vector(v: &[Rf]) -> Vec<Rf> {
    let Some(first) = v.iter().find(|e| !e.is_zero()) else {
        return v.to_vec();
    };
    let vars = first.vars().clone();
    let mut den = MultiPoly::one(&vars);
    for e in v {
        if !e.denom().is_one() {
            let g = den.gcd(e.denom());
            den = den.mul(&e.denom().div_exact(&g).expect("gcd divides"));
        }
    }
    let polys: Vec<MultiPoly> = v
        .iter()
        .map(|e| {
            e.numer()
                .mul(&den.div_exact(e.denom()).expect("lcm is a multiple"))
        })
        .collect();
    let mut g = MultiPoly::zero(&vars);
    for p in &polys {
        g = g.gcd(p);
        if g.as_constant().is_some() && !g.is_zero() {
            break;
        }
    }
    let polys: Vec<MultiPoly> = if g.as_constant().is_some() {
        polys
    } else {
        polys
            .iter()
            .map(|p| p.div_exact(&g).expect("content divides"))
            .collect()
    };
    let lead = polys
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| p.leading_coeff())
        .unwrap_or_else(Rational::one);
    let mut num = BigInt::zero();
    let mut lcm = BigInt::one();
    for p in &polys {
        for (_, c) in p.terms() {
            num = num.gcd(c.numer());
            lcm = lcm.lcm(c.denom());
        }
    }
    let content = Rational::new(num, lcm);
    let mut k = content.recip();
    if (lead * &k).is_negative() {
        k = -k;
    }
    polys
        .into_iter()
        .map(|p| Rf::from_poly(p.scale(&k)))
        .collect()
}

impl fmt::Display for RfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Vars, Rf, Rf) {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = Rf::var(&v, 0);
        let y = Rf::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn det_and_adjugate() {
        let (v, x, y) = setup();
        let one = Rf::one(&v);
        let m = RfMatrix::from_rows(
            &v,
            vec![
                vec![x.clone(), y.clone(), one.clone()],
                vec![one.clone(), x.clone(), y.clone()],
                vec![y.clone(), one.clone(), x.clone()],
            ],
        )
        .unwrap();
        let d = m.det().unwrap();
        let expected = &(&(&x * &(&x * &x)) + &(&y * &(&y * &y))) + &one;
        let expected = &expected - &(&x * &y).scale(&Rational::from_integer(3.into()));
        assert_eq!(d, expected);
        let prod = m.adjugate().unwrap().mul(&m).unwrap();
        assert_eq!(prod, RfMatrix::identity(&v, 3).scale(&d));
        assert_eq!(m.det_elimination().unwrap(), d);
    }

    #[test]
    fn kernel_of_rank_one() {
        let (v, x, y) = setup();
        let m = RfMatrix::from_rows(
            &v,
            vec![vec![x.clone(), y.clone()], vec![&x * &x, &x * &y]],
        )
        .unwrap();
        assert_eq!(m.rank().unwrap(), 1);
        let k = m.kernel().unwrap();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![y.clone(), x.neg()]);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(Rf::is_zero));
    }

    #[test]
    fn solve_affine() {
        let (v, x, y) = setup();
        let one = Rf::one(&v);
        let m = RfMatrix::from_rows(&v, vec![vec![x.clone(), one.clone()], vec![one.clone(), y.clone()]])
            .unwrap();
        let b = vec![one.clone(), Rf::zero(&v)];
        let (sol, ker) = m.solve(&b).unwrap().unwrap();
        assert!(ker.is_empty());
        assert_eq!(m.mul_vec(&sol).unwrap(), b);
        let sing = RfMatrix::from_rows(&v, vec![vec![x.clone(), y.clone()], vec![x.clone(), y.clone()]])
            .unwrap();
        assert!(sing.solve(&[one.clone(), Rf::zero(&v)]).unwrap().is_none());
        assert!(matches!(sing.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let (_, x, y) = setup();
        let a = x.checked_div(&y).unwrap().scale(&Rational::new(2.into(), 3.into()));
        let b = Rf::one(x.vars()).scale(&Rational::new((-4).into(), 1.into()));
        let p = primitive_vector(&[a, b]);
        assert_eq!(p[0], x);
        assert_eq!(p[1], y.scale(&Rational::from_integer((-6).into())));
    }
}
