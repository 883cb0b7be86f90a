//! Rational functions with a unique canonical representative.
//!
//! Numerator and denominator are coprime and the denominator is monic in the
//! graded-lex order, so equality is structural.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{MultiPoly, Rational, Vars};
use super::rpoly::{gcd, RPoly};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFunction {
    /// Canonical form of `num / den`.
    pub fn normalize(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.vars().check_same(den.vars())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let vars = num.vars().clone();
        if num.is_zero() {
            return Ok(Self::zero(&vars));
        }
        if let Some(c) = den.as_constant() {
            let inv = c.recip();
            return Ok(RationalFunction {
                num: num.scale(&inv),
                den: MultiPoly::one(&vars),
            });
        }
        if num.as_constant().is_some() {
            return Ok(Self::monic_den(num, den));
        }
        if den.num_terms() == 1 {
            // monomial denominator: cancel the common monomial factor only
            let (dm, _) = den.leading().unwrap();
            let mut common = dm.0.clone();
            for (m, _) in num.terms() {
                for (c, e) in common.iter_mut().zip(&m.0) {
                    *c = (*c).min(*e);
                }
            }
            if common.iter().all(|&e| e == 0) {
                return Ok(Self::monic_den(num, den));
            }
            let strip = |p: &MultiPoly| {
                MultiPoly::from_terms(
                    &vars,
                    p.terms().map(|(m, c)| {
                        (
                            m.0.iter().zip(&common).map(|(a, b)| a - b).collect(),
                            c.clone(),
                        )
                    }),
                )
            };
            return Ok(Self::monic_den(strip(&num), strip(&den)));
        }
        let (rn, sn) = num.to_rpoly();
        let (rd, sd) = den.to_rpoly();
        let g = gcd(&rn, &rd);
        let (rn, rd) = if g == RPoly::one() {
            (rn, rd)
        } else {
            (
                rn.div_exact(&g).expect("gcd divides numerator"),
                rd.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let n = MultiPoly::from_rpoly(&vars, &rn, &sn);
        let d = MultiPoly::from_rpoly(&vars, &rd, &sd);
        Ok(Self::monic_den(n, d))
    }

    fn monic_den(num: MultiPoly, den: MultiPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MultiPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::from_poly(MultiPoly::constant(vars, c))
    }

    pub fn from_int(vars: &Vars, c: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(vars, c))
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        Self::from_poly(MultiPoly::var(vars, idx))
    }

    /// Coordinate function by name.
    pub fn coord(vars: &Vars, name: &str) -> Result<Self> {
        Ok(Self::var(vars, vars.index_of(name)?))
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.num.depends_on(idx) || self.den.depends_on(idx)
    }

    /// Total degree of the numerator, used as a size measure for pivoting.
    pub fn weight(&self) -> (u32, u32, usize) {
        (
            self.num.total_degree(),
            self.den.total_degree(),
            self.num.num_terms() + self.den.num_terms(),
        )
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return Self::from_poly(self.num.add(&other.num));
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone()).expect("nonzero");
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den)).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.vars());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::normalize(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c.recip()));
        }
        Self::normalize(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.recip()?.pow((-e) as u32))
        }
    }

    /// Partial derivative with respect to the coordinate with index `idx`.
    pub fn partial(&self, idx: usize) -> Self {
        let dn = self.num.partial(idx);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.partial(idx);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone()).expect("nonzero denominator");
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Partial derivative by coordinate name.
    pub fn partial_by(&self, coord: &str) -> Result<Self> {
        Ok(self.partial(self.vars().index_of(coord)?))
    }

    /// Exact value at a rational point, `None` on a pole.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(point) / d)
        }
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.num.eval_f64(point) / self.den.eval_f64(point)
    }

    pub fn embed(&self, target: &Vars, map: &[usize]) -> Self {
        RationalFunction {
            num: self.num.embed(target, map),
            den: self.den.embed(target, map),
        }
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(names, f);
        }
        if self.num.num_terms() > 1 {
            write!(f, "(")?;
            self.num.fmt_with(names, f)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(names, f)?;
        }
        let bare = self.den.num_terms() == 1
            && self
                .den
                .leading()
                .map_or(false, |(m, _)| m.0.iter().filter(|&&e| e > 0).count() == 1);
        if bare {
            write!(f, "/")?;
            return self.den.fmt_with(names, f);
        }
        write!(f, "/(")?;
        self.den.fmt_with(names, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.vars().names().to_vec();
        self.fmt_with(&names, f)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                RationalFunction::$m(self, rhs)
            }
        }
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                RationalFunction::$m(&self, &rhs)
            }
        }
        impl $tr<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: &RationalFunction) -> RationalFunction {
                RationalFunction::$m(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(self)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction::neg(&self)
    }
}
