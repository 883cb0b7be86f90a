//! Recursive dense polynomials over the integers, used for gcd computation.
//!
//! `P(v, cs)` is `Σ cs[k] · x_v^k` where every coefficient only involves
//! variables with index greater than `v`. Degree in the main variable is at
//! least one and the leading coefficient is nonzero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RPoly {
    C(BigInt),
    P(usize, Vec<RPoly>),
}

use RPoly::{C, P};

impl RPoly {
    pub fn zero() -> Self {
        C(BigInt::zero())
    }

    pub fn one() -> Self {
        C(BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, C(c) if c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        matches!(self, C(c) if c.abs().is_one())
    }

    fn main_var(&self) -> usize {
        match self {
            C(_) => usize::MAX,
            P(v, _) => *v,
        }
    }

    fn mk(v: usize, mut cs: Vec<RPoly>) -> RPoly {
        while cs.last().map_or(false, RPoly::is_zero) {
            cs.pop();
        }
        match cs.len() {
            0 => RPoly::zero(),
            1 => cs.pop().unwrap(),
            _ => P(v, cs),
        }
    }

    fn deg_in(&self, v: usize) -> usize {
        match self {
            P(w, cs) if *w == v => cs.len() - 1,
            _ => 0,
        }
    }

    fn lc_in(&self, v: usize) -> &RPoly {
        match self {
            P(w, cs) if *w == v => cs.last().unwrap(),
            _ => self,
        }
    }

    /// `x_v^s · self`, with `self` free of variables below `v`.
    fn shift(&self, v: usize, s: usize) -> RPoly {
        if s == 0 || self.is_zero() {
            return self.clone();
        }
        let mut cs = vec![RPoly::zero(); s];
        match self {
            P(w, bs) if *w == v => cs.extend(bs.iter().cloned()),
            _ => cs.push(self.clone()),
        }
        P(v, cs)
    }

    pub fn neg(&self) -> RPoly {
        match self {
            C(c) => C(-c),
            P(v, cs) => P(*v, cs.iter().map(RPoly::neg).collect()),
        }
    }

    pub fn add(&self, other: &RPoly) -> RPoly {
        match (self, other) {
            (C(a), C(b)) => C(a + b),
            _ => {
                let (va, vb) = (self.main_var(), other.main_var());
                if va < vb {
                    let P(_, cs) = self else { unreachable!() };
                    let mut cs = cs.clone();
                    cs[0] = cs[0].add(other);
                    RPoly::mk(va, cs)
                } else if vb < va {
                    other.add(self)
                } else {
                    let (P(_, a), P(_, b)) = (self, other) else { unreachable!() };
                    let n = a.len().max(b.len());
                    let cs = (0..n)
                        .map(|i| match (a.get(i), b.get(i)) {
                            (Some(x), Some(y)) => x.add(y),
                            (Some(x), None) => x.clone(),
                            (None, Some(y)) => y.clone(),
                            (None, None) => unreachable!(),
                        })
                        .collect();
                    RPoly::mk(va, cs)
                }
            }
        }
    }

    pub fn sub(&self, other: &RPoly) -> RPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RPoly) -> RPoly {
        if self.is_zero() || other.is_zero() {
            return RPoly::zero();
        }
        match (self, other) {
            (C(a), C(b)) => C(a * b),
            _ => {
                let (va, vb) = (self.main_var(), other.main_var());
                if va < vb {
                    let P(_, cs) = self else { unreachable!() };
                    P(va, cs.iter().map(|c| c.mul(other)).collect())
                } else if vb < va {
                    other.mul(self)
                } else {
                    let (P(_, a), P(_, b)) = (self, other) else { unreachable!() };
                    let mut cs = vec![RPoly::zero(); a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in b.iter().enumerate() {
                            if !y.is_zero() {
                                cs[i + j] = cs[i + j].add(&x.mul(y));
                            }
                        }
                    }
                    RPoly::mk(va, cs)
                }
            }
        }
    }

    pub fn pow(&self, e: usize) -> RPoly {
        let mut acc = RPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient, `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &RPoly) -> Option<RPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RPoly::zero());
        }
        match other {
            C(k) => self.div_int(k),
            P(vb, bs) => {
                let va = self.main_var();
                if va > *vb {
                    return None;
                }
                if va < *vb {
                    let P(_, cs) = self else { unreachable!() };
                    let qs: Option<Vec<RPoly>> = cs.iter().map(|c| c.div_exact(other)).collect();
                    return Some(RPoly::mk(va, qs?));
                }
                let db = bs.len() - 1;
                let lcb = bs.last().unwrap();
                let mut r = self.clone();
                let mut q = vec![RPoly::zero(); self.deg_in(va) + 1 - db.min(self.deg_in(va) + 1)];
                while !r.is_zero() && r.main_var() == va && r.deg_in(va) >= db {
                    let s = r.deg_in(va) - db;
                    let t = r.lc_in(va).div_exact(lcb)?;
                    r = r.sub(&t.shift(va, s).mul(other));
                    if s >= q.len() {
                        return None;
                    }
                    q[s] = t;
                }
                if !r.is_zero() {
                    return None;
                }
                Some(RPoly::mk(va, q))
            }
        }
    }

    fn div_int(&self, k: &BigInt) -> Option<RPoly> {
        match self {
            C(c) => {
                let (q, r) = c.div_rem(k);
                r.is_zero().then_some(C(q))
            }
            P(v, cs) => {
                let qs: Option<Vec<RPoly>> = cs.iter().map(|c| c.div_int(k)).collect();
                Some(P(*v, qs?))
            }
        }
    }

    /// Pseudo-remainder of `self` by `b` as polynomials in `x_v`.
    fn prem(&self, b: &RPoly, v: usize) -> RPoly {
        let db = b.deg_in(v);
        let da = self.deg_in(v);
        if self.main_var() != v || da < db {
            return self.clone();
        }
        let lcb = b.lc_in(v).clone();
        let mut r = self.clone();
        let mut e = da - db + 1;
        while !r.is_zero() && r.main_var() == v && r.deg_in(v) >= db {
            let s = r.deg_in(v) - db;
            let t = r.lc_in(v).shift(v, s).mul(b);
            r = r.mul(&lcb).sub(&t);
            e -= 1;
        }
        r.mul(&lcb.pow(e))
    }

    /// Gcd of the coefficients with respect to the main variable.
    pub fn content(&self) -> RPoly {
        match self {
            C(c) => C(c.abs()),
            P(_, cs) => {
                let mut g = RPoly::zero();
                for c in cs {
                    g = gcd(&g, c);
                    if g.is_unit() {
                        break;
                    }
                }
                g
            }
        }
    }

    fn leading_int_sign_negative(&self) -> bool {
        match self {
            C(c) => c.is_negative(),
            P(_, cs) => cs.last().unwrap().leading_int_sign_negative(),
        }
    }

    fn normalize_sign(self) -> RPoly {
        if self.leading_int_sign_negative() {
            self.neg()
        } else {
            self
        }
    }

    pub fn from_sparse(terms: Vec<(Vec<u32>, BigInt)>, nvars: usize) -> RPoly {
        build(terms, 0, nvars)
    }

    pub fn to_sparse(&self, nvars: usize, out: &mut Vec<(Vec<u32>, BigInt)>) {
        let mut e = vec![0u32; nvars];
        flatten(self, &mut e, out);
    }
}

fn build(terms: Vec<(Vec<u32>, BigInt)>, start: usize, nvars: usize) -> RPoly {
    let v = (start..nvars).find(|&i| terms.iter().any(|(e, _)| e[i] > 0));
    match v {
        None => C(terms.into_iter().map(|(_, c)| c).sum()),
        Some(v) => {
            let maxd = terms.iter().map(|(e, _)| e[v]).max().unwrap() as usize;
            let mut groups: Vec<Vec<(Vec<u32>, BigInt)>> = vec![Vec::new(); maxd + 1];
            for (e, c) in terms {
                groups[e[v] as usize].push((e, c));
            }
            let cs = groups
                .into_iter()
                .map(|g| {
                    if g.is_empty() {
                        RPoly::zero()
                    } else {
                        build(g, v + 1, nvars)
                    }
                })
                .collect();
            RPoly::mk(v, cs)
        }
    }
}

fn flatten(p: &RPoly, e: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, BigInt)>) {
    match p {
        C(c) => {
            if !c.is_zero() {
                out.push((e.clone(), c.clone()));
            }
        }
        P(v, cs) => {
            for (k, c) in cs.iter().enumerate() {
                e[*v] = k as u32;
                flatten(c, e, out);
            }
            e[*v] = 0;
        }
    }
}

/// Greatest common divisor, normalised to a positive leading integer coefficient.
pub(crate) fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    if let (C(x), C(y)) = (a, b) {
        return C(x.gcd(y));
    }
    if a.is_unit() || b.is_unit() {
        return RPoly::one();
    }
    let (va, vb) = (a.main_var(), b.main_var());
    if va < vb {
        return gcd(&a.content(), b);
    }
    if vb < va {
        return gcd(a, &b.content());
    }
    let v = va;
    let ca = a.content();
    let cb = b.content();
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let (pa, pb) = if pa.deg_in(v) >= pb.deg_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    let g = subresultant(pa, pb, v);
    let g = if g.main_var() == v {
        let cg = g.content();
        g.div_exact(&cg).expect("content divides")
    } else {
        RPoly::one()
    };
    c.mul(&g).normalize_sign()
}

/// Last nonzero member of the subresultant remainder sequence of two
/// primitive polynomials in `x_v` with `deg a >= deg b >= 1`.
fn subresultant(mut a: RPoly, mut b: RPoly, v: usize) -> RPoly {
    let mut g = RPoly::one();
    let mut h = RPoly::one();
    loop {
        let delta = a.deg_in(v) - b.deg_in(v);
        let r = a.prem(&b, v);
        if r.is_zero() {
            return b;
        }
        if r.main_var() != v {
            return RPoly::one();
        }
        a = b;
        let divisor = g.mul(&h.pow(delta));
        b = r.div_exact(&divisor).expect("subresultant division is exact");
        g = a.lc_in(v).clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            d => g
                .pow(d)
                .div_exact(&h.pow(d - 1))
                .expect("subresultant division is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(&[u32], i64)], n: usize) -> RPoly {
        RPoly::from_sparse(
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))).collect(),
            n,
        )
    }

    #[test]
    fn sparse_round_trip() {
        let a = p(&[(&[2, 0], 1), (&[1, 1], -3), (&[0, 0], 5)], 2);
        let mut out = Vec::new();
        a.to_sparse(2, &mut out);
        out.sort();
        assert_eq!(out.len(), 3);
        assert_eq!(RPoly::from_sparse(out, 2), a);
    }

    #[test]
    fn gcd_difference_of_squares() {
        // x^2 - y^2 and x^2 - 2xy + y^2 share x - y
        let a = p(&[(&[2, 0], 1), (&[0, 2], -1)], 2);
        let b = p(&[(&[2, 0], 1), (&[1, 1], -2), (&[0, 2], 1)], 2);
        let g = gcd(&a, &b);
        assert_eq!(g, p(&[(&[1, 0], 1), (&[0, 1], -1)], 2));
    }

    #[test]
    fn gcd_with_content() {
        // 6x^2y + 6xy and 4xy^2 + 4y^2 -> 2y(x+1)
        let a = p(&[(&[2, 1], 6), (&[1, 1], 6)], 2);
        let b = p(&[(&[1, 2], 4), (&[0, 2], 4)], 2);
        let g = gcd(&a, &b);
        assert_eq!(g, p(&[(&[1, 1], 2), (&[0, 1], 2)], 2));
    }

    #[test]
    fn exact_division() {
        let a = p(&[(&[2, 0], 1), (&[0, 2], -1)], 2);
        let b = p(&[(&[1, 0], 1), (&[0, 1], 1)], 2);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, p(&[(&[1, 0], 1), (&[0, 1], -1)], 2));
        let c = p(&[(&[1, 0], 1), (&[0, 0], 1)], 2);
        assert!(a.div_exact(&c).is_none());
    }

    #[test]
    fn coprime_trivariate() {
        let a = p(&[(&[1, 1, 0], 1), (&[0, 0, 1], 1)], 3);
        let b = p(&[(&[1, 0, 1], 1), (&[0, 1, 0], 1)], 3);
        assert_eq!(gcd(&a, &b), RPoly::one());
        let ab = a.mul(&b);
        let a2 = a.mul(&a);
        assert_eq!(gcd(&ab, &a2), a);
    }
}
