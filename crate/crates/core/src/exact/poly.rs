//! Dense univariate polynomials, ascending coefficients, trailing zeros stripped.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::field::Field;

/// Name of the indeterminate, used for printing and for catching accidental mixing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Var {
    X,
    Z,
    U,
    Xi,
    S,
    W,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Z => "z",
            Var::U => "u",
            Var::Xi => "xi",
            Var::S => "s",
            Var::W => "w",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F> {
    coeffs: Vec<F>,
    var: Var,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>, var: Var) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, var }
    }

    pub fn zero(var: Var) -> Self {
        Poly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: F, var: Var) -> Self {
        Poly::new(vec![c], var)
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(F::one(), var)
    }

    /// The indeterminate itself.
    pub fn var_poly(var: Var) -> Self {
        Poly::new(vec![F::zero(), F::one()], var)
    }

    /// `c·var^k`.
    pub fn monomial(c: F, k: usize, var: Var) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Poly::new(v, var)
    }

    /// Π (var − r) over the given roots.
    pub fn from_roots(roots: &[F], var: Var) -> Self {
        roots.iter().fold(Poly::one(var), |acc, r| {
            acc * Poly::new(vec![-r.clone(), F::one()], var)
        })
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with nonzero coefficient (zero polynomial gives `None`).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, at: &F) -> F {
        self.coeffs.iter().rev().fold(F::zero(), |acc, c| acc * at.clone() + c.clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(), self.var)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
            self.var,
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(self.var), |acc, _| acc * self.clone())
    }

    /// Multiply by var^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly::new(v, self.var)
    }

    /// Divide by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect(), self.var)
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::zero(self.var), self.clone());
        }
        let mut quo = vec![F::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quo, self.var), Poly::new(rem, self.var))
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = if r.is_zero() { r } else { r.monic() };
        }
        a.monic()
    }

    /// Substitute another polynomial for the indeterminate (Horner).
    pub fn compose(&self, inner: &Poly<F>) -> Poly<F> {
        self.coeffs.iter().rev().fold(Poly::zero(inner.var), |acc, c| {
            acc * inner.clone() + Poly::constant(c.clone(), inner.var)
        })
    }

    /// Coefficients reversed to length `len` (w^{len-1} p(1/w)); requires len > degree.
    pub fn reversed(&self, len: usize) -> Vec<F> {
        let mut v: Vec<F> = (0..len).map(|k| self.coeff(k)).collect();
        v.reverse();
        v
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect(), self.var)
    }

    /// Only even-degree coefficients are nonzero.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| k % 2 == 0 || c.is_zero())
    }

    /// Only odd-degree coefficients are nonzero.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().enumerate().all(|(k, c)| k % 2 == 1 || c.is_zero())
    }
}

fn zip_with<F: Field>(a: &Poly<F>, b: &Poly<F>, op: impl Fn(F, F) -> F) -> Poly<F> {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|k| op(a.coeff(k), b.coeff(k))).collect(), a.var)
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        zip_with(&self, &o, |x, y| x + y)
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        zip_with(&self, &o, |x, y| x - y)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect(), self.var)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.var);
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(v, self.var)
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = self.var.name();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*{v}")?,
                _ => write!(f, "({c})*{v}^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{q, qf, Q};

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&k| q(k)).collect(), Var::Z)
    }

    #[test]
    fn divrem_roundtrip() {
        let a = p(&[1, 2, 3, 4, 5]);
        let b = p(&[-1, 0, 2]);
        let (qq, r) = a.divrem(&b);
        assert_eq!(qq * b + r.clone(), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_common_factor() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]).pow(2);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn compose_shift() {
        let a = p(&[0, 0, 1]);
        let shifted = a.compose(&p(&[1, 1]));
        assert_eq!(shifted, p(&[1, 2, 1]));
        assert_eq!(a.eval(&qf(1, 2)), qf(1, 4));
    }
}
