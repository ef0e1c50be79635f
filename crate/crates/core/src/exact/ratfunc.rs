//! Rational functions in canonical form: coprime parts, monic denominator.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::field::Field;
use super::poly::{Poly, Var};
use super::ExactError;

#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

/// Canonical form of `num/den`.
pub fn ratfunc_normalize<F: Field>(num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>, ExactError> {
    RatFunc::new(num, den)
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        let var = num.var();
        if num.is_zero() {
            return Ok(RatFunc { num: Poly::zero(var), den: Poly::one(var) });
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let l = d.lead();
        let inv = F::one() / l;
        Ok(RatFunc { num: n.scale(&inv).with_var(var), den: d.scale(&inv).with_var(var) })
    }

    /// Build from parts already known to be coprime; only the denominator is made monic.
    pub(crate) fn from_coprime(num: Poly<F>, den: Poly<F>) -> Self {
        let inv = F::one() / den.lead();
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let var = p.var();
        RatFunc { num: p, den: Poly::one(var) }
    }

    pub fn constant(c: F, var: Var) -> Self {
        RatFunc::from_poly(Poly::constant(c, var))
    }

    pub fn zero(var: Var) -> Self {
        RatFunc::from_poly(Poly::zero(var))
    }

    pub fn one(var: Var) -> Self {
        RatFunc::constant(F::one(), var)
    }

    /// The indeterminate as a rational function.
    pub fn var_fn(var: Var) -> Self {
        RatFunc::from_poly(Poly::var_poly(var))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn var(&self) -> Var {
        self.num.var()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, at: &F) -> Result<F, ExactError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ExactError::Pole(at.to_string()));
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn scale(&self, c: &F) -> Self {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("denominator is nonzero")
    }

    pub fn pow(&self, e: i32) -> Result<Self, ExactError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(RatFunc::one(self.var()), |acc, _| acc * base.clone()))
    }

    pub fn derivative(&self) -> Self {
        let n = self.num.derivative() * self.den.clone() - self.num.clone() * self.den.derivative();
        RatFunc::new(n, self.den.clone() * self.den.clone()).expect("denominator is nonzero")
    }

    /// Substitute a rational function for the indeterminate.
    pub fn compose(&self, inner: &RatFunc<F>) -> Result<Self, ExactError> {
        let horner = |p: &Poly<F>| {
            p.coeffs().iter().rev().fold(RatFunc::zero(inner.var()), |acc, c| {
                acc * inner.clone() + RatFunc::constant(c.clone(), inner.var())
            })
        };
        let n = horner(&self.num);
        let d = horner(&self.den);
        if d.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(n / d)
    }

    /// Möbius substitution z ↦ (a z + b)/(c z + d).
    pub fn compose_mobius(&self, a: F, b: F, c: F, d: F) -> Result<Self, ExactError> {
        let var = self.var();
        let inner = RatFunc::new(Poly::new(vec![b, a], var), Poly::new(vec![d, c], var))?;
        self.compose(&inner)
    }

    /// Denominator split as Π (z − r)^k over the supplied candidate roots; returns the
    /// leftover factor (1 when every pole is among the candidates).
    pub fn strip_poles(&self, candidates: &[F]) -> (Vec<usize>, Poly<F>) {
        let var = self.var();
        let mut rest = self.den.clone();
        let mut orders = Vec::with_capacity(candidates.len());
        for r in candidates {
            let lin = Poly::new(vec![-r.clone(), F::one()], var);
            let mut k = 0;
            loop {
                let (qq, rem) = rest.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                rest = qq;
                k += 1;
            }
            orders.push(k);
        }
        (orders, rest.monic())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f)).expect("mapped denominator vanished")
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, o: RatFunc<F>) -> RatFunc<F> {
        if self.den == o.den {
            return RatFunc::new(self.num + o.num, self.den).expect("nonzero");
        }
        let n = self.num * o.den.clone() + o.num * self.den.clone();
        RatFunc::new(n, self.den * o.den).expect("nonzero")
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, o: RatFunc<F>) -> RatFunc<F> {
        self + (-o)
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc { num: -self.num, den: self.den }
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, o: RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero(self.var());
        }
        RatFunc::new(self.num * o.num, self.den * o.den).expect("nonzero")
    }
}

impl<F: Field> Div for RatFunc<F> {
    type Output = RatFunc<F>;
    /// Panics on division by the zero function.
    fn div(self, o: RatFunc<F>) -> RatFunc<F> {
        RatFunc::new(self.num * o.den, self.den * o.num).expect("division by the zero rational function")
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
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
    fn normalize_examples() {
        let r = ratfunc_normalize(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r.num(), &p(&[1, 1]));
        assert_eq!(r.den(), &p(&[1]));
        let r = ratfunc_normalize(p(&[]), p(&[0, 0, 0, 1])).unwrap();
        assert!(r.is_zero());
        assert_eq!(r.den(), &p(&[1]));
        let r = ratfunc_normalize(p(&[2, 2]), p(&[4])).unwrap();
        assert_eq!(r.num(), &Poly::new(vec![qf(1, 2), qf(1, 2)], Var::Z));
        assert_eq!(r.den(), &p(&[1]));
        assert_eq!(ratfunc_normalize(p(&[1]), p(&[])), Err(ExactError::ZeroDenominator));
    }

    #[test]
    fn mobius_inversion() {
        let r = RatFunc::new(p(&[0, 1]), p(&[1, 0, 1])).unwrap();
        let inv = r.compose_mobius(q(0), q(1), q(1), q(0)).unwrap();
        assert_eq!(inv, r);
    }
}
