//! Sparse multivariate polynomials and unnormalized fractions of them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::poly::{Poly, Var};

/// Polynomial in `nvars` indeterminates, keyed by exponent vectors.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: F, nvars: usize) -> Self {
        let mut p = MPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(F::one(), nvars)
    }

    /// The `i`-th indeterminate.
    pub fn var(i: usize, nvars: usize) -> Self {
        MPoly::monomial(F::one(), &unit(i, 1, nvars))
    }

    pub fn monomial(c: F, exps: &[u32]) -> Self {
        let mut p = MPoly::zero(exps.len());
        p.add_term(exps.to_vec(), c);
        p
    }

    /// Lift a univariate polynomial into variable `i`.
    pub fn from_poly(p: &Poly<F>, i: usize, nvars: usize) -> Self {
        let mut out = MPoly::zero(nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(unit(i, k as u32, nvars), c.clone());
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &F)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> F {
        self.terms.get(exps).cloned().unwrap_or_else(F::zero)
    }

    /// Highest exponent of variable `i` (`None` for zero).
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(MPoly::one(self.nvars), |acc, _| acc * self.clone())
    }

    /// ∂/∂(var i).
    pub fn diff(&self, i: usize) -> Self {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, v.clone() * F::from_i64(e[i] as i64));
        }
        out
    }

    /// Substitute a polynomial for variable `i`.
    pub fn substitute(&self, i: usize, by: &MPoly<F>) -> Self {
        let mut powers: Vec<MPoly<F>> = vec![MPoly::one(self.nvars)];
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().cloned().expect("nonempty") * by.clone();
                powers.push(next);
            }
            let mut ne = e.clone();
            ne[i] = 0;
            out = out + MPoly::monomial(v.clone(), &ne) * powers[k].clone();
        }
        out
    }

    /// Reduce modulo var_i² = `square`, leaving var_i to degree ≤ 1.
    pub fn reduce_square(&self, i: usize, square: &MPoly<F>) -> Self {
        let mut powers: Vec<MPoly<F>> = vec![MPoly::one(self.nvars)];
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            let k = (e[i] / 2) as usize;
            while powers.len() <= k {
                let next = powers.last().cloned().expect("nonempty") * square.clone();
                powers.push(next);
            }
            let mut ne = e.clone();
            ne[i] %= 2;
            out = out + MPoly::monomial(v.clone(), &ne) * powers[k].clone();
        }
        out
    }

    /// Evaluate variable `i` at a field value.
    pub fn eval_var(&self, i: usize, at: &F) -> Self {
        self.substitute(i, &MPoly::constant(at.clone(), self.nvars))
    }

    /// Full evaluation.
    pub fn eval(&self, at: &[F]) -> F {
        self.terms.iter().fold(F::zero(), |acc, (e, v)| {
            acc + e.iter().zip(at).fold(v.clone(), |p, (&k, a)| p * a.pow(k))
        })
    }

    /// Coefficients in variable `i` as polynomials in the remaining variables (slot `i` zeroed).
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly<F>> {
        let d = self.degree_in(i).map_or(0, |d| d as usize + 1);
        let mut out = vec![MPoly::zero(self.nvars); d];
        for (e, v) in &self.terms {
            let mut ne = e.clone();
            ne[i] = 0;
            out[e[i] as usize].add_term(ne, v.clone());
        }
        out
    }

    /// Restrict to a univariate polynomial when only variable `i` occurs.
    pub fn to_poly(&self, i: usize, var: Var) -> Option<Poly<F>> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut c = vec![F::zero(); d + 1];
        for (e, v) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k != 0) {
                return None;
            }
            c[e[i] as usize] = v.clone();
        }
        Some(Poly::new(c, var))
    }

    /// Constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        let mut out = MPoly::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), f(v));
        }
        out
    }
}

fn unit(i: usize, k: u32, n: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = k;
    e
}

impl<F: Field> Add for MPoly<F> {
    type Output = MPoly<F>;
    fn add(mut self, o: MPoly<F>) -> MPoly<F> {
        for (e, v) in o.terms {
            self.add_term(e, v);
        }
        self
    }
}

impl<F: Field> Sub for MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, o: MPoly<F>) -> MPoly<F> {
        self + (-o)
    }
}

impl<F: Field> Neg for MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        MPoly { nvars: self.nvars, terms: self.terms.into_iter().map(|(e, v)| (e, -v)).collect() }
    }
}

impl<F: Field> Mul for MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, o: MPoly<F>) -> MPoly<F> {
        let mut out = MPoly::zero(self.nvars);
        for (ea, va) in &self.terms {
            for (eb, vb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, va.clone() * vb.clone());
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, v) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({v})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*v{i}")?,
                    _ => write!(f, "*v{i}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// Fraction of multivariate polynomials; never reduced, compared by cross-multiplication.
#[derive(Clone, Debug)]
pub struct MRat<F> {
    pub num: MPoly<F>,
    pub den: MPoly<F>,
}

impl<F: Field> MRat<F> {
    /// Panics on a zero denominator.
    pub fn new(num: MPoly<F>, den: MPoly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        MRat { num, den }
    }

    pub fn from_poly(p: MPoly<F>) -> Self {
        let n = p.nvars();
        MRat { num: p, den: MPoly::one(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn equals(&self, o: &MRat<F>) -> bool {
        self.num.clone() * o.den.clone() == o.num.clone() * self.den.clone()
    }

    pub fn diff(&self, i: usize) -> Self {
        MRat {
            num: self.num.diff(i) * self.den.clone() - self.num.clone() * self.den.diff(i),
            den: self.den.clone() * self.den.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        MRat::new(self.den.clone(), self.num.clone())
    }

    pub fn reduce_square(&self, i: usize, square: &MPoly<F>) -> Self {
        MRat { num: self.num.reduce_square(i, square), den: self.den.reduce_square(i, square) }
    }

    pub fn eval(&self, at: &[F]) -> Option<F> {
        let d = self.den.eval(at);
        (!d.is_zero()).then(|| self.num.eval(at) / d)
    }
}

impl<F: Field> Add for MRat<F> {
    type Output = MRat<F>;
    fn add(self, o: MRat<F>) -> MRat<F> {
        if self.den == o.den {
            return MRat { num: self.num + o.num, den: self.den };
        }
        MRat { num: self.num * o.den.clone() + o.num * self.den.clone(), den: self.den * o.den }
    }
}

impl<F: Field> Sub for MRat<F> {
    type Output = MRat<F>;
    fn sub(self, o: MRat<F>) -> MRat<F> {
        self + (-o)
    }
}

impl<F: Field> Neg for MRat<F> {
    type Output = MRat<F>;
    fn neg(self) -> MRat<F> {
        MRat { num: -self.num, den: self.den }
    }
}

impl<F: Field> Mul for MRat<F> {
    type Output = MRat<F>;
    fn mul(self, o: MRat<F>) -> MRat<F> {
        MRat { num: self.num * o.num, den: self.den * o.den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{q, Q};

    #[test]
    fn substitution_and_reduction() {
        let x = MPoly::<Q>::var(0, 2);
        let z = MPoly::<Q>::var(1, 2);
        let p = z.pow(3) + x.clone() * z.clone();
        let sq = MPoly::one(2) - x.pow(2);
        let r = p.reduce_square(1, &sq);
        assert_eq!(r, (sq.clone() + x.clone()) * z.clone());
        let s = p.substitute(1, &(x.clone() + MPoly::one(2)));
        assert_eq!(s.eval(&[q(2), q(0)]), q(27 + 6));
    }

    #[test]
    fn fraction_equality() {
        let x = MPoly::<Q>::var(0, 1);
        let a = MRat::new(x.clone() * x.clone(), x.clone());
        let b = MRat::from_poly(x.clone());
        assert!(a.equals(&b));
        assert!(a.diff(0).equals(&MRat::from_poly(MPoly::one(1))));
    }
}
