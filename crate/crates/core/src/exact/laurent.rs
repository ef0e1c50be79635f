//! Truncated Laurent series, residues, and polynomial parts at infinity.
//!
//! A series at a finite point `p` is in the local parameter `w = z − p`; at infinity the
//! local parameter is `w = 1/z`. Coefficients are known for exponents `< order`.

use std::fmt;

use super::field::{qf, Field};
use super::poly::{Poly, Var};
use super::ratfunc::RatFunc;
use super::ExactError;

#[derive(Clone, PartialEq, Debug)]
pub enum Point<F> {
    Finite(F),
    Infinity,
}

impl<F: fmt::Display> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(p) => write!(f, "{p}"),
            Point::Infinity => write!(f, "oo"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentSeries<F> {
    pub point: Point<F>,
    low: i64,
    coeffs: Vec<F>,
    order: i64,
}

impl<F: Field> LaurentSeries<F> {
    /// Build from raw coefficients starting at exponent `low`, truncated at `order`.
    /// Leading zeros are absorbed so the lowest stored coefficient is nonzero.
    pub fn new(point: Point<F>, low: i64, coeffs: Vec<F>, order: i64) -> Self {
        let mut low = low;
        let mut c: Vec<F> = coeffs;
        let keep = (order - low).max(0) as usize;
        c.truncate(keep);
        let lead_zeros = c.iter().take_while(|a| a.is_zero()).count();
        if lead_zeros == c.len() {
            return LaurentSeries { point, low: order, coeffs: Vec::new(), order };
        }
        c.drain(..lead_zeros);
        low += lead_zeros as i64;
        LaurentSeries { point, low, coeffs: c, order }
    }

    pub fn zero(point: Point<F>, order: i64) -> Self {
        LaurentSeries { point, low: order, coeffs: Vec::new(), order }
    }

    /// Lowest exponent with a nonzero coefficient (`order` for the zero series).
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of w^e; zero below `low`. Panics if `e ≥ order` (unknown).
    pub fn coeff(&self, e: i64) -> F {
        assert!(e < self.order, "coefficient w^{e} beyond truncation order {}", self.order);
        if e < self.low {
            return F::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_else(F::zero)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        LaurentSeries::new(self.point.clone(), self.low, self.coeffs.clone(), order)
    }

    pub fn scale(&self, c: &F) -> Self {
        LaurentSeries::new(
            self.point.clone(),
            self.low,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.order,
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let low = self.low.min(o.low).min(order);
        let v = (low..order).map(|e| self.coeff(e) + o.coeff(e)).collect();
        LaurentSeries::new(self.point.clone(), low, v, order)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            let order = (self.order + o.low).min(o.order + self.low);
            return LaurentSeries::zero(self.point.clone(), order);
        }
        let low = self.low + o.low;
        let order = (self.order + o.low).min(o.order + self.low);
        let n = (order - low).max(0) as usize;
        let mut v = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n || a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentSeries::new(self.point.clone(), low, v, order)
    }

    /// Multiplicative inverse; `None` for the zero series.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = (self.order - self.low) as usize;
        let inv = series_inverse(&self.coeffs, n);
        Some(LaurentSeries::new(self.point.clone(), -self.low, inv, -self.low + n as i64))
    }

    /// Principal part Σ_{e<0} c_e w^e as a rational function in the original variable.
    pub fn principal_part(&self, var: Var) -> Result<RatFunc<F>, ExactError> {
        let mut acc = RatFunc::zero(var);
        for e in self.low..0.min(self.order) {
            let c = self.coeff(e);
            if c.is_zero() {
                continue;
            }
            let term = match &self.point {
                Point::Finite(p) => {
                    let base = Poly::new(vec![-p.clone(), F::one()], var);
                    RatFunc::new(Poly::constant(c, var), base.pow((-e) as u32))?
                }
                Point::Infinity => RatFunc::from_poly(Poly::monomial(c, (-e) as usize, var)),
            };
            acc = acc + term;
        }
        Ok(acc)
    }
}

impl<F: Field> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.point {
            Point::Finite(_) => "(z-p)",
            Point::Infinity => "(1/z)",
        };
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write!(f, "({c})*{w}^{} + ", self.low + k as i64)?;
        }
        write!(f, "O({w}^{}) at {}", self.order, self.point)
    }
}

/// First `n` coefficients of 1/a for a power series with a[0] ≠ 0.
pub fn series_inverse<F: Field>(a: &[F], n: usize) -> Vec<F> {
    let mut out: Vec<F> = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let a0 = a[0].clone();
    out.push(F::one() / a0.clone());
    for k in 1..n {
        let mut s = F::zero();
        for j in 1..=k.min(a.len().saturating_sub(1)) {
            s = s + a[j].clone() * out[k - j].clone();
        }
        out.push(-s / a0.clone());
    }
    out
}

/// First `n` coefficients of (1 + s₁w + …)^α for rational α (recurrence from s·f′ = α·s′·f).
pub fn series_power<F: Field>(s: &[F], alpha: &F, n: usize) -> Vec<F> {
    let mut f: Vec<F> = Vec::with_capacity(n);
    if n == 0 {
        return f;
    }
    debug_assert!(s[0].is_one());
    f.push(F::one());
    for k in 1..n {
        let mut acc = F::zero();
        for j in 1..=k.min(s.len().saturating_sub(1)) {
            let w = (alpha.clone() + F::one()) * F::from_i64(j as i64) - F::from_i64(k as i64);
            acc = acc + w * s[j].clone() * f[k - j].clone();
        }
        f.push(acc / F::from_i64(k as i64));
    }
    f
}

fn truncated_div<F: Field>(num: &[F], den: &[F], n: usize) -> Vec<F> {
    let inv = series_inverse(den, n);
    (0..n)
        .map(|k| (0..=k).fold(F::zero(), |acc, j| acc + num.get(j).cloned().unwrap_or_else(F::zero) * inv[k - j].clone()))
        .collect()
}

/// Laurent expansion of `f` at `point` with all coefficients of exponent `< order`.
pub fn laurent_expand<F: Field>(f: &RatFunc<F>, point: &Point<F>, order: i64) -> LaurentSeries<F> {
    if f.is_zero() {
        return LaurentSeries::zero(point.clone(), order);
    }
    let (num, den, shift) = match point {
        Point::Finite(p) => {
            let var = f.var();
            let sub = Poly::new(vec![p.clone(), F::one()], var);
            let n = f.num().compose(&sub);
            let d = f.den().compose(&sub);
            let vn = n.valuation().unwrap_or(0);
            let vd = d.valuation().unwrap_or(0);
            (n.coeffs()[vn..].to_vec(), d.coeffs()[vd..].to_vec(), vn as i64 - vd as i64)
        }
        Point::Infinity => {
            let dn = f.num().degree().unwrap_or(0);
            let dd = f.den().degree().unwrap_or(0);
            (f.num().reversed(dn + 1), f.den().reversed(dd + 1), dd as i64 - dn as i64)
        }
    };
    let n = (order - shift).max(0) as usize;
    let c = truncated_div(&num, &den, n);
    LaurentSeries::new(point.clone(), shift, c, order)
}

/// Total pole order (finite poles plus the pole at infinity, if any).
pub fn total_pole_order<F: Field>(f: &RatFunc<F>) -> i64 {
    let dd = f.den().degree().unwrap_or(0) as i64;
    let dn = f.num().degree().unwrap_or(0) as i64;
    dd + (dn - dd).max(0)
}

/// Expansion with the default truncation 2·(total pole order) + 8.
pub fn laurent_expand_default<F: Field>(f: &RatFunc<F>, point: &Point<F>) -> LaurentSeries<F> {
    laurent_expand(f, point, 2 * total_pole_order(f) + 8)
}

/// Residue of `f(z) dz` at `point` (at infinity: minus the coefficient of 1/z).
pub fn residue_at<F: Field>(f: &RatFunc<F>, point: &Point<F>) -> F {
    match point {
        Point::Finite(_) => laurent_expand(f, point, 0).coeff(-1),
        Point::Infinity => -laurent_expand(f, point, 2).coeff(1),
    }
}

/// Expansion at infinity, in w = 1/z, of `numer/√sqrt_arg` with the branch √sqrt_arg ~ +z^{d/2},
/// keeping exponents of w below `order`.
pub fn sqrt_quotient_at_infinity<F: Field>(
    numer: &Poly<F>,
    sqrt_arg: &Poly<F>,
    order: i64,
) -> Result<LaurentSeries<F>, ExactError> {
    let d = sqrt_arg.degree().ok_or(ExactError::InvalidBranchData)?;
    if d % 2 != 0 || !sqrt_arg.is_monic() {
        return Err(ExactError::InvalidBranchData);
    }
    let half = (d / 2) as i64;
    let Some(dn) = numer.degree() else {
        return Ok(LaurentSeries::zero(Point::Infinity, order));
    };
    let low = half - dn as i64;
    let n = (order - low).max(0) as usize;
    let s = sqrt_arg.reversed(d + 1);
    let g = series_power(&s, &F::from_q(&qf(-1, 2)), n);
    let a = numer.reversed(dn + 1);
    let c: Vec<F> = (0..n)
        .map(|k| (0..=k.min(dn)).fold(F::zero(), |acc, j| acc + a[j].clone() * g[k - j].clone()))
        .collect();
    Ok(LaurentSeries::new(Point::Infinity, low, c, order))
}

/// Pol(numer/√sqrt_arg): the polynomial part at infinity with the branch √sqrt_arg ~ +z^{d/2}.
pub fn polynomial_part_at_infinity<F: Field>(numer: &Poly<F>, sqrt_arg: &Poly<F>) -> Result<Poly<F>, ExactError> {
    let ser = sqrt_quotient_at_infinity(numer, sqrt_arg, 1)?;
    let var = numer.var();
    if ser.is_zero() || ser.low() > 0 {
        return Ok(Poly::zero(var));
    }
    let top = (-ser.low()) as usize;
    Ok(Poly::new((0..=top).map(|k| ser.coeff(-(k as i64))).collect(), var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{q, Q};

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&k| q(k)).collect(), Var::Z)
    }

    #[test]
    fn simple_pole() {
        let f = RatFunc::new(p(&[1]), p(&[-1, 1])).unwrap();
        let s = laurent_expand(&f, &Point::Finite(q(1)), 2);
        assert_eq!(s.low(), -1);
        assert_eq!(s.coeff(-1), q(1));
        assert_eq!(s.coeff(0), q(0));
        assert_eq!(s.coeff(1), q(0));
    }

    #[test]
    fn double_pole_partial_fractions() {
        // z/((z-1)^2 (z+1)): 1/2 (z-1)^-2 + 1/4 (z-1)^-1 + ...
        let den = p(&[-1, 1]).pow(2) * p(&[1, 1]);
        let f = RatFunc::new(p(&[0, 1]), den).unwrap();
        let s = laurent_expand(&f, &Point::Finite(q(1)), 1);
        assert_eq!(s.low(), -2);
        assert_eq!(s.coeff(-2), qf(1, 2));
        assert_eq!(residue_at(&f, &Point::Finite(q(1))), qf(1, 4));
    }

    #[test]
    fn expansion_at_infinity() {
        let f = RatFunc::new(p(&[1, 0, 1]), p(&[0, 1])).unwrap();
        let s = laurent_expand(&f, &Point::Infinity, 3);
        assert_eq!(s.low(), -1);
        assert_eq!(s.coeff(-1), q(1));
        assert_eq!(s.coeff(0), q(0));
        assert_eq!(s.coeff(1), q(1));
        assert_eq!(s.coeff(2), q(0));
    }

    #[test]
    fn pol_examples() {
        let x3 = Poly::<Q>::monomial(q(1), 3, Var::X);
        let r = Poly::new(vec![q(-1), q(0), q(1)], Var::X);
        assert_eq!(
            polynomial_part_at_infinity(&x3, &r).unwrap(),
            Poly::new(vec![qf(1, 2), q(0), q(1)], Var::X)
        );
        assert!(polynomial_part_at_infinity(&Poly::one(Var::X), &r).unwrap().is_zero());
        let bad = Poly::new(vec![q(-1), q(0), q(2)], Var::X);
        assert_eq!(polynomial_part_at_infinity(&x3, &bad), Err(ExactError::InvalidBranchData));
        let odd = Poly::new(vec![q(-1), q(1)], Var::X);
        assert_eq!(polynomial_part_at_infinity(&x3, &odd), Err(ExactError::InvalidBranchData));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = RatFunc::new(p(&[2, 1]), p(&[0, 0, 1, 3])).unwrap();
        let s = laurent_expand(&f, &Point::Finite(q(0)), 6);
        let inv = s.inverse().unwrap();
        let one = s.mul(&inv);
        assert_eq!(one.coeff(0), q(1));
        for e in 1..one.order() {
            assert_eq!(one.coeff(e), q(0));
        }
    }
}
