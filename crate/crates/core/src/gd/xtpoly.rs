//! Polynomials in x and the external time t with differential-polynomial coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{q, Q};

use super::diffpoly::DiffPoly;

/// Σ x^a t^b · P_{a,b}(u, u', …), keyed by (a, b).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct XtPoly {
    terms: BTreeMap<(u32, u32), DiffPoly>,
}

impl XtPoly {
    pub fn zero() -> Self {
        XtPoly::default()
    }

    pub fn from_diffpoly(p: DiffPoly, x_pow: u32, t_pow: u32) -> Self {
        let mut out = XtPoly::zero();
        out.add_term((x_pow, t_pow), p);
        out
    }

    pub fn constant(c: Q) -> Self {
        XtPoly::from_diffpoly(DiffPoly::constant(c), 0, 0)
    }

    pub fn x() -> Self {
        XtPoly::from_diffpoly(DiffPoly::one(), 1, 0)
    }

    pub fn t() -> Self {
        XtPoly::from_diffpoly(DiffPoly::one(), 0, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &DiffPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, k: (u32, u32), p: DiffPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_default();
        *slot = std::mem::take(slot) + p;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, x_pow: u32, t_pow: u32) -> DiffPoly {
        self.terms.get(&(x_pow, t_pow)).cloned().unwrap_or_default()
    }

    /// Degree in x (`None` for zero).
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = XtPoly::zero();
        for (k, p) in &self.terms {
            out.add_term(*k, p.scale(c));
        }
        out
    }

    pub fn mul_x2(&self) -> Self {
        XtPoly { terms: self.terms.iter().map(|((a, b), p)| ((a + 2, *b), p.clone())).collect() }
    }

    /// Total t-derivative: explicit t plus the chain rule through u.
    pub fn dt(&self) -> Self {
        let mut out = XtPoly::zero();
        for ((a, b), p) in &self.terms {
            if *b > 0 {
                out.add_term((*a, b - 1), p.scale(&q(*b as i64)));
            }
            out.add_term((*a, *b), p.dt());
        }
        out
    }

    pub fn dx(&self) -> Self {
        let mut out = XtPoly::zero();
        for ((a, b), p) in &self.terms {
            if *a > 0 {
                out.add_term((a - 1, *b), p.scale(&q(*a as i64)));
            }
        }
        out
    }

    /// Replace u^{(j)} by an XtPoly.
    pub fn substitute(&self, j: usize, by: &XtPoly) -> Self {
        let mut out = XtPoly::zero();
        for ((a, b), p) in &self.terms {
            let parts = p.coeffs_in(j);
            let mut pw = XtPoly::constant(q(1));
            for (k, c) in parts.into_iter().enumerate() {
                if k > 0 {
                    pw = pw * by.clone();
                }
                if !c.is_zero() {
                    out = out + XtPoly::from_diffpoly(c, *a, *b) * pw.clone();
                }
            }
        }
        out
    }

    pub fn max_order(&self) -> Option<usize> {
        self.terms.values().filter_map(|p| p.max_order()).max()
    }
}

impl Add for XtPoly {
    type Output = XtPoly;
    fn add(mut self, o: XtPoly) -> XtPoly {
        for (k, p) in o.terms {
            self.add_term(k, p);
        }
        self
    }
}

impl Sub for XtPoly {
    type Output = XtPoly;
    fn sub(self, o: XtPoly) -> XtPoly {
        self + (-o)
    }
}

impl Neg for XtPoly {
    type Output = XtPoly;
    fn neg(self) -> XtPoly {
        XtPoly { terms: self.terms.into_iter().map(|(k, p)| (k, -p)).collect() }
    }
}

impl Mul for XtPoly {
    type Output = XtPoly;
    fn mul(self, o: XtPoly) -> XtPoly {
        let mut out = XtPoly::zero();
        for ((a1, b1), p1) in &self.terms {
            for ((a2, b2), p2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), p1.clone() * p2.clone());
            }
        }
        out
    }
}

impl fmt::Display for XtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), p) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({p})")?;
            match a {
                0 => {}
                1 => write!(f, "*x")?,
                _ => write!(f, "*x^{a}")?,
            }
            match b {
                0 => {}
                1 => write!(f, "*t")?,
                _ => write!(f, "*t^{b}")?,
            }
        }
        Ok(())
    }
}
