//! Differential polynomials in u(t) with rational coefficients.
//!
//! A monomial is an exponent vector `e` with `e[j]` the power of the j-th t-derivative of u.
//! Its ħ-grade is Σ j·e[j].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exact::{q, Q};

/// Exponent vector with trailing zeros removed.
pub type DiffMono = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffPoly {
    terms: BTreeMap<DiffMono, Q>,
}

fn trim(mut e: DiffMono) -> DiffMono {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn one() -> Self {
        DiffPoly::constant(Q::one())
    }

    /// The j-th derivative u^{(j)}.
    pub fn u(j: usize) -> Self {
        let mut e = vec![0; j + 1];
        e[j] = 1;
        DiffPoly::monomial(Q::one(), e)
    }

    pub fn monomial(c: Q, e: DiffMono) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(e, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMono, &Q)> {
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

    fn add_term(&mut self, e: DiffMono, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.terms.get(&trim(e.to_vec())).cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = DiffPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(DiffPoly::one(), |acc, _| acc * self.clone())
    }

    /// Highest derivative order present (`None` if no u-dependence).
    pub fn max_order(&self) -> Option<usize> {
        self.terms.keys().filter(|e| !e.is_empty()).map(|e| e.len() - 1).max()
    }

    /// Highest power of u^{(j)}.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|e| e.get(j).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    pub fn grade_of(e: &[u32]) -> u32 {
        e.iter().enumerate().map(|(j, &k)| j as u32 * k).sum()
    }

    /// Part of ħ-grade `g`.
    pub fn grade_part(&self, g: u32) -> Self {
        DiffPoly { terms: self.terms.iter().filter(|(e, _)| Self::grade_of(e) == g).map(|(e, v)| (e.clone(), v.clone())).collect() }
    }

    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.terms.keys().map(|e| Self::grade_of(e)).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Total t-derivative.
    pub fn dt(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (e, v) in &self.terms {
            for (j, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut ne = e.clone();
                ne[j] -= 1;
                if ne.len() <= j + 1 {
                    ne.resize(j + 2, 0);
                }
                ne[j + 1] += 1;
                out.add_term(ne, v * q(k as i64));
            }
        }
        out
    }

    pub fn dt_n(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.dt())
    }

    /// Split as Σ_k (u^{(j)})^k · coefficient_k with coefficients free of u^{(j)}.
    pub fn coeffs_in(&self, j: usize) -> Vec<DiffPoly> {
        let d = self.degree_in(j) as usize;
        let mut out = vec![DiffPoly::zero(); d + 1];
        for (e, v) in &self.terms {
            let k = e.get(j).copied().unwrap_or(0) as usize;
            let mut ne = e.clone();
            if j < ne.len() {
                ne[j] = 0;
            }
            out[k].add_term(ne, v.clone());
        }
        out
    }

    /// Formal antiderivative in the variable u^{(j)} (treating it as independent).
    fn integrate_in(&self, j: usize) -> Self {
        let mut out = DiffPoly::zero();
        for (e, v) in &self.terms {
            let mut ne = e.clone();
            if ne.len() <= j {
                ne.resize(j + 1, 0);
            }
            ne[j] += 1;
            let k = ne[j];
            out.add_term(ne, v / q(k as i64));
        }
        out
    }

    /// The unique antiderivative with zero constant term, or `None` if `self` is not a total derivative.
    pub fn antiderivative(&self) -> Option<Self> {
        let mut rest = self.clone();
        let mut acc = DiffPoly::zero();
        while !rest.is_zero() {
            let n = rest.max_order()?;
            if n == 0 {
                return None;
            }
            let parts = rest.coeffs_in(n);
            if parts.len() != 2 {
                return None;
            }
            let piece = parts[1].integrate_in(n - 1);
            rest = rest - piece.dt();
            acc = acc + piece;
        }
        Some(acc)
    }

    /// Substitute u^{(j)} ↦ `by`.
    pub fn substitute(&self, j: usize, by: &DiffPoly) -> Self {
        let parts = self.coeffs_in(j);
        let mut out = DiffPoly::zero();
        let mut pw = DiffPoly::one();
        for (k, c) in parts.into_iter().enumerate() {
            if k > 0 {
                pw = pw * by.clone();
            }
            out = out + c * pw.clone();
        }
        out
    }

    /// Evaluate on numeric jets u^{(j)} = jet[j].
    pub fn eval(&self, jet: &[Q]) -> Q {
        self.terms.iter().fold(Q::zero(), |acc, (e, v)| {
            acc + e.iter().enumerate().fold(v.clone(), |p, (j, &k)| {
                p * num_traits::pow(jet.get(j).cloned().unwrap_or_else(Q::zero), k as usize)
            })
        })
    }

    /// Plain-text monomial such as `u^3` or `u*u''`; empty for the unit monomial.
    pub fn mono_name(e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (j, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let base = format!("u{}", "'".repeat(j));
            parts.push(if k == 1 { base } else { format!("{base}^{k}") });
        }
        parts.join("*")
    }

    /// Terms ordered by descending ħ-grade, then descending polynomial degree.
    pub fn ordered_terms(&self) -> Vec<(DiffMono, Q)> {
        let mut v: Vec<(DiffMono, Q)> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then(Self::grade_of(a).cmp(&Self::grade_of(b))).then(b.cmp(a))
        });
        v
    }
}

/// Write `c*name` terms joined with signs into a single string.
pub fn format_signed_terms(terms: &[(Q, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, name)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        match (a.is_one(), name.is_empty()) {
            (_, true) => s.push_str(&a.to_string()),
            (true, false) => s.push_str(name),
            (false, false) => s.push_str(&format!("{a}*{name}")),
        }
    }
    s
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Q, String)> = self.ordered_terms().into_iter().map(|(e, c)| (c, Self::mono_name(&e))).collect();
        write!(f, "{}", format_signed_terms(&terms))
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, o: DiffPoly) -> DiffPoly {
        for (e, v) in o.terms {
            self.add_term(e, v);
        }
        self
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: DiffPoly) -> DiffPoly {
        self + (-o)
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.into_iter().map(|(e, v)| (e, -v)).collect() }
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ea, va) in &self.terms {
            for (eb, vb) in &o.terms {
                let n = ea.len().max(eb.len());
                let e = (0..n).map(|j| ea.get(j).unwrap_or(&0) + eb.get(j).unwrap_or(&0)).collect();
                out.add_term(e, va * vb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    #[test]
    fn leibniz() {
        let u = DiffPoly::u(0);
        let p = u.pow(2) * DiffPoly::u(1);
        assert_eq!(p.dt(), DiffPoly::u(0).scale(&q(2)) * DiffPoly::u(1).pow(2) + u.pow(2) * DiffPoly::u(2));
    }

    #[test]
    fn antiderivative_roundtrip() {
        let p = DiffPoly::u(0).pow(3).scale(&qf(1, 2)) - DiffPoly::u(0) * DiffPoly::u(2);
        assert_eq!(p.dt().antiderivative().unwrap(), p);
        assert!(DiffPoly::u(1).pow(2).antiderivative().is_none());
        assert!(DiffPoly::u(0).antiderivative().is_none());
    }

    #[test]
    fn printing() {
        let p = DiffPoly::u(0).pow(3).scale(&q(2)) - DiffPoly::u(2).scale(&qf(1, 4));
        assert_eq!(p.to_string(), "2*u^3 - 1/4*u''");
    }
}
