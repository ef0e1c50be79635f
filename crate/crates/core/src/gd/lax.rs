//! Lax tower 𝒟 = Σ t_k 𝒟_k, compatibility modulo the string equation, and the J-gauge.

use std::fmt;

use num_traits::Zero;

use crate::exact::{q, qf, Q};

use super::diffpoly::DiffPoly;
use super::xtpoly::XtPoly;
use super::{gd_polynomials, string_equation, GdError, StringEquation};

/// A, B, C of one 𝒟 block (polynomials in x over the differential ring).
#[derive(Clone, Debug, PartialEq)]
pub struct LaxTriple {
    pub a: XtPoly,
    pub b: XtPoly,
    pub c: XtPoly,
}

pub type Matrix2Sym = [[XtPoly; 2]; 2];

/// (A_k, B_k, C_k) from A₀ = B₀ = 0, C₀ = 1 and the x² recursion.
pub fn lax_block(k: usize) -> Result<LaxTriple, GdError> {
    let mut t = LaxTriple { a: XtPoly::zero(), b: XtPoly::zero(), c: XtPoly::constant(q(1)) };
    for j in 0..k {
        let (hat, check) = gd_polynomials(j)?;
        t = LaxTriple {
            a: t.a.mul_x2() + XtPoly::from_diffpoly(hat.dt().scale(&qf(1, 2)), 0, 0),
            b: t.b.mul_x2() + XtPoly::from_diffpoly(hat, 0, 0),
            c: t.c.mul_x2() + XtPoly::from_diffpoly(check, 0, 0),
        };
    }
    Ok(t)
}

/// Σ_{k=1}^{m} t_k (A_k, B_k, C_k).
pub fn lax_matrices(m: usize, times: &[Q]) -> Result<LaxTriple, GdError> {
    if m == 0 || times.len() != m {
        return Err(GdError::InvalidOrder);
    }
    let mut acc = LaxTriple { a: XtPoly::zero(), b: XtPoly::zero(), c: XtPoly::zero() };
    for (k, tk) in times.iter().enumerate() {
        if tk.is_zero() {
            continue;
        }
        let blk = lax_block(k + 1)?;
        acc = LaxTriple { a: acc.a + blk.a.scale(tk), b: acc.b + blk.b.scale(tk), c: acc.c + blk.c.scale(tk) };
    }
    Ok(acc)
}

/// [[−A, xB + C], [xB − C, A]].
pub fn d_block(t: &LaxTriple) -> Matrix2Sym {
    let xb = XtPoly::x() * t.b.clone();
    [[-t.a.clone(), xb.clone() + t.c.clone()], [xb - t.c.clone(), t.a.clone()]]
}

fn mat_mul(a: &Matrix2Sym, b: &Matrix2Sym) -> Matrix2Sym {
    let e = |i: usize, j: usize| a[i][0].clone() * b[0][j].clone() + a[i][1].clone() * b[1][j].clone();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_map(a: &Matrix2Sym, f: impl Fn(&XtPoly) -> XtPoly) -> Matrix2Sym {
    [[f(&a[0][0]), f(&a[0][1])], [f(&a[1][0]), f(&a[1][1])]]
}

fn mat_zip(a: &Matrix2Sym, b: &Matrix2Sym, f: impl Fn(&XtPoly, &XtPoly) -> XtPoly) -> Matrix2Sym {
    [[f(&a[0][0], &b[0][0]), f(&a[0][1], &b[0][1])], [f(&a[1][0], &b[1][0]), f(&a[1][1], &b[1][1])]]
}

/// Outcome of a compatibility reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    pub holds: bool,
    /// First nonvanishing reduced entry, if any.
    pub witness: Option<String>,
}

/// Rewrites derivatives of order ≥ 2n using the solved string equation.
struct Reducer {
    base: usize,
    rules: Vec<XtPoly>,
}

impl Reducer {
    fn new(se: &StringEquation) -> Self {
        Reducer { base: 2 * se.order, rules: vec![se.solved_top()] }
    }

    fn rule(&mut self, j: usize) -> XtPoly {
        while self.rules.len() <= j {
            let prev = self.rules.last().expect("seeded").dt();
            let next = prev.substitute(self.base, &self.rules[0]);
            self.rules.push(next);
        }
        self.rules[j].clone()
    }

    fn reduce(&mut self, e: &XtPoly) -> XtPoly {
        let mut out = e.clone();
        while let Some(top) = out.max_order().filter(|&o| o >= self.base) {
            let r = self.rule(top - self.base);
            out = out.substitute(top, &r);
        }
        out
    }
}

fn residual(m: usize, times: &[Q], shift: &Q, lambda: &Q) -> Result<CompatReport, GdError> {
    if !(1..=3).contains(&m) {
        return Err(GdError::UnsupportedOrder(m));
    }
    let scaled: Vec<Q> = times.iter().map(|t| t * lambda).collect();
    let se = string_equation(m, times)?;
    let lax = lax_matrices(m, &scaled)?;
    let lt = XtPoly::t().scale(lambda);
    let mut d = d_block(&lax);
    d[0][1] = d[0][1].clone() + lt.clone();
    d[1][0] = d[1][0].clone() - lt;
    let us = XtPoly::from_diffpoly(DiffPoly::u(0), 0, 0) + XtPoly::constant(shift.clone());
    let r: Matrix2Sym = [[XtPoly::zero(), XtPoly::x() + us.clone()], [us - XtPoly::x(), XtPoly::zero()]];
    let dt = mat_map(&d, XtPoly::dt);
    let rx = mat_map(&r, |e| e.dx().scale(lambda));
    let comm = mat_zip(&mat_mul(&d, &r), &mat_mul(&r, &d), |a, b| a.clone() - b.clone());
    let total = mat_zip(&mat_zip(&dt, &rx, |a, b| a.clone() - b.clone()), &comm, |a, b| a.clone() + b.clone());
    let mut red = Reducer::new(&se);
    for (i, row) in total.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let v = red.reduce(e);
            if !v.is_zero() {
                return Ok(CompatReport { holds: false, witness: Some(format!("entry ({},{}): {v}", i + 1, j + 1)) });
            }
        }
    }
    Ok(CompatReport { holds: true, witness: None })
}

/// Whether [∂_x − 𝒟, ℛ − ∂_t] vanishes modulo the string equation.
pub fn compatibility_check(m: usize, times: &[Q]) -> Result<CompatReport, GdError> {
    residual(m, times, &q(0), &q(1))
}

/// Same check with u in ℛ replaced by u + `shift`.
pub fn compatibility_check_shifted(m: usize, times: &[Q], shift: &Q) -> Result<CompatReport, GdError> {
    residual(m, times, shift, &q(1))
}

/// Same check after t_k ↦ λt_k and t ↦ λt, with ∂_x ↦ λ∂_x.
pub fn compatibility_check_scaled(m: usize, times: &[Q], lambda: &Q) -> Result<CompatReport, GdError> {
    if lambda.is_zero() {
        return Err(GdError::InvalidOrder);
    }
    residual(m, times, &q(0), lambda)
}

/// Entry re + i·im with polynomial parts.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CEntry {
    pub re: XtPoly,
    pub im: XtPoly,
}

impl CEntry {
    fn real(re: XtPoly) -> Self {
        CEntry { re, im: XtPoly::zero() }
    }
    fn cst(re: Q, im: Q) -> Self {
        CEntry { re: XtPoly::constant(re), im: XtPoly::constant(im) }
    }
    fn add(&self, o: &CEntry) -> CEntry {
        CEntry { re: self.re.clone() + o.re.clone(), im: self.im.clone() + o.im.clone() }
    }
    fn mul(&self, o: &CEntry) -> CEntry {
        CEntry {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        }
    }
    fn scale(&self, c: &Q) -> CEntry {
        CEntry { re: self.re.scale(c), im: self.im.scale(c) }
    }
}

impl fmt::Display for CEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + i*[{}]", self.re, self.im)
    }
}

pub type CMat = [[CEntry; 2]; 2];

fn cmul(a: &CMat, b: &CMat) -> CMat {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn lift(m: &Matrix2Sym) -> CMat {
    [[CEntry::real(m[0][0].clone()), CEntry::real(m[0][1].clone())], [
        CEntry::real(m[1][0].clone()),
        CEntry::real(m[1][1].clone()),
    ]]
}

fn j_mat() -> CMat {
    [[CEntry::cst(q(1), q(0)), CEntry::cst(q(0), q(1))], [CEntry::cst(q(0), q(1)), CEntry::cst(q(1), q(0))]]
}

fn j_inv() -> CMat {
    let h = qf(1, 2);
    [[CEntry::cst(h.clone(), q(0)), CEntry::cst(q(0), -h.clone())], [CEntry::cst(q(0), -h.clone()), CEntry::cst(h, q(0))]]
}

fn conjugate(m: &CMat) -> CMat {
    cmul(&cmul(&j_mat(), m), &j_inv())
}

/// J·ℛ·J⁻¹ and (4^{m+1}/2)·J·𝒟_m·J⁻¹.
#[derive(Clone, Debug)]
pub struct GaugeResult {
    pub rtilde: CMat,
    pub dtilde: CMat,
}

fn check_entry(name: &str, got: &CEntry, want: &CEntry) -> Result<(), GdError> {
    if got != want {
        return Err(GdError::GaugeMismatch(format!("{name}: got {got}, expected {want}")));
    }
    Ok(())
}

/// Conjugate by J = [[1, i], [i, 1]] and verify the Flashka–Newell shapes.
pub fn flashka_newell_gauge(m: usize) -> Result<GaugeResult, GdError> {
    if !(1..=2).contains(&m) {
        return Err(GdError::UnsupportedOrder(m));
    }
    let id = cmul(&j_mat(), &j_inv());
    let one = CEntry::cst(q(1), q(0));
    let zero = CEntry::cst(q(0), q(0));
    for (i, row) in id.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            check_entry("J*J^-1", e, if i == j { &one } else { &zero })?;
        }
    }
    let u = XtPoly::from_diffpoly(DiffPoly::u(0), 0, 0);
    let x = XtPoly::x();
    let r: Matrix2Sym = [[XtPoly::zero(), x.clone() + u.clone()], [u.clone() - x.clone(), XtPoly::zero()]];
    let rtilde = conjugate(&lift(&r));
    check_entry("Rtilde(1,1)", &rtilde[0][0], &CEntry { re: XtPoly::zero(), im: -x.clone() })?;
    check_entry("Rtilde(1,2)", &rtilde[0][1], &CEntry::real(u.clone()))?;
    check_entry("Rtilde(2,1)", &rtilde[1][0], &CEntry::real(u))?;
    check_entry("Rtilde(2,2)", &rtilde[1][1], &CEntry { re: XtPoly::zero(), im: x.clone() })?;

    let blk = lax_block(m)?;
    let s = Q::from_integer(4.into()).pow(m as i32 + 1) / q(2);
    let dm = d_block(&blk);
    let dt = conjugate(&lift(&dm));
    let dtilde: CMat = [
        [dt[0][0].scale(&s), dt[0][1].scale(&s)],
        [dt[1][0].scale(&s), dt[1][1].scale(&s)],
    ];
    let xb = x * blk.b.clone();
    let want = |re: XtPoly, im: XtPoly| CEntry { re: re.scale(&s), im: im.scale(&s) };
    check_entry("Dtilde(1,1)", &dtilde[0][0], &want(XtPoly::zero(), -blk.c.clone()))?;
    check_entry("Dtilde(1,2)", &dtilde[0][1], &want(xb.clone(), blk.a.clone()))?;
    check_entry("Dtilde(2,1)", &dtilde[1][0], &want(xb, -blk.a.clone()))?;
    check_entry("Dtilde(2,2)", &dtilde[1][1], &want(XtPoly::zero(), blk.c.clone()))?;
    Ok(GaugeResult { rtilde, dtilde })
}

/// Linear extension: with t_j ↦ (4^{j+1}/2)t_j, J·Σt_j𝒟_j·J⁻¹ keeps the Flashka–Newell shape
/// built from the combined A, B, C.
pub fn flashka_newell_hierarchy(times: &[Q]) -> Result<CMat, GdError> {
    let scaled: Vec<Q> = times
        .iter()
        .enumerate()
        .map(|(j, t)| t * Q::from_integer(4.into()).pow(j as i32 + 2) / q(2))
        .collect();
    let lax = lax_matrices(times.len(), &scaled)?;
    let dt = conjugate(&lift(&d_block(&lax)));
    let xb = XtPoly::x() * lax.b.clone();
    check_entry("Dtilde(1,1)", &dt[0][0], &CEntry { re: XtPoly::zero(), im: -lax.c.clone() })?;
    check_entry("Dtilde(1,2)", &dt[0][1], &CEntry { re: xb.clone(), im: lax.a.clone() })?;
    check_entry("Dtilde(2,1)", &dt[1][0], &CEntry { re: xb, im: -lax.a.clone() })?;
    check_entry("Dtilde(2,2)", &dt[1][1], &CEntry { re: XtPoly::zero(), im: lax.c.clone() })?;
    Ok(dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m1_blocks() {
        let l = lax_matrices(1, &[q(1)]).unwrap();
        assert_eq!(l.a, XtPoly::from_diffpoly(DiffPoly::u(1).scale(&qf(1, 2)), 0, 0));
        assert_eq!(l.b, XtPoly::from_diffpoly(DiffPoly::u(0), 0, 0));
        let c = XtPoly::from_diffpoly(DiffPoly::one(), 2, 0)
            + XtPoly::from_diffpoly(DiffPoly::u(0).pow(2).scale(&qf(1, 2)), 0, 0);
        assert_eq!(l.c, c);
    }

    #[test]
    fn m1_compatible() {
        assert!(compatibility_check(1, &[q(1)]).unwrap().holds);
        let broken = compatibility_check_shifted(1, &[q(1)], &q(1)).unwrap();
        assert!(!broken.holds);
        assert!(broken.witness.is_some());
    }

    #[test]
    fn gauge_m1() {
        let g = flashka_newell_gauge(1).unwrap();
        let expect = CEntry {
            re: XtPoly::from_diffpoly(DiffPoly::u(0).scale(&q(8)), 1, 0),
            im: XtPoly::from_diffpoly(DiffPoly::u(1).scale(&q(4)), 0, 0),
        };
        assert_eq!(g.dtilde[0][1], expect);
    }
}
