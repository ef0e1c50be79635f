//! Gelfand–Dikii recursion, string equations, and the 2×2 Lax tower.

pub mod diffpoly;
pub mod lax;
pub mod xtpoly;

use num_traits::Zero;
use parking_lot::RwLock;

use crate::exact::{central, q, qf, Poly, Var, Q};
pub use diffpoly::{DiffMono, DiffPoly};
pub use lax::{
    compatibility_check, compatibility_check_scaled, compatibility_check_shifted, flashka_newell_gauge, lax_matrices,
    CompatReport, GaugeResult, LaxTriple, Matrix2Sym,
};
pub use xtpoly::XtPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GdError {
    #[error("u·d/dt R̂_{0} is not a total derivative")]
    ExactnessFailure(usize),
    #[error("leading coefficient of R̂_{k} is {got}, expected {want}")]
    LeadingCoefficientMismatch { k: usize, got: String, want: String },
    #[error("string equation needs at least one nonzero time")]
    InvalidOrder,
    #[error("order m = {0} is outside the supported range")]
    UnsupportedOrder(usize),
    #[error("gauge shape mismatch: {0}")]
    GaugeMismatch(String),
}

static GD_TABLE: RwLock<Vec<(DiffPoly, DiffPoly)>> = RwLock::new(Vec::new());

/// (R̂_k, Ř_k), memoized across calls and threads.
pub fn gd_polynomials(k: usize) -> Result<(DiffPoly, DiffPoly), GdError> {
    if let Some(hit) = GD_TABLE.read().get(k) {
        return Ok(hit.clone());
    }
    let mut table = GD_TABLE.write();
    if table.is_empty() {
        let u = DiffPoly::u(0);
        table.push((u.clone(), u.pow(2).scale(&qf(1, 2))));
    }
    while table.len() <= k {
        let j = table.len() - 1;
        let (hat, check) = table[j].clone();
        let next_hat = DiffPoly::u(0) * check - hat.dt_n(2).scale(&qf(1, 4));
        let integrand = DiffPoly::u(0) * next_hat.dt();
        let next_check = integrand.antiderivative().ok_or(GdError::ExactnessFailure(j + 1))?;
        table.push((next_hat, next_check));
    }
    Ok(table[k].clone())
}

/// Coefficient of u^{2k+1} in R̂_k, checked against (2k)!/(2^{2k}(k!)²).
pub fn leading_coefficient_check(k: usize) -> Result<Q, GdError> {
    let (hat, _) = gd_polynomials(k)?;
    let got = hat.coeff(&[2 * k as u32 + 1]);
    let want = central(k as u32);
    if got != want {
        return Err(GdError::LeadingCoefficientMismatch { k, got: got.to_string(), want: want.to_string() });
    }
    Ok(got)
}

/// Σ_k t_k R̂_k(u) + t·u = 0 with t kept outside the differential ring.
#[derive(Clone, Debug, PartialEq)]
pub struct StringEquation {
    pub times: Vec<Q>,
    /// Σ_k t_k R̂_k(u).
    pub lhs: DiffPoly,
    /// Effective order: the largest k with t_k ≠ 0.
    pub order: usize,
}

/// Build the string equation for times t₁..t_m.
pub fn string_equation(m: usize, times: &[Q]) -> Result<StringEquation, GdError> {
    if m == 0 || times.is_empty() {
        return Err(GdError::InvalidOrder);
    }
    let order = times.iter().rposition(|t| !t.is_zero()).ok_or(GdError::InvalidOrder)? + 1;
    let mut lhs = DiffPoly::zero();
    for (k, t) in times.iter().enumerate() {
        if !t.is_zero() {
            lhs = lhs + gd_polynomials(k + 1)?.0.scale(t);
        }
    }
    Ok(StringEquation { times: times.to_vec(), lhs, order })
}

impl StringEquation {
    /// Coefficient of u^{(2n)} in the left side, n the effective order: t_n·(−1/4)^n.
    pub fn top_coefficient(&self) -> Q {
        self.lhs.coeff(&top_mono(self.order))
    }

    /// Σ_j t_j c_j u^{2j} as a polynomial in u; the grade-0 content reads −t = this.
    pub fn u0_relation(&self) -> Poly<Q> {
        let g0 = self.lhs.grade_part(0);
        let deg = 2 * self.order;
        Poly::new((0..=deg).map(|k| g0.coeff(&[k as u32 + 1])).collect(), Var::U)
    }

    /// u^{(2n)} expressed through lower derivatives and t: (t-power, coefficient) pairs.
    pub fn solved_top(&self) -> XtPoly {
        let c = self.top_coefficient();
        let rest = self.lhs.clone() - DiffPoly::monomial(c.clone(), top_mono(self.order));
        let inv = -(q(1) / c);
        XtPoly::from_diffpoly(rest.scale(&inv), 0, 0) + XtPoly::from_diffpoly(DiffPoly::u(0).scale(&inv), 0, 1)
    }

    /// Normal form `u'' = 2*u^3 + 4*t*u`.
    pub fn normal_form(&self) -> String {
        let c = self.top_coefficient();
        let inv = -(q(1) / c);
        let rest = self.lhs.clone() - DiffPoly::monomial(self.top_coefficient(), top_mono(self.order));
        let mut terms: Vec<(Q, String)> = rest
            .scale(&inv)
            .ordered_terms()
            .into_iter()
            .map(|(e, c)| (c, DiffPoly::mono_name(&e)))
            .collect();
        terms.push((inv, "t*u".into()));
        format!("{} = {}", DiffPoly::mono_name(&top_mono(self.order)), diffpoly::format_signed_terms(&terms))
    }
}

fn top_mono(n: usize) -> DiffMono {
    let mut e = vec![0; 2 * n + 1];
    e[2 * n] = 1;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_polynomials() {
        let (h1, c1) = gd_polynomials(1).unwrap();
        let u = DiffPoly::u(0);
        assert_eq!(h1, u.pow(3).scale(&qf(1, 2)) - DiffPoly::u(2).scale(&qf(1, 4)));
        let want = u.pow(4).scale(&qf(3, 8)) - (u.clone() * DiffPoly::u(2)).scale(&qf(1, 4))
            + DiffPoly::u(1).pow(2).scale(&qf(1, 8));
        assert_eq!(c1, want);
    }

    #[test]
    fn painleve_two() {
        let se = string_equation(1, &[q(1)]).unwrap();
        assert_eq!(se.normal_form(), "u'' = 2*u^3 + 4*t*u");
        assert_eq!(se.u0_relation(), Poly::new(vec![q(0), q(0), qf(1, 2)], Var::U));
        let se2 = string_equation(2, &[q(0), q(1)]).unwrap();
        assert_eq!(se2.u0_relation().coeff(4), qf(3, 8));
        assert_eq!(string_equation(1, &[]), Err(GdError::InvalidOrder));
    }
}
