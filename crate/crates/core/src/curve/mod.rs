//! Critical potential, critical temperature, γ, the rescaled curve and the Lax spectral curve.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::exact::{
    binomial, central, factorial, polynomial_part_at_infinity, q, qf, ExactError, Gauss, MPoly, Poly, RatFunc,
    Scalar, Var, Q,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurveError {
    #[error("invalid curve data: {0}")]
    InvalidData(String),
    #[error("the two closed forms for gamma^(2m) disagree at m = {0}")]
    GammaFormulaMismatch(usize),
    #[error("Lax determinant disagrees with the closed form: {0}")]
    CurveMismatch(String),
    #[error("rescaled and Lax curves are not proportional: {0}")]
    MatchFailure(String),
    #[error("Zhukovsky identity {0} failed")]
    IdentityFailure(usize),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// (m, b, ε) of a 2m-degenerate merging at x = bε.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalData {
    pub m: usize,
    pub b: Q,
    pub eps: Q,
}

impl CriticalData {
    pub fn new(m: usize, b: Q, eps: Q) -> Result<Self, CurveError> {
        if m == 0 {
            return Err(CurveError::InvalidData("m must be at least 1".into()));
        }
        if !b.is_positive() {
            return Err(CurveError::InvalidData("b must be positive".into()));
        }
        if eps.abs() >= Q::one() {
            return Err(CurveError::InvalidData("eps must lie in (-1, 1)".into()));
        }
        Ok(CriticalData { m, b, eps })
    }
}

/// (m, t₁..t_m, u₀) for the Lax-side curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub m: usize,
    pub times: Vec<Q>,
    pub u0: Q,
}

impl CurveSpec {
    pub fn new(m: usize, times: Vec<Q>, u0: Q) -> Result<Self, CurveError> {
        if m == 0 || times.len() != m || times.iter().all(|t| t.is_zero()) {
            return Err(CurveError::InvalidData("need m times with at least one nonzero".into()));
        }
        if u0.is_zero() {
            return Err(CurveError::InvalidData("u0 must be nonzero".into()));
        }
        Ok(CurveSpec { m, times, u0 })
    }

    /// t_m = 1, other times zero.
    pub fn top(m: usize, u0: Q) -> Result<Self, CurveError> {
        let mut times = vec![q(0); m];
        times[m - 1] = q(1);
        CurveSpec::new(m, times, u0)
    }
}

fn pw(x: &Q, k: u32) -> Q {
    num_traits::pow(x.clone(), k as usize)
}

/// V′_c(x), degree 2m+1, from the floor-bounded double sum.
pub fn critical_potential(cd: &CriticalData) -> Poly<Q> {
    let m = cd.m as i64;
    let (b, e) = (&cd.b, &cd.eps);
    let be = -(b * e);
    let coeffs = (0..=2 * m + 1)
        .map(|j| {
            let mut c = if j >= 1 { binomial(2 * m, j - 1) * pw(&be, (2 * m + 1 - j) as u32) } else { q(0) };
            for n in 1..=(2 * m + 1 - j) / 2 {
                let sign = if j % 2 == 0 { q(1) } else { q(-1) };
                c += binomial(2 * m, 2 * n + j - 1) * sign * factorial((2 * n - 2) as u32)
                    * pw(e, (2 * (m - n) + 1 - j) as u32)
                    * pw(b, (2 * m + 1 - j) as u32)
                    / (factorial(n as u32) * factorial((n - 1) as u32) * pw(&q(2), (2 * n - 1) as u32));
            }
            c
        })
        .collect();
    Poly::new(coeffs, Var::X)
}

/// T_c = (b^{2m+2}/2) Σ_{n=1}^{m+1} ε^{2m−2n+2}(2m)!/(n!(2m−2n+2)!(n−1)!2^{2n−1}).
pub fn critical_temperature(cd: &CriticalData) -> Q {
    let m = cd.m as u32;
    let s = (1..=m + 1).fold(q(0), |acc, n| {
        acc + pw(&cd.eps, 2 * m + 2 - 2 * n) * factorial(2 * m)
            / (factorial(n) * factorial(2 * m + 2 - 2 * n) * factorial(n - 1) * pw(&q(2), 2 * n - 1))
    });
    pw(&cd.b, 2 * m + 2) * s / q(2)
}

/// Exact ∫_{−b}^{b}(1/2π)(x−bε)^{2m}√(b²−x²)dx via the moments of the semicircle.
pub fn critical_mass_exact(cd: &CriticalData) -> Q {
    let m = cd.m as i64;
    let be = -(&cd.b * &cd.eps);
    (0..=m).fold(q(0), |acc, j| {
        let k = 2 * j;
        acc + binomial(2 * m, k) * pw(&be, (2 * m - k) as u32) * pw(&cd.b, (k + 2) as u32) * central(j as u32)
            / q(4 * (j + 1))
    })
}

/// Pol(V′_c/√(x²−b²)) with the branch √ ~ +x.
pub fn critical_h(cd: &CriticalData) -> Result<Poly<Q>, CurveError> {
    let r = Poly::new(vec![-(&cd.b * &cd.b), q(0), q(1)], Var::X);
    Ok(polynomial_part_at_infinity(&critical_potential(cd), &r)?)
}

/// γ^{2m} from the primary closed form, checked against the alternate form.
pub fn gamma_value(cd: &CriticalData) -> Result<Q, CurveError> {
    let m = cd.m as u32;
    let den = &cd.b * &cd.b * (q(1) - &cd.eps * &cd.eps);
    let primary = -(factorial(m) * factorial(m) * pw(&q(2), 2 * m + 1)) / (den.clone() * factorial(2 * m));
    let sum = (0..m).fold(q(0), |acc, n| acc + central(n));
    let alternate = -q(4 * m as i64) / (den * sum);
    if primary != alternate {
        return Err(CurveError::GammaFormulaMismatch(cd.m));
    }
    Ok(primary)
}

/// Variable slots of the bivariate curve polynomials.
pub const XI: usize = 0;
pub const G: usize = 1;

/// Σ_{k=0}^{m−1} c_k G^k ξ^{2(m−k)−1} in (ξ, G = γ²).
pub fn odd_part(m: usize) -> MPoly<Q> {
    (0..m).fold(MPoly::zero(2), |acc, k| {
        let mut e = vec![0; 2];
        e[XI] = (2 * (m - k) - 1) as u32;
        e[G] = k as u32;
        acc + MPoly::monomial(central(k as u32), &e)
    })
}

/// ŷ(ξ) = bπ√(1−ε²)·√(γ²−ξ²)·odd(ξ), with π and the roots kept symbolic.
#[derive(Clone, Debug)]
pub struct RescaledCurve {
    /// b²(1−ε²): the square of the prefactor without π.
    pub prefactor_sq: Q,
    /// The prefactor carries one factor of π.
    pub pi_flag: bool,
    /// Odd polynomial in ξ with coefficients in γ².
    pub odd_poly: MPoly<Q>,
    /// γ^{2m}.
    pub gamma_2m: Q,
}

pub fn rescaled_curve(cd: &CriticalData) -> Result<RescaledCurve, CurveError> {
    Ok(RescaledCurve {
        prefactor_sq: &cd.b * &cd.b * (q(1) - &cd.eps * &cd.eps),
        pi_flag: true,
        odd_poly: odd_part(cd.m),
        gamma_2m: gamma_value(cd)?,
    })
}

impl RescaledCurve {
    /// ŷ²/π² as a polynomial in (ξ, G).
    pub fn squared_over_pi2(&self) -> MPoly<Q> {
        let sq = MPoly::var(G, 2) - MPoly::var(XI, 2).pow(2);
        (sq * self.odd_poly.pow(2)).scale(&self.prefactor_sq)
    }
}

impl fmt::Display for RescaledCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})*pi*sqrt(G - xi^2)*[{}]", self.prefactor_sq, self.odd_poly)
    }
}

/// Q(x) = Σ_j t_j Σ_{k<j} c_k G^k x^{2(j−k)−1} in (x, G = u₀²).
pub fn lax_q_symbolic(times: &[Q]) -> MPoly<Q> {
    let mut acc = MPoly::zero(2);
    for (jm1, tj) in times.iter().enumerate() {
        let j = jm1 + 1;
        if tj.is_zero() {
            continue;
        }
        for k in 0..j {
            let mut e = vec![0; 2];
            e[XI] = (2 * (j - k) - 1) as u32;
            e[G] = k as u32;
            acc = acc + MPoly::monomial(tj * central(k as u32), &e);
        }
    }
    acc
}

/// y² = (G − x²)·Q(x)² in (x, G).
pub fn lax_curve_symbolic(times: &[Q]) -> MPoly<Q> {
    (MPoly::var(G, 2) - MPoly::var(XI, 2).pow(2)) * lax_q_symbolic(times).pow(2)
}

/// det(y − 𝒟₀) route: y² = B₀² − (C₀ + t)² with t from the u₀ relation, in (x, G).
pub fn lax_curve_from_d0(times: &[Q]) -> MPoly<Q> {
    let x = || MPoly::var(XI, 2);
    let gp = |k: usize| MPoly::var(G, 2).pow(k as u32);
    let mut b0_over_u0 = MPoly::zero(2);
    let mut c0 = MPoly::zero(2);
    let mut t = MPoly::zero(2);
    for (jm1, tj) in times.iter().enumerate() {
        let j = jm1 + 1;
        for k in 0..j {
            b0_over_u0 = b0_over_u0 + (x().pow((2 * (j - k) - 1) as u32) * gp(k)).scale(&(tj * central(k as u32)));
        }
        c0 = c0 + x().pow(2 * j as u32).scale(tj);
        for k in 1..=j {
            c0 = c0 + (x().pow((2 * (j - k)) as u32) * gp(k)).scale(&(tj * central(k as u32)));
        }
        t = t - gp(j).scale(&(tj * central(j as u32)));
    }
    MPoly::var(G, 2) * b0_over_u0.pow(2) - (c0 + t).pow(2)
}

/// Lax curve at a concrete u₀.
#[derive(Clone, Debug)]
pub struct LaxCurve {
    /// y² = P(x), degree 4m.
    pub p: Poly<Q>,
    /// u₀² − x².
    pub sqrt_factor: Poly<Q>,
    /// Q(x), odd.
    pub q_factor: Poly<Q>,
}

fn specialize_g(p: &MPoly<Q>, g: &Q) -> Poly<Q> {
    p.eval_var(G, g).to_poly(XI, Var::X).expect("only x remains")
}

pub fn lax_curve(spec: &CurveSpec) -> Result<LaxCurve, CurveError> {
    let closed = lax_curve_symbolic(&spec.times);
    let via_d0 = lax_curve_from_d0(&spec.times);
    if closed != via_d0 {
        return Err(CurveError::CurveMismatch(format!("closed {closed} vs det {via_d0}")));
    }
    let g = &spec.u0 * &spec.u0;
    Ok(LaxCurve {
        p: specialize_g(&closed, &g),
        sqrt_factor: Poly::new(vec![g.clone(), q(0), q(-1)], Var::X),
        q_factor: specialize_g(&lax_q_symbolic(&spec.times), &g),
    })
}

/// Result of comparing ŷ² with y²_Lax.
#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub m: usize,
    /// Rational part of the ratio; the full constant is this times π².
    pub ratio: Scalar,
    pub pi_power: u32,
    pub remainder_zero: bool,
}

/// ŷ²/y²_Lax with t_m = 1 and u₀² = γ², as an identity in (ξ, γ²).
pub fn curves_match(cd: &CriticalData) -> Result<MatchReport, CurveError> {
    let rc = rescaled_curve(cd)?;
    let a = rc.squared_over_pi2();
    let mut times = vec![q(0); cd.m];
    times[cd.m - 1] = q(1);
    let b = lax_curve_symbolic(&times);
    let top = (4 * cd.m) as u32;
    let lead = |p: &MPoly<Q>| p.coeffs_in(XI).get(top as usize).and_then(|c| c.as_constant());
    let (la, lb) = match (lead(&a), lead(&b)) {
        (Some(la), Some(lb)) if !lb.is_zero() => (la, lb),
        _ => return Err(CurveError::MatchFailure("leading coefficients are not constants".into())),
    };
    let r = la / lb;
    let rem = a - b.scale(&r);
    if !rem.is_zero() {
        return Err(CurveError::MatchFailure(format!("remainder {rem}")));
    }
    Ok(MatchReport { m: cd.m, ratio: Scalar::Rational(r), pi_power: 2, remainder_zero: true })
}

/// The five parametrization identities at a rational u₀, as RatFunc identities in z.
pub fn zhukovsky_identities(spec: &CurveSpec) -> Result<(), CurveError> {
    let u0 = Gauss::real(spec.u0.clone());
    let z = RatFunc::<Gauss>::var_fn(Var::Z);
    let c = |v: Gauss| RatFunc::constant(v, Var::Z);
    let half = Gauss::real(qf(1, 2));
    let zinv = z.inv()?;
    let x = c(u0.clone() * half.clone()) * (z.clone() + zinv.clone());
    let zp1 = z.clone() + c(Gauss::real(q(1)));
    let zm1 = z.clone() - c(Gauss::real(q(1)));
    let two_z = z.scale(&Gauss::real(q(2)));
    let checks: [(RatFunc<Gauss>, RatFunc<Gauss>); 6] = [
        (x.clone(), c(u0.clone()) * (z.clone() * z.clone() + c(Gauss::real(q(1)))) / two_z.clone()),
        (c(u0.clone()) - x.clone(), -(c(u0.clone()) * zm1.clone() * zm1.clone()) / two_z.clone()),
        (c(u0.clone()) + x.clone(), c(u0.clone()) * zp1.clone() * zp1.clone() / two_z.clone()),
        (
            c(u0.clone() * u0.clone()) - x.clone() * x.clone(),
            (c(Gauss::i() * u0.clone()) * zp1.clone() * zm1.clone() / two_z.clone()).pow(2)?,
        ),
        (x.derivative(), c(u0.clone()) * (z.clone() * z.clone() - c(Gauss::real(q(1)))) / (two_z.clone() * z.clone())),
        (x.compose(&zinv)?, x.clone()),
    ];
    for (k, (lhs, rhs)) in checks.iter().enumerate() {
        if lhs != rhs {
            return Err(CurveError::IdentityFailure(k + 1));
        }
    }
    let at_one = x.eval(&Gauss::real(q(1)))?;
    if at_one != u0 {
        return Err(CurveError::IdentityFailure(7));
    }
    Ok(())
}
