//! Leading WKB structure of the wave functions and the first correction ∂_tψ₁.
//!
//! Three z-charts occur and are kept apart:
//! * chart A: z² = u₀² − x², used for the Poisson bracket;
//! * chart B: x = u₀(z + 1/z)/2, used for the leading determinant;
//! * chart C: z² = (u₀ − x)/(u₀ + x), used for ∂_tψ₁.
//!
//! The fourth wave-function prefactor is taken as ((u₀ − x)/(u₀ + x))^{1/4}.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::curve::{CurveError, CurveSpec};
use crate::exact::{central, q, q_to_f64, qf, ExactError, Field, Gauss, MPoly, MRat, RatFunc, Scalar, Var, Q};
use crate::gd::{string_equation, GdError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WkbError {
    #[error("chain-rule identity fails: {0}")]
    ChainRuleMismatch(String),
    #[error("Poisson bracket is not 1: {0}")]
    BracketMismatch(String),
    #[error("leading determinant is not 1: {0}")]
    DetMismatch(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("pole outside {{0, ±i, ∞}}: {0}")]
    UnexpectedPole(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Gd(#[from] GdError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Q(x) = Σ_j t_j Σ_{k<j} c_k u^{2k} x^{2(j−k)−1} over `nvars` variables.
fn q_poly(times: &[Q], nvars: usize, xi: usize, ui: usize) -> MPoly<Q> {
    let mut acc = MPoly::zero(nvars);
    for (jm1, tj) in times.iter().enumerate() {
        let j = jm1 + 1;
        for k in 0..j {
            let mut e = vec![0; nvars];
            e[xi] = (2 * (j - k) - 1) as u32;
            e[ui] = 2 * k as u32;
            acc = acc + MPoly::monomial(tj * central(k as u32), &e);
        }
    }
    acc
}

/// dt/du₀ from −t = Σ_j t_j c_j u₀^{2j}, as a polynomial in variable `ui`.
fn dt_du(times: &[Q], nvars: usize, ui: usize) -> Result<MPoly<Q>, WkbError> {
    let rel = string_equation(times.len(), times)?.u0_relation();
    Ok(-MPoly::from_poly(&rel.derivative(), ui, nvars))
}

/// du₀/dt at a concrete u₀.
pub fn du0_dt(times: &[Q], u0: &Q) -> Result<Q, WkbError> {
    let d = string_equation(times.len(), times)?.u0_relation().derivative().eval(u0);
    if d.is_zero() {
        return Err(WkbError::SingularPoint(format!("dt/du0 vanishes at u0 = {u0}")));
    }
    Ok(-(Q::one() / d))
}

const X: usize = 0;
const U: usize = 1;

/// √(u₀² − x²)·∂ỹ/∂t as a fraction in (x, u₀).
pub fn dy_dt_times_root(spec: &CurveSpec) -> Result<MRat<Q>, WkbError> {
    let qp = q_poly(&spec.times, 2, X, U);
    let s2 = MPoly::var(U, 2).pow(2) - MPoly::var(X, 2).pow(2);
    let num = MPoly::var(U, 2) * qp.clone() + s2 * qp.diff(U);
    Ok(MRat::new(num, dt_du(&spec.times, 2, U)?))
}

/// (∂ỹ/∂t)²(u₀² − x²) = x², and the unsquared sign, as identities in (x, u₀).
pub fn chain_rule_identity(spec: &CurveSpec) -> Result<bool, WkbError> {
    let r = dy_dt_times_root(spec)?;
    let x = MPoly::var(X, 2);
    let squared = r.num.clone() * r.num.clone() - x.clone() * x.clone() * r.den.clone() * r.den.clone();
    if !squared.is_zero() {
        return Err(WkbError::ChainRuleMismatch(format!("squared remainder {squared}")));
    }
    let signed = r.num.clone() + x * r.den.clone();
    if !signed.is_zero() {
        return Err(WkbError::ChainRuleMismatch(format!("sign remainder {signed}")));
    }
    Ok(true)
}

/// Chart-A calculus on Q(z, u₀)[x]/(x² − u₀² + z²), with u₀ = u₀(t).
struct ChartA {
    rel: MPoly<Q>,
    du_dt: MRat<Q>,
}

const AZ: usize = 0;
const AU: usize = 1;
const AX: usize = 2;

impl ChartA {
    fn new(times: &[Q]) -> Result<Self, WkbError> {
        let rel = MPoly::var(AU, 3).pow(2) - MPoly::var(AZ, 3).pow(2);
        Ok(ChartA { rel, du_dt: MRat::new(MPoly::one(3), dt_du(times, 3, AU)?) })
    }

    fn var(i: usize) -> MRat<Q> {
        MRat::from_poly(MPoly::var(i, 3))
    }

    fn x_z(&self) -> MRat<Q> {
        MRat::new(-MPoly::var(AZ, 3), MPoly::var(AX, 3))
    }

    fn x_t(&self) -> MRat<Q> {
        MRat::new(MPoly::var(AU, 3), MPoly::var(AX, 3)) * self.du_dt.clone()
    }

    fn d_z(&self, f: &MRat<Q>) -> MRat<Q> {
        f.diff(AZ) + f.diff(AX) * self.x_z()
    }

    fn d_t(&self, f: &MRat<Q>) -> MRat<Q> {
        f.diff(AU) * self.du_dt.clone() + f.diff(AX) * self.x_t()
    }

    /// {f, g} = ∂_t f ∂_z g − ∂_z f ∂_t g.
    fn bracket(&self, f: &MRat<Q>, g: &MRat<Q>) -> MRat<Q> {
        self.d_t(f) * self.d_z(g) - self.d_z(f) * self.d_t(g)
    }

    fn equals_const(&self, f: &MRat<Q>, c: &Q) -> Result<(), String> {
        let den = f.den.reduce_square(AX, &self.rel);
        if den.is_zero() {
            return Err("denominator vanishes on the curve".into());
        }
        let diff = (f.num.clone() - f.den.scale(c)).reduce_square(AX, &self.rel);
        if diff.is_zero() {
            Ok(())
        } else {
            Err(format!("remainder {diff}"))
        }
    }
}

/// {y, x} = 1 and {x, y} = −1 in chart A, with y(z, t) = z·Q(x).
pub fn poisson_bracket_check(spec: &CurveSpec) -> Result<bool, WkbError> {
    let ch = ChartA::new(&spec.times)?;
    let y = ChartA::var(AZ) * MRat::from_poly(q_poly(&spec.times, 3, AX, AU));
    let x = ChartA::var(AX);
    ch.equals_const(&ch.bracket(&y, &x), &q(1)).map_err(WkbError::BracketMismatch)?;
    ch.equals_const(&ch.bracket(&x, &y), &q(-1)).map_err(|e| WkbError::BracketMismatch(format!("{{x, y}}: {e}")))?;
    Ok(true)
}

/// Which entry of Ψ = [[ψ, φ], [ψ̃, φ̃]].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Component {
    Psi,
    Phi,
    PsiTilde,
    PhiTilde,
}

/// Leading factor ±(1/√2)·g·e^{±N∫ỹ}, with g carried as g⁴.
#[derive(Clone, Debug, PartialEq)]
pub struct WkbLeading {
    pub component: Component,
    /// Sign of the 1/√2 prefactor.
    pub sign: i8,
    /// g⁴ as a function of z in chart B.
    pub g_fourth: RatFunc<Q>,
    /// Sign of the exponent ±N∫ỹ.
    pub phase: i8,
}

/// (u₀ + x)/(u₀ − x) = −(z + 1)²/(z − 1)² in chart B.
pub fn quarter_ratio(u0: &Q) -> Result<RatFunc<Q>, WkbError> {
    let z = RatFunc::<Q>::var_fn(Var::Z);
    let c = |v: Q| RatFunc::constant(v, Var::Z);
    let x = (z.clone() + z.inv()?).scale(&(u0 * qf(1, 2)));
    Ok((c(u0.clone()) + x.clone()) / (c(u0.clone()) - x))
}

impl WkbLeading {
    pub fn components(spec: &CurveSpec) -> Result<[WkbLeading; 4], WkbError> {
        let r = quarter_ratio(&spec.u0)?;
        let ri = r.inv()?;
        let mk = |component, sign, g_fourth: &RatFunc<Q>, phase| WkbLeading { component, sign, g_fourth: g_fourth.clone(), phase };
        Ok([
            mk(Component::Psi, 1, &r, 1),
            mk(Component::Phi, -1, &r, -1),
            mk(Component::PsiTilde, 1, &ri, 1),
            mk(Component::PhiTilde, 1, &ri, -1),
        ])
    }
}

fn leading_product(a: &WkbLeading, b: &WkbLeading, z: &Q) -> Result<Q, WkbError> {
    if a.phase + b.phase != 0 {
        return Err(WkbError::DetMismatch(format!("{:?}·{:?} keeps an exponential", a.component, b.component)));
    }
    let fourth = a.g_fourth.clone() * b.g_fourth.clone();
    if fourth != RatFunc::one(Var::Z) {
        return Err(WkbError::DetMismatch(format!("{:?}·{:?} has g⁴ = {fourth}", a.component, b.component)));
    }
    if a.g_fourth.eval(z)? * b.g_fourth.eval(z)? != Q::one() {
        return Err(WkbError::DetMismatch(format!("g⁴ product at z = {z} is not 1")));
    }
    Ok(q((a.sign * b.sign) as i64) * qf(1, 2))
}

/// ψφ̃ − φψ̃ at leading order from the given components.
pub fn det_from_components(c: &[WkbLeading; 4], z: &Q) -> Result<Scalar, WkbError> {
    for bad in [q(0), q(1), q(-1)] {
        if *z == bad {
            return Err(WkbError::SingularPoint(format!("z = {bad}")));
        }
    }
    let d = leading_product(&c[0], &c[3], z)? - leading_product(&c[1], &c[2], z)?;
    if d != q(1) {
        return Err(WkbError::DetMismatch(format!("value {d}")));
    }
    Ok(Scalar::Rational(d))
}

/// Leading det Ψ at a chart-B point; equals 1.
pub fn det_psi_leading(spec: &CurveSpec, z: &Q) -> Result<Scalar, WkbError> {
    det_from_components(&WkbLeading::components(spec)?, z)
}

/// x = u₀(1 − z²)/(1 + z²) in chart C.
pub fn chart_c_x(z: &Q, u0: &Q) -> Q {
    let z2 = z * z;
    u0 * (Q::one() - &z2) / (Q::one() + z2)
}

/// (∂_tu₀)²x²z³/4 + u₂/z at a chart-C point.
pub fn dpsi1_dt_z(z: &Q, u0: &Q, du0: &Q, u2: &Q) -> Result<Q, WkbError> {
    if z.is_zero() {
        return Err(WkbError::SingularPoint("z = 0 (x = u0)".into()));
    }
    let x = chart_c_x(z, u0);
    Ok(du0 * du0 * &x * &x * z * z * z / q(4) + u2 / z)
}

/// Square of ∂_tψ₁ written directly in x, free of half powers.
pub fn dpsi1_dt_squared(x: &Q, u0: &Q, du0: &Q, u2: &Q) -> Result<Q, WkbError> {
    let r = ratio_c(x, u0)?;
    let a = du0 * du0 * x * x / q(4);
    Ok(&a * &a * &r * &r * &r + q(2) * &a * u2 * &r + u2 * u2 / &r)
}

fn ratio_c(x: &Q, u0: &Q) -> Result<Q, WkbError> {
    if *u0 == *x || *u0 == -x {
        return Err(WkbError::SingularPoint(format!("x = {x} is a branch point")));
    }
    Ok((u0 - x) / (u0 + x))
}

fn rational_sqrt(r: &Q) -> Option<Q> {
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd): (BigInt, BigInt) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Q::new(sn, sd))
}

/// ∂_tψ₁ at (x, u₀) on the principal branch of z = √((u₀ − x)/(u₀ + x)).
///
/// Exact when |z²| is a rational square (Gaussian when z² < 0); otherwise a float for z² > 0.
pub fn dpsi1_dt_eval(x: &Q, u0: &Q, du0: &Q, u2: &Q) -> Result<Scalar, WkbError> {
    let r = ratio_c(x, u0)?;
    let a = du0 * du0 * x * x / q(4);
    match rational_sqrt(&r.abs()) {
        Some(s) if !r.is_negative() => Ok(Scalar::Rational(&a * &s * &s * &s + u2 / &s)),
        Some(s) => {
            let z = Gauss::new(q(0), s);
            let v = Gauss::real(a) * z.pow(3) + Gauss::real(u2.clone()) / z;
            Ok(Scalar::from_gauss(v))
        }
        None if !r.is_negative() => {
            let s = q_to_f64(&r).sqrt();
            Ok(Scalar::Float(q_to_f64(&a) * s.powi(3) + q_to_f64(u2) / s))
        }
        None => Err(WkbError::SingularPoint(format!("z² = {r} has no rational root"))),
    }
}

/// Poles of ∂_tψ₁ as a function of the chart-C coordinate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleClass {
    /// (location, order) for finite poles.
    pub finite: Vec<(String, usize)>,
    pub at_infinity: usize,
}

/// ∂_tψ₁ as a rational function of the chart-C coordinate z.
pub fn dpsi1_dt_ratfunc(u0: &Q, du0: &Q, u2: &Q) -> Result<RatFunc<Gauss>, WkbError> {
    let z = RatFunc::<Gauss>::var_fn(Var::Z);
    let c = |v: Q| RatFunc::constant(Gauss::real(v), Var::Z);
    let z2 = z.clone() * z.clone();
    let x = c(u0.clone()) * (c(q(1)) - z2.clone()) / (c(q(1)) + z2);
    Ok(x.clone() * x * z.pow(3)? * c(du0 * du0 / q(4)) + c(u2.clone()) / z)
}

/// Every pole lies in {0, ±i, ∞}.
pub fn dpsi1_pole_classification(u0: &Q, du0: &Q, u2: &Q) -> Result<PoleClass, WkbError> {
    let f = dpsi1_dt_ratfunc(u0, du0, u2)?;
    let cands = [Gauss::zero(), Gauss::i(), -Gauss::i()];
    let (orders, rest) = f.strip_poles(&cands);
    if rest.degree() != Some(0) {
        return Err(WkbError::UnexpectedPole(format!("residual denominator {rest}")));
    }
    let finite = cands.iter().zip(&orders).filter(|(_, k)| **k > 0).map(|(c, k)| (c.to_string(), *k)).collect();
    let dn = f.num().degree().unwrap_or(0) as i64;
    let dd = f.den().degree().unwrap_or(0) as i64;
    Ok(PoleClass { finite, at_infinity: (dn - dd).max(0) as usize })
}

/// Restrict a fraction in (x, u₀) to x = 0.
pub fn at_x_zero(r: &MRat<Q>, u0: &Q) -> Option<Q> {
    r.eval(&[q(0), u0.clone()])
}
