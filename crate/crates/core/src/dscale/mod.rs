//! Two-cut equilibrium endpoints near a 2m-degenerate merging, hodograph
//! integration and double-scaling fits. Floating point throughout.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::curve::{critical_potential, critical_temperature, gamma_value, CriticalData};
use crate::exact::{q_to_f64, sqrt_quotient_at_infinity, Poly, Var};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DscaleError {
    #[error("Newton did not converge at T = {t} (residual {residual:e})")]
    NoConvergence { t: f64, residual: f64 },
    #[error("endpoint ordering violated: {0}")]
    InvalidRegion(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("step size underflow at T = {t}")]
    StepUnderflow { t: f64 },
    #[error("need at least 4 grid points, got {0}")]
    InsufficientData(usize),
    #[error("curve data: {0}")]
    Curve(String),
}

/// a₁ < b₁ ≤ x₀ ≤ a₂ < b₂ at temperature t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EndpointState {
    pub a1: f64,
    pub b1: f64,
    pub a2: f64,
    pub b2: f64,
    pub t: f64,
    pub x0: f64,
}

impl EndpointState {
    pub fn roots(&self) -> [f64; 4] {
        [self.a1, self.b1, self.a2, self.b2]
    }

    fn admissible(&self) -> bool {
        [self.a1, self.b1, self.a2, self.b2].iter().all(|v| v.is_finite())
            && self.a1 < self.b1
            && self.b1 < self.a2
            && self.a2 < self.b2
    }
}

/// ∫₀^π f(θ) dθ for f smooth and even-periodic, by the midpoint rule with node doubling.
pub fn theta_quadrature(f: impl Fn(f64) -> f64) -> Result<f64, DscaleError> {
    let rule = |n: usize| (0..n).map(|j| f((j as f64 + 0.5) * PI / n as f64)).sum::<f64>() * PI / n as f64;
    let mut n = 16;
    let mut prev = rule(n);
    while n < 1 << 17 {
        n *= 2;
        let cur = rule(n);
        if !cur.is_finite() {
            return Err(DscaleError::QuadratureFailure(format!("non-finite value with {n} nodes")));
        }
        if (cur - prev).abs() <= 1e-12 * cur.abs().max(1.0) {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(DscaleError::QuadratureFailure("node doubling did not stabilize".into()))
}

/// ∫_{−b}^{b}(1/2π)(x − bε)^{2m}√(b² − x²)dx by quadrature.
pub fn normalization_integral(cd: &CriticalData) -> Result<f64, DscaleError> {
    let (b, be) = (q_to_f64(&cd.b), q_to_f64(&(&cd.b * &cd.eps)));
    let m2 = 2 * cd.m as i32;
    let i = theta_quadrature(|t| (b * t.cos() - be).powi(m2) * b * b * t.sin().powi(2))?;
    Ok(i / (2.0 * PI))
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

/// Solver context for one (m, b, ε).
#[derive(Clone, Debug)]
pub struct Lab {
    pub m: usize,
    pub b: f64,
    pub be: f64,
    pub eps: f64,
    pub tc: f64,
    /// |γ^{2m}|.
    pub gamma2m_abs: f64,
    vprime: Poly<f64>,
}

/// h coefficients (ascending) and the three moment coefficients of V′/√R at infinity.
struct Moments {
    h: Vec<f64>,
    c: [f64; 3],
}

impl Lab {
    pub fn new(cd: &CriticalData) -> Result<Self, DscaleError> {
        let g = gamma_value(cd).map_err(|e| DscaleError::Curve(e.to_string()))?;
        Ok(Lab {
            m: cd.m,
            b: q_to_f64(&cd.b),
            be: q_to_f64(&(&cd.b * &cd.eps)),
            eps: q_to_f64(&cd.eps),
            tc: q_to_f64(&critical_temperature(cd)),
            gamma2m_abs: q_to_f64(&g).abs(),
            vprime: critical_potential(cd).map(q_to_f64),
        })
    }

    fn moments(&self, roots: &[f64; 4]) -> Moments {
        let r = Poly::from_roots(roots, Var::X);
        let ser = sqrt_quotient_at_infinity(&self.vprime, &r, 4).expect("monic quartic");
        let h = (0..2 * self.m as i64).map(|k| ser.coeff(-k)).collect();
        Moments { h, c: [ser.coeff(1), ser.coeff(2), ser.coeff(3)] }
    }

    /// h(x) for the given endpoints.
    pub fn h(&self, roots: &[f64; 4]) -> Vec<f64> {
        self.moments(roots).h
    }

    fn residual(&self, p: &[f64; 4], t: f64) -> Result<[f64; 4], DscaleError> {
        let [a1, b2, c, l] = *p;
        let d = (l / 2.0).exp();
        let roots = [a1, c - d, c + d, b2];
        let mo = self.moments(&roots);
        let bridge = theta_quadrature(|th| {
            let x = c + d * th.cos();
            poly_eval(&mo.h, x) * ((x - a1) * (b2 - x)).sqrt() * th.sin().powi(2)
        })?;
        Ok([mo.c[0], mo.c[1], mo.c[2] - 2.0 * t, bridge * 2.0 / PI])
    }

    fn state_of(&self, p: &[f64; 4], t: f64) -> Result<EndpointState, DscaleError> {
        let d = (p[3] / 2.0).exp();
        let mut st = EndpointState { a1: p[0], b1: p[2] - d, a2: p[2] + d, b2: p[1], t, x0: 0.0 };
        if !st.admissible() {
            return Err(DscaleError::InvalidRegion(format!("{st:?}")));
        }
        st.x0 = x0_solve(&st)?;
        Ok(st)
    }

    /// Leading-order seed: a₁ = −b + s₁τ, b₂ = b − s₂τ, b₁, a₂ = bε ∓ (|γ^{2m}|τ)^{1/(2m)}.
    pub fn seed(&self, t: f64) -> EndpointState {
        let tau = self.tc - t;
        let m2 = 2 * self.m as i32;
        let s1 = 2.0 / ((1.0 + self.eps).powi(m2) * self.b.powi(m2 + 1));
        let s2 = 2.0 / ((1.0 - self.eps).powi(m2) * self.b.powi(m2 + 1));
        let d = (self.gamma2m_abs * tau).powf(1.0 / m2 as f64);
        EndpointState { a1: -self.b + s1 * tau, b1: self.be - d, a2: self.be + d, b2: self.b - s2 * tau, t, x0: self.be }
    }

    /// Solve at any T < T_c by continuation from the near-critical seed.
    pub fn solve_at(&self, t: f64) -> Result<(EndpointState, f64), DscaleError> {
        let target = self.tc - t;
        let mut tau = target.min(1e-2 * self.tc);
        let mut guess = self.seed(self.tc - tau);
        loop {
            let (st, res) = self.solve(self.tc - tau, &guess)?;
            if tau >= target {
                return Ok((st, res));
            }
            tau = (tau * 1.5).min(target);
            guess = self.rescale(&st, self.tc - tau);
        }
    }

    /// Move a solved state to a nearby T along the leading-order scaling laws.
    pub fn rescale(&self, p: &EndpointState, t: f64) -> EndpointState {
        let (tp, tn) = (self.tc - p.t, self.tc - t);
        let shrink = (tn / tp).powf(1.0 / (2 * self.m) as f64);
        let mid = (p.b1 + p.a2) / 2.0;
        let half = (p.a2 - p.b1) / 2.0 * shrink;
        let cmid = self.be + (mid - self.be) * shrink;
        EndpointState {
            a1: -self.b + (p.a1 + self.b) * tn / tp,
            b2: self.b + (p.b2 - self.b) * tn / tp,
            b1: cmid - half,
            a2: cmid + half,
            t,
            x0: p.x0,
        }
    }

    /// Damped Newton on (a₁, b₂, (b₁ + a₂)/2, ln((a₂ − b₁)/2)²).
    pub fn solve(&self, t: f64, guess: &EndpointState) -> Result<(EndpointState, f64), DscaleError> {
        if !(t > 0.0 && t < self.tc) {
            return Err(DscaleError::InvalidRegion(format!("T = {t} outside (0, {})", self.tc)));
        }
        if !guess.admissible() {
            return Err(DscaleError::InvalidRegion(format!("guess {guess:?}")));
        }
        let d0 = (guess.a2 - guess.b1) / 2.0;
        let mut p = [guess.a1, guess.b2, (guess.a2 + guess.b1) / 2.0, (d0 * d0).ln()];
        let norm = |f: &[f64; 4]| f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let mut f = self.residual(&p, t)?;
        for _ in 0..100 {
            if norm(&f) < 1e-12 {
                return Ok((self.state_of(&p, t)?, norm(&f)));
            }
            let mut jac = [[0.0; 4]; 4];
            for k in 0..4 {
                let hk = 1e-7 * p[k].abs().max(1.0);
                let (mut up, mut dn) = (p, p);
                up[k] += hk;
                dn[k] -= hk;
                let (fu, fd) = (self.residual(&up, t)?, self.residual(&dn, t)?);
                for r in 0..4 {
                    jac[r][k] = (fu[r] - fd[r]) / (2.0 * hk);
                }
            }
            let step = solve4(jac, f).ok_or_else(|| DscaleError::NoConvergence { t, residual: norm(&f) })?;
            let n0 = norm(&f);
            let mut lam = 1.0;
            loop {
                let cand: [f64; 4] = std::array::from_fn(|k| p[k] - lam * step[k]);
                let d = (cand[3] / 2.0).exp();
                if cand[0] < cand[2] - d && cand[2] + d < cand[1] {
                    if let Ok(fc) = self.residual(&cand, t) {
                        if norm(&fc) < n0 || lam < 1e-3 {
                            p = cand;
                            f = fc;
                            break;
                        }
                    }
                }
                lam /= 2.0;
                if lam < 1e-6 {
                    return Err(DscaleError::InvalidRegion(format!("no admissible damped step at T = {t}")));
                }
            }
        }
        let r = norm(&f);
        if r < 1e-10 {
            return Ok((self.state_of(&p, t)?, r));
        }
        Err(DscaleError::NoConvergence { t, residual: r })
    }

    /// Σ over both cuts of ρ = ±h√|R|/(2πT), the sign fixed by the branch of √R on each cut.
    pub fn mass(&self, st: &EndpointState) -> Result<f64, DscaleError> {
        let h = self.h(&st.roots());
        let cut = |lo: f64, hi: f64, o1: f64, o2: f64, sign: f64| {
            let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
            theta_quadrature(|th| {
                let x = mid + half * th.cos();
                sign * poly_eval(&h, x) * ((x - o1) * (x - o2)).abs().sqrt() * half * half * th.sin().powi(2)
            })
        };
        let left = cut(st.a1, st.b1, st.a2, st.b2, -1.0)?;
        let right = cut(st.a2, st.b2, st.a1, st.b1, 1.0)?;
        Ok((left + right) / (2.0 * PI * st.t))
    }

    /// Density sign on `samples` interior points of each cut.
    pub fn density_nonnegative(&self, st: &EndpointState, samples: usize) -> bool {
        let h = self.h(&st.roots());
        let ok = |lo: f64, hi: f64, sign: f64| {
            (1..=samples).all(|k| {
                let x = lo + (hi - lo) * k as f64 / (samples + 1) as f64;
                sign * poly_eval(&h, x) >= -1e-12
            })
        };
        ok(st.a1, st.b1, -1.0) && ok(st.a2, st.b2, 1.0)
    }

    /// d/dT of (a₁, b₁, a₂, b₂): 4(e − x₀)/(h(e)Π(e − other endpoints)).
    pub fn hodograph_rhs(&self, r: &[f64; 4], t: f64) -> Result<[f64; 4], DscaleError> {
        let st = EndpointState { a1: r[0], b1: r[1], a2: r[2], b2: r[3], t, x0: 0.0 };
        if !st.admissible() {
            return Err(DscaleError::InvalidRegion(format!("{st:?}")));
        }
        let x0 = x0_solve(&st)?;
        let h = self.h(r);
        Ok(std::array::from_fn(|i| {
            let e = r[i];
            let prod: f64 = (0..4).filter(|&j| j != i).map(|j| e - r[j]).product();
            4.0 * (e - x0) / (poly_eval(&h, e) * prod)
        }))
    }

    /// Adaptive Dormand–Prince integration of the hodograph system over [T, T + dT].
    pub fn hodograph_step(&self, st: &EndpointState, dt: f64) -> Result<EndpointState, DscaleError> {
        let tol = 1e-10;
        let end = st.t + dt;
        let mut t = st.t;
        let mut y = st.roots();
        let mut h = dt;
        let h_min = dt.abs() * 1e-9;
        while (end - t).abs() > 1e-15 * end.abs().max(1.0) {
            if (t + h - end) * dt.signum() > 0.0 {
                h = end - t;
            }
            match dopri_step(|tt, yy| self.hodograph_rhs(yy, tt), t, &y, h) {
                Ok((y5, err)) if err <= tol => {
                    t += h;
                    y = y5;
                    h *= (0.9 * (tol / err.max(1e-300)).powf(0.2)).min(4.0);
                }
                Ok((_, err)) => h *= (0.9 * (tol / err).powf(0.25)).max(0.1),
                Err(_) => h *= 0.25,
            }
            if h.abs() < h_min {
                return Err(DscaleError::StepUnderflow { t });
            }
        }
        let mut out = EndpointState { a1: y[0], b1: y[1], a2: y[2], b2: y[3], t: end, x0: 0.0 };
        out.x0 = x0_solve(&out)?;
        Ok(out)
    }
}

/// Gaussian elimination with partial pivoting on a 4×4 system.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col] == 0.0 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let s: f64 = (r + 1..4).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

type Rhs<'a> = dyn Fn(f64, &[f64; 4]) -> Result<[f64; 4], DscaleError> + 'a;

fn dopri_step<'a>(
    f: impl Fn(f64, &[f64; 4]) -> Result<[f64; 4], DscaleError> + 'a,
    t: f64,
    y: &[f64; 4],
    h: f64,
) -> Result<([f64; 4], f64), DscaleError> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let f: &Rhs<'a> = &f;
    let mut k = [[0.0; 4]; 7];
    for s in 0..7 {
        let ys: [f64; 4] = std::array::from_fn(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>());
        k[s] = f(t + C[s] * h, &ys)?;
    }
    let y5: [f64; 4] = std::array::from_fn(|i| y[i] + h * (0..7).map(|s| B5[s] * k[s][i]).sum::<f64>());
    let err = (0..4)
        .map(|i| (h * (0..7).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>()).abs() / y[i].abs().max(1.0))
        .fold(0.0, f64::max);
    Ok((y5, err))
}

/// x₀ = I₁/I₀ with I_k = ∫_{b₁}^{a₂} z^k/√|(z − a₁)(z − b₁)(z − a₂)(z − b₂)| dz.
pub fn x0_solve(st: &EndpointState) -> Result<f64, DscaleError> {
    let (mid, half) = ((st.b1 + st.a2) / 2.0, (st.a2 - st.b1) / 2.0);
    let w = |th: f64| {
        let z = mid + half * th.cos();
        1.0 / ((z - st.a1) * (st.b2 - z)).sqrt()
    };
    let i0 = theta_quadrature(w)?;
    let i1 = theta_quadrature(|th| (mid + half * th.cos()) * w(th))?;
    let x0 = i1 / i0;
    if !x0.is_finite() {
        return Err(DscaleError::QuadratureFailure("x0 weight integrals".into()));
    }
    Ok(x0)
}

pub fn solve_endpoints(cd: &CriticalData, t: f64, guess: &EndpointState) -> Result<EndpointState, DscaleError> {
    Ok(Lab::new(cd)?.solve(t, guess)?.0)
}

pub fn hodograph_step(cd: &CriticalData, st: &EndpointState, dt: f64) -> Result<EndpointState, DscaleError> {
    Lab::new(cd)?.hodograph_step(st, dt)
}

/// T = T_c(1 − 10^{−k}) for k = 2..6 in steps of 1/5.
pub fn default_grid(cd: &CriticalData) -> Vec<f64> {
    grid(cd, 4, 5)
}

/// T = T_c(1 − 10^{−k}) for k = 2, 2 + 1/p, …, 2 + d.
pub fn grid(cd: &CriticalData, decades: usize, per_decade: usize) -> Vec<f64> {
    let tc = q_to_f64(&critical_temperature(cd));
    let p = per_decade.max(1);
    (0..=decades * p).map(|i| tc * (1.0 - 10f64.powf(-(2.0 + i as f64 / p as f64)))).collect()
}

/// One solved grid point.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GridRow {
    pub state: EndpointState,
    pub newton_residual: f64,
    pub mass_residual: f64,
}

/// Exponent and constant estimates from a grid run.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingFit {
    pub m: usize,
    pub nu_hat: f64,
    pub alpha_hat: f64,
    pub gamma_hat: f64,
    pub gamma2m_hat: f64,
    pub gamma2m_abs_exact: f64,
    /// |(b₁ − bε) + (a₂ − bε)|/|a₂ − bε| at the point closest to T_c.
    pub alpha_plus_gamma_rel: f64,
    pub a1_slope: f64,
    pub a1_slope_exact: f64,
    pub b2_slope: f64,
    pub b2_slope_exact: f64,
    pub max_mass_residual: f64,
    pub density_nonnegative: bool,
    /// max |a₁ + b₂|, |b₁ + a₂| (meaningful for ε = 0).
    pub symmetry_residual: f64,
    /// Newton residuals per grid point.
    pub residuals: Vec<f64>,
    /// Temperatures entering the ν̂ regression.
    pub fit_window: Vec<f64>,
    #[serde(skip)]
    pub rows: Vec<GridRow>,
}

impl ScalingFit {
    /// T, a1, b1, a2, b2, x0, mass_residual.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("T,a1,b1,a2,b2,x0,mass_residual\n");
        for r in &self.rows {
            let st = &r.state;
            let _ = writeln!(s, "{},{},{},{},{},{},{:e}", st.t, st.a1, st.b1, st.a2, st.b2, st.x0, r.mass_residual);
        }
        s
    }
}

fn lsq_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Richardson extrapolation of S(τ) = s + cτ^p from two samples.
fn richardson(s_coarse: f64, tau_coarse: f64, s_fine: f64, tau_fine: f64, p: f64) -> f64 {
    let r = (tau_coarse / tau_fine).powf(p);
    (r * s_fine - s_coarse) / (r - 1.0)
}

pub fn scaling_fit(cd: &CriticalData, grid: &[f64]) -> Result<ScalingFit, DscaleError> {
    if grid.len() < 4 {
        return Err(DscaleError::InsufficientData(grid.len()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(DscaleError::InvalidRegion("grid must be strictly increasing".into()));
    }
    let lab = Lab::new(cd)?;
    let mut rows: Vec<GridRow> = Vec::with_capacity(grid.len());
    let mut guess = lab.seed(grid[0]);
    for &t in grid {
        if let Some(prev) = rows.last() {
            guess = lab.rescale(&prev.state, t);
        }
        let (st, res) = lab.solve(t, &guess)?;
        let mass = lab.mass(&st)?;
        rows.push(GridRow { state: st, newton_residual: res, mass_residual: mass - 1.0 });
    }
    let m2 = (2 * lab.m) as f64;
    let tau = |r: &GridRow| lab.tc - r.state.t;
    let last = rows.last().expect("nonempty");
    let tau_min = tau(last);
    let window: Vec<&GridRow> = rows.iter().filter(|r| tau(r) <= 10.0 * tau_min * (1.0 + 1e-9)).collect();
    let nu_hat = lsq_slope(
        &window.iter().map(|r| tau(r).ln()).collect::<Vec<_>>(),
        &window.iter().map(|r| (r.state.a2 - lab.be).abs().ln()).collect::<Vec<_>>(),
    );
    let scale = tau_min.powf(1.0 / m2);
    let gamma_hat = (last.state.a2 - lab.be) / scale;
    let alpha_hat = (last.state.b1 - lab.be) / scale;
    let gamma2m_hat = (last.state.a2 - lab.be).powf(m2) / tau_min;
    let apg = ((last.state.b1 - lab.be) + (last.state.a2 - lab.be)).abs() / (last.state.a2 - lab.be).abs();

    let coarse = window[0];
    let slope = |r: &GridRow, v: f64, at_tc: f64| (v - at_tc) / (r.state.t - lab.tc);
    let p = 1.0 / lab.m as f64;
    let a1_slope = richardson(
        slope(coarse, coarse.state.a1, -lab.b),
        tau(coarse),
        slope(last, last.state.a1, -lab.b),
        tau_min,
        p,
    );
    let b2_slope =
        richardson(slope(coarse, coarse.state.b2, lab.b), tau(coarse), slope(last, last.state.b2, lab.b), tau_min, p);
    let mi = 2 * lab.m as i32;
    let a1_exact = -2.0 / ((1.0 + lab.eps).powi(mi) * lab.b.powi(mi + 1));
    let b2_exact = 2.0 / ((1.0 - lab.eps).powi(mi) * lab.b.powi(mi + 1));
    let symmetry_residual = rows
        .iter()
        .map(|r| (r.state.a1 + r.state.b2).abs().max((r.state.b1 + r.state.a2).abs()))
        .fold(0.0, f64::max);
    Ok(ScalingFit {
        m: lab.m,
        nu_hat,
        alpha_hat,
        gamma_hat,
        gamma2m_hat,
        gamma2m_abs_exact: lab.gamma2m_abs,
        alpha_plus_gamma_rel: apg,
        a1_slope,
        a1_slope_exact: a1_exact,
        b2_slope,
        b2_slope_exact: b2_exact,
        max_mass_residual: rows.iter().map(|r| r.mass_residual.abs()).fold(0.0, f64::max),
        density_nonnegative: rows.iter().all(|r| lab.density_nonnegative(&r.state, 50)),
        symmetry_residual,
        residuals: rows.iter().map(|r| r.newton_residual).collect(),
        fit_window: window.iter().map(|r| r.state.t).collect(),
        rows,
    })
}
