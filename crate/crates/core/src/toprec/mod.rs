//! Residue recursion for the correlator differentials 𝒲_n^(g) on the Lax curve.
//!
//! Stable correlators are multivariate partial fractions Σ c·Π_i (z_i − a_i)^{−k_i}
//! with a_i = ±1 and rational c, times the phase i^{2g−2+n}.

mod loops;
mod series;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use parking_lot::RwLock;
use rayon::prelude::*;

use crate::curve::{lax_curve, CurveSpec};
use crate::exact::{laurent_expand, q, qf, ExactError, Gauss, Point, Poly, RatFunc, Var, Q};
use series::{code, conj_slot, decode, direct_slot, pow_lin, KSeries, Key, Ser};

pub use loops::{
    random_points,
    kernel_parity_check, loop_check, pole_structure_check, symmetry_check, w02_consistency, CheckReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TrError {
    #[error("W_{n}^({g}) is needed but not in the table")]
    DependencyMissing { g: usize, n: usize },
    #[error("(g, n) = ({g}, {n}) is outside the stable range or above the ceiling")]
    OutOfRange { g: usize, n: usize },
    #[error("loop equation ({g}, {n}) fails: {location}")]
    LoopEquationViolation { g: usize, n: usize, location: String },
    #[error("W_{n}^({g}) is not symmetric")]
    SymmetryFailure { g: usize, n: usize },
    #[error("W_{n}^({g}) has a pole off ±1: {detail}")]
    PoleStructure { g: usize, n: usize, detail: String },
    #[error("bad specialization: {0}")]
    BadSlots(String),
    #[error("curve: {0}")]
    Curve(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Value assigned to one argument when specializing.
#[derive(Clone, Debug, PartialEq)]
pub enum Slot {
    Free,
    Fixed(Q),
}

#[derive(Clone, Debug, PartialEq)]
enum Body {
    W01(RatFunc<Gauss>),
    W02,
    Pf(HashMap<Key, Q>),
}

/// 𝒲_n^(g)(z₁..z_n) with exact partial specialization.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlator {
    pub g: usize,
    pub n: usize,
    body: Body,
}

/// 2g − 2 + n.
pub fn euler(g: usize, n: usize) -> i64 {
    2 * g as i64 - 2 + n as i64
}

fn i_power(chi: i64) -> Gauss {
    match chi.rem_euclid(4) {
        0 => Gauss::real(q(1)),
        1 => Gauss::i(),
        2 => Gauss::real(q(-1)),
        _ => Gauss::new(q(0), q(-1)),
    }
}

fn zc<F: crate::exact::Field>(v: F) -> RatFunc<F> {
    RatFunc::constant(v, Var::Z)
}

fn qpow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

/// x(z), x′(z) and ŷ(z) with y = iŷ.
#[derive(Clone, Debug)]
pub struct Uniformization {
    pub u0: Q,
    pub x: RatFunc<Q>,
    pub dx: RatFunc<Q>,
    pub yhat: RatFunc<Q>,
}

impl Uniformization {
    pub fn new(spec: &CurveSpec) -> Result<Self, TrError> {
        let lc = lax_curve(spec).map_err(|e| TrError::Curve(e.to_string()))?;
        let u0 = spec.u0.clone();
        let z = RatFunc::<Q>::var_fn(Var::Z);
        let one = zc(q(1));
        let zz = z.clone() * z.clone();
        let x = (zz.clone() + one.clone()) * zc(&u0 / q(2)) / z.clone();
        let dx = (zz.clone() - one.clone()) * zc(&u0 / q(2)) / zz.clone();
        let qx = RatFunc::from_poly(lc.q_factor.with_var(Var::Z)).compose(&x)?;
        let yhat = (zz - one) * zc(&u0 / q(2)) / z * qx;
        Ok(Uniformization { u0, x, dx, yhat })
    }

    /// y(z) = iŷ(z).
    pub fn y(&self) -> RatFunc<Gauss> {
        self.yhat.map(|c| Gauss::real(c.clone())).scale(&Gauss::i())
    }

    /// 2ŷ(z)x′(z).
    fn omega_hat(&self) -> RatFunc<Q> {
        self.yhat.clone() * self.dx.clone() * zc(q(2))
    }
}

impl Correlator {
    pub fn euler(&self) -> i64 {
        euler(self.g, self.n)
    }

    pub fn is_base(&self) -> bool {
        !matches!(self.body, Body::Pf(_))
    }

    /// Number of partial-fraction terms (0 for the base correlators).
    pub fn term_count(&self) -> usize {
        match &self.body {
            Body::Pf(t) => t.len(),
            _ => 0,
        }
    }

    /// Highest pole order at ±1 in any single variable.
    pub fn max_pole_order(&self) -> u8 {
        match &self.body {
            Body::Pf(t) => t.keys().flat_map(|k| k.iter().map(|&c| decode(c).1)).max().unwrap_or(0),
            Body::W02 => 0,
            Body::W01(_) => 0,
        }
    }

    /// Exact equality of partial-fraction data after permuting arguments.
    pub fn permuted_equals(&self, perm: &[usize]) -> bool {
        match &self.body {
            Body::Pf(t) => t.iter().all(|(k, v)| {
                let pk: Key = perm.iter().map(|&i| k[i]).collect();
                t.get(&pk) == Some(v)
            }),
            _ => true,
        }
    }

    /// 𝒲 with every `Free` slot set to the same variable z.
    pub fn specialize(&self, slots: &[Slot]) -> Result<RatFunc<Gauss>, TrError> {
        if slots.len() != self.n {
            return Err(TrError::BadSlots(format!("expected {} slots, got {}", self.n, slots.len())));
        }
        let z = RatFunc::<Gauss>::var_fn(Var::Z);
        let as_fn = |s: &Slot| match s {
            Slot::Free => z.clone(),
            Slot::Fixed(c) => zc(Gauss::real(c.clone())),
        };
        match &self.body {
            Body::W01(f) => match &slots[0] {
                Slot::Free => Ok(f.clone()),
                Slot::Fixed(c) => Ok(zc(f.eval(&Gauss::real(c.clone()))?)),
            },
            Body::W02 => {
                let d = as_fn(&slots[0]) - as_fn(&slots[1]);
                if d.is_zero() {
                    return Err(TrError::BadSlots("coincident arguments of W_2^(0)".into()));
                }
                Ok((d.clone() * d).inv()?)
            }
            Body::Pf(t) => {
                let r = specialize_pf(t, slots)?;
                Ok(r.map(|c| Gauss::real(c.clone())).scale(&i_power(self.euler())))
            }
        }
    }

    /// Value at rational arguments.
    pub fn evaluate(&self, pts: &[Q]) -> Result<Gauss, TrError> {
        let slots: Vec<Slot> = pts.iter().cloned().map(Slot::Fixed).collect();
        let r = self.specialize(&slots)?;
        Ok(r.eval(&Gauss::real(q(0)))?)
    }
}

fn specialize_pf(t: &HashMap<Key, Q>, slots: &[Slot]) -> Result<RatFunc<Q>, TrError> {
    let mut fixed_pow: HashMap<(usize, u8), Q> = HashMap::new();
    for (i, s) in slots.iter().enumerate() {
        if let Slot::Fixed(c) = s {
            if c == &q(1) || c == &q(-1) {
                return Err(TrError::BadSlots(format!("argument {i} sits on a pole")));
            }
        }
    }
    let mut acc: HashMap<(u32, u32), Q> = HashMap::new();
    for (key, coef) in t {
        let mut c = coef.clone();
        let (mut kp, mut km) = (0u32, 0u32);
        for (i, &cd) in key.iter().enumerate() {
            let (b, k) = decode(cd);
            match &slots[i] {
                Slot::Free => {
                    if b > 0 {
                        kp += k as u32
                    } else {
                        km += k as u32
                    }
                }
                Slot::Fixed(x) => {
                    let f = fixed_pow
                        .entry((i, cd))
                        .or_insert_with(|| Q::one() / qpow(&(x - q(b as i64)), k as u32));
                    c *= &*f;
                }
            }
        }
        *acc.entry((kp, km)).or_insert_with(Q::zero) += c;
    }
    let kp_max = acc.keys().map(|k| k.0).max().unwrap_or(0);
    let km_max = acc.keys().map(|k| k.1).max().unwrap_or(0);
    let zm = Poly::new(vec![q(-1), q(1)], Var::Z);
    let zp = Poly::new(vec![q(1), q(1)], Var::Z);
    let pm: Vec<Poly<Q>> = (0..=kp_max).map(|e| zm.pow(e)).collect();
    let pp: Vec<Poly<Q>> = (0..=km_max).map(|e| zp.pow(e)).collect();
    let mut num = Poly::zero(Var::Z);
    for ((a, b), c) in acc {
        if c.is_zero() {
            continue;
        }
        num = num + (pm[(kp_max - a) as usize].clone() * pp[(km_max - b) as usize].clone()).scale(&c);
    }
    let (mut kp, mut km) = (kp_max, km_max);
    if num.is_zero() {
        return Ok(RatFunc::zero(Var::Z));
    }
    while kp > 0 && num.eval(&q(1)).is_zero() {
        num = num.divrem(&zm).0;
        kp -= 1;
    }
    while km > 0 && num.eval(&q(-1)).is_zero() {
        num = num.divrem(&zp).0;
        km -= 1;
    }
    Ok(RatFunc::from_coprime(num, pm[kp as usize].clone() * pp[km as usize].clone()))
}

/// 𝒲₁^(0)(z) = y(z)·x′(z).
pub fn base_w01(spec: &CurveSpec) -> Result<Correlator, TrError> {
    let un = Uniformization::new(spec)?;
    let f = un.y() * un.dx.map(|c| Gauss::real(c.clone()));
    Ok(Correlator { g: 0, n: 1, body: Body::W01(f) })
}

/// 𝒲₂^(0)(z₁, z₂) = 1/(z₁ − z₂)².
pub fn base_w02() -> Correlator {
    Correlator { g: 0, n: 2, body: Body::W02 }
}

/// Laurent data of the recursion kernel at one branch point.
#[derive(Clone, Debug)]
struct BranchData {
    a: i8,
    /// 1/(2ŷx′) around z = a.
    inv_omega: RatFunc<Q>,
}

/// Memoized correlators for one curve.
pub struct TRTable {
    pub spec: CurveSpec,
    pub ceiling: i64,
    uni: Uniformization,
    branches: [BranchData; 2],
    entries: RwLock<HashMap<(usize, usize), Arc<Correlator>>>,
}

impl TRTable {
    pub fn new(spec: CurveSpec) -> Result<Self, TrError> {
        let uni = Uniformization::new(&spec)?;
        let inv = uni.omega_hat().inv()?;
        let branches = [BranchData { a: 1, inv_omega: inv.clone() }, BranchData { a: -1, inv_omega: inv }];
        let mut map = HashMap::new();
        map.insert((0, 1), Arc::new(base_w01(&spec)?));
        map.insert((0, 2), Arc::new(base_w02()));
        Ok(TRTable { spec, ceiling: 4, uni, branches, entries: RwLock::new(map) })
    }

    pub fn with_ceiling(mut self, c: i64) -> Self {
        self.ceiling = c;
        self
    }

    pub fn uniformization(&self) -> &Uniformization {
        &self.uni
    }

    pub fn get(&self, g: usize, n: usize) -> Option<Arc<Correlator>> {
        self.entries.read().get(&(g, n)).cloned()
    }

    pub fn insert(&self, c: Correlator) -> Arc<Correlator> {
        let arc = Arc::new(c);
        self.entries.write().entry((arc.g, arc.n)).or_insert_with(|| arc.clone()).clone()
    }

    /// Keys present, sorted.
    pub fn keys(&self) -> Vec<(usize, usize)> {
        let mut k: Vec<_> = self.entries.read().keys().copied().collect();
        k.sort();
        k
    }

    /// Compute (g, n) and everything it depends on, level by level in 2g − 2 + n.
    pub fn compute(&self, g: usize, n: usize) -> Result<Arc<Correlator>, TrError> {
        if n == 0 || euler(g, n) > self.ceiling {
            return Err(TrError::OutOfRange { g, n });
        }
        if let Some(c) = self.get(g, n) {
            return Ok(c);
        }
        let mut need = BTreeSet::new();
        collect_deps(g, n, &mut need);
        let mut levels: Vec<Vec<(usize, usize)>> = Vec::new();
        for &(h, k) in &need {
            let chi = euler(h, k);
            if chi < 1 {
                continue;
            }
            let lvl = chi as usize;
            if levels.len() < lvl {
                levels.resize(lvl, Vec::new());
            }
            levels[lvl - 1].push((h, k));
        }
        for lvl in levels {
            let todo: Vec<_> = lvl.into_iter().filter(|&(h, k)| self.get(h, k).is_none()).collect();
            let done: Result<Vec<Correlator>, TrError> = todo.par_iter().map(|&(h, k)| tr_step(self, h, k)).collect();
            for c in done? {
                self.insert(c);
            }
        }
        self.get(g, n).ok_or(TrError::DependencyMissing { g, n })
    }

    /// Every stable (g, n) with 2g − 2 + n ≤ ceiling.
    pub fn compute_all(&self) -> Result<Vec<(usize, usize)>, TrError> {
        let mut out = Vec::new();
        for chi in 1..=self.ceiling {
            for g in 0..=((chi + 1) / 2) as usize {
                let n = chi + 2 - 2 * g as i64;
                if n >= 1 {
                    self.compute(g, n as usize)?;
                    out.push((g, n as usize));
                }
            }
        }
        Ok(out)
    }
}

fn collect_deps(g: usize, n: usize, out: &mut BTreeSet<(usize, usize)>) {
    if !out.insert((g, n)) || euler(g, n) < 1 {
        return;
    }
    for (h, k) in direct_deps(g, n) {
        collect_deps(h, k, out);
    }
}

fn direct_deps(g: usize, n: usize) -> Vec<(usize, usize)> {
    let s = n - 1;
    let mut v = Vec::new();
    if g >= 1 {
        v.push((g - 1, s + 2));
    }
    for h in 0..=g {
        for i in 0..=s {
            if (h, i) == (0, 0) || (h, i) == (g, s) {
                continue;
            }
            v.push((h, 1 + i));
            v.push((g - h, 1 + s - i));
        }
    }
    v
}

#[derive(Clone, Copy, PartialEq)]
enum Mode {
    Direct,
    Conj,
}

/// Pole order at z = a of one main argument.
fn main_pole(c: &Correlator, slot: usize, a: i8) -> i32 {
    match &c.body {
        Body::Pf(t) => t
            .keys()
            .map(|k| decode(k[slot]))
            .filter(|(b, _)| *b == a)
            .map(|(_, k)| k as i32)
            .max()
            .unwrap_or(0),
        _ => 0,
    }
}

fn place(spect: &[u8], labels: &[usize], s: usize) -> Key {
    let mut key = vec![0u8; s];
    for (c, &l) in spect.iter().zip(labels) {
        key[l] = *c;
    }
    key
}

/// 𝒲(z or 1/z, spectators) around z = a as a keyed series, exponents below `hi`.
fn expand_factor(c: &Correlator, mode: Mode, labels: &[usize], s: usize, a: i8, hi: i32, low: i32) -> KSeries {
    let mut out = KSeries::new(low, hi);
    match &c.body {
        Body::W02 => {
            let l0 = labels[0];
            for l in 0..hi.max(0) {
                let key = place(&[code(a, (l + 2) as u8)], &[l0], s);
                let ser = match mode {
                    Mode::Direct => Ser { low: l, c: vec![q(l as i64 + 1)] },
                    Mode::Conj => {
                        let sign = if l % 2 == 1 { q(-a as i64) } else { q(1) };
                        pow_lin(&q(a as i64), -(l as i64 + 2), (hi - l) as usize)
                            .shift(l)
                            .scale(&-(q(l as i64 + 1) * sign))
                    }
                };
                out.add_scaled(&key, &Q::one(), &ser);
            }
        }
        Body::Pf(t) => {
            let mut cache: HashMap<u8, Ser> = HashMap::new();
            for (key, coef) in t {
                let ser = cache.entry(key[0]).or_insert_with(|| {
                    let (b, k) = decode(key[0]);
                    match mode {
                        Mode::Direct => direct_slot(a, b, k, hi),
                        Mode::Conj => conj_slot(a, b, k, hi),
                    }
                });
                out.add_scaled(&place(&key[1..], labels, s), coef, ser);
            }
        }
        Body::W01(_) => unreachable!("W_1^(0) never enters the recursion"),
    }
    out
}

/// 𝒲(z, 1/z, spectators)·(−1/z²) around z = a.
fn expand_diagonal(c: &Correlator, s: usize, a: i8, hi: i32, low: i32) -> KSeries {
    let mut out = KSeries::new(low, hi);
    let labels: Vec<usize> = (0..s).collect();
    match &c.body {
        Body::W02 => {
            let ser = pow_lin(&q(2 * a as i64), -2, (hi + 2).max(0) as usize).shift(-2).scale(&q(-1));
            out.add_scaled(&vec![0; s], &Q::one(), &ser);
        }
        Body::Pf(t) => {
            let mut cache: HashMap<(u8, u8), Ser> = HashMap::new();
            for (key, coef) in t {
                let ser = cache.entry((key[0], key[1])).or_insert_with(|| {
                    let (b0, k0) = decode(key[0]);
                    let (b1, k1) = decode(key[1]);
                    let p0 = if b0 == a { k0 as i32 } else { 0 };
                    let p1 = if b1 == a { k1 as i32 } else { 0 };
                    let d = direct_slot(a, b0, k0, hi + p1);
                    let cj = conj_slot(a, b1, k1, hi + p0);
                    d.mul(&cj, hi)
                });
                out.add_scaled(&place(&key[2..], &labels, s), coef, ser);
            }
        }
        Body::W01(_) => unreachable!("W_1^(0) never enters the recursion"),
    }
    out
}

/// One recursion step producing 𝒲_n^(g) from entries already in the table.
pub fn tr_step(table: &TRTable, g: usize, n: usize) -> Result<Correlator, TrError> {
    if n == 0 || euler(g, n) < 1 {
        return Err(TrError::OutOfRange { g, n });
    }
    let fetch = |h: usize, k: usize| table.get(h, k).ok_or(TrError::DependencyMissing { g: h, n: k });
    let s = n - 1;
    let lower = if g >= 1 { Some(fetch(g - 1, s + 2)?) } else { None };
    let mut pairs = Vec::new();
    for h in 0..=g {
        for mask in 0u32..(1 << s) {
            let i = mask.count_ones() as usize;
            if (h, i) == (0, 0) || (h, i) == (g, s) {
                continue;
            }
            let inside: Vec<usize> = (0..s).filter(|b| mask >> b & 1 == 1).collect();
            let outside: Vec<usize> = (0..s).filter(|b| mask >> b & 1 == 0).collect();
            pairs.push((fetch(h, 1 + i)?, inside, fetch(g - h, 1 + s - i)?, outside));
        }
    }

    let mut terms: HashMap<Key, Q> = HashMap::new();
    for br in &table.branches {
        let a = br.a;
        let lower_f = lower.as_ref().map(|c| {
            let p = match c.body {
                Body::W02 => 2,
                _ => main_pole(c, 0, a) + main_pole(c, 1, a),
            };
            expand_diagonal(c, s, a, 1, -p)
        });
        let pair_fs: Vec<KSeries> = pairs
            .par_iter()
            .map(|(ca, ia, cb, ib)| {
                let pa = main_pole(ca, 0, a);
                let pb = main_pole(cb, 0, a);
                let fa = expand_factor(ca, Mode::Direct, ia, s, a, pb + 1, -pa);
                let fb = expand_factor(cb, Mode::Conj, ib, s, a, pa + 1, -pb);
                fa.mul(&fb, 1)
            })
            .collect();
        let low = pair_fs.iter().chain(lower_f.iter()).map(|f| f.low).min().unwrap_or(0);
        let mut f = KSeries::new(low, 1);
        for p in pair_fs.into_iter().chain(lower_f) {
            f.absorb(p);
        }
        if f.c.iter().all(|m| m.values().all(|v| v.is_zero())) {
            continue;
        }
        let pf = f.pole_order().max(0);
        let inv = laurent_expand(&br.inv_omega, &Point::Finite(q(a as i64)), pf as i64 + 2);
        let inv_s = Ser { low: inv.low() as i32, c: (inv.low()..pf as i64).map(|e| inv.coeff(e)).collect() };
        let zeta = Ser {
            low: 0,
            c: (0..(pf + 4) as usize)
                .map(|l| if l == 0 { q(0) } else if l % 2 == 1 { q(-1) } else { q(a as i64) })
                .collect(),
        };
        let len = pf + 4;
        let mut zeta_pow = Ser { low: 0, c: vec![q(1)] };
        for j in 1..=(pf + 1) {
            zeta_pow = zeta_pow.mul(&zeta, len);
            let mut wj = vec![q(0); len as usize];
            if (j as usize) < wj.len() {
                wj[j as usize] = q(1);
            }
            for (x, z) in wj.iter_mut().zip(&zeta_pow.c) {
                *x -= z;
            }
            let ej = Ser { low: 0, c: wj }.scale(&qf(1, 2)).mul(&inv_s, pf);
            let tag = code(a, (j + 1) as u8);
            for e in ej.low..pf {
                let ce = ej.get(e);
                if ce.is_zero() {
                    continue;
                }
                if let Some(m) = f.get(-1 - e) {
                    for (k, v) in m {
                        let mut key = k.clone();
                        key.push(tag);
                        *terms.entry(key).or_insert_with(Q::zero) -= &ce * v;
                    }
                }
            }
        }
    }
    terms.retain(|_, v| !v.is_zero());
    Ok(Correlator { g, n, body: Body::Pf(terms) })
}
