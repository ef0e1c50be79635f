//! Loop equations, pole structure and symmetry of the computed correlators.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{euler, zc, Slot, TRTable, TrError};
use crate::exact::{q, Gauss, Q, RatFunc, Var};

/// Outcome of one structural check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub g: usize,
    pub n: usize,
    pub points: Vec<String>,
    pub passed: bool,
    pub detail: String,
}

fn g_of(c: &Q) -> Gauss {
    Gauss::real(c.clone())
}

fn lift(r: &RatFunc<Q>) -> RatFunc<Gauss> {
    r.map(g_of)
}

fn slot_fn(s: &Slot) -> RatFunc<Gauss> {
    match s {
        Slot::Free => RatFunc::var_fn(Var::Z),
        Slot::Fixed(c) => zc(g_of(c)),
    }
}

fn at(r: &RatFunc<Gauss>, s: &Slot) -> Result<RatFunc<Gauss>, TrError> {
    Ok(match s {
        Slot::Free => r.clone(),
        Slot::Fixed(c) => zc(r.eval(&g_of(c))?),
    })
}

/// W_k^(h) in the x-plane, with free slots on z.
fn w_x(table: &TRTable, h: usize, k: usize, slots: &[Slot]) -> Result<RatFunc<Gauss>, TrError> {
    let un = table.uniformization();
    match (h, k) {
        (0, 1) => at(&un.y(), &slots[0]),
        (0, 2) => {
            let (s1, s2) = (slot_fn(&slots[0]), slot_fn(&slots[1]));
            let one = zc(g_of(&q(1)));
            let u2 = g_of(&(&un.u0 * &un.u0));
            let num = (s1.clone() * s1.clone() * s2.clone() * s2.clone()).scale(&g_of(&q(4)));
            let c = s1.clone() * s2.clone() - one.clone();
            let den = ((s1.clone() * s1 - one.clone()) * (s2.clone() * s2 - one) * c.clone() * c).scale(&u2);
            Ok(num / den)
        }
        _ => {
            let c = table.compute(h, k)?;
            let mut r = c.specialize(slots)?;
            let dx = lift(&un.dx);
            for s in slots {
                r = r / at(&dx, s)?;
            }
            Ok(r)
        }
    }
}

/// P_n^(g)(x; x(z₁)..x(z_{n−1})) must be a polynomial in x = x(z).
pub fn loop_check(table: &TRTable, g: usize, n: usize, points: &[Q]) -> Result<CheckReport, TrError> {
    if n == 0 || points.len() + 1 != n {
        return Err(TrError::BadSlots(format!("need {} spectator points", n.saturating_sub(1))));
    }
    let s = points.len();
    let fixed: Vec<Slot> = points.iter().cloned().map(Slot::Fixed).collect();
    let un = table.uniformization();
    let z = RatFunc::<Gauss>::var_fn(Var::Z);
    let mut p = RatFunc::zero(Var::Z);

    if g >= 1 {
        let mut slots = vec![Slot::Free, Slot::Free];
        slots.extend(fixed.iter().cloned());
        p = p + w_x(table, g - 1, s + 2, &slots)?;
    }
    for h in 0..=g {
        for mask in 0u32..(1 << s) {
            let i = mask.count_ones() as usize;
            let pick = |inside: bool| -> Vec<Slot> {
                let mut v = vec![Slot::Free];
                v.extend((0..s).filter(|b| (mask >> b & 1 == 1) == inside).map(|b| fixed[b].clone()));
                v
            };
            p = p + w_x(table, h, 1 + i, &pick(true))? * w_x(table, g - h, 1 + s - i, &pick(false))?;
        }
    }
    let x = lift(&un.x);
    let dx = lift(&un.dx);
    for j in 0..s {
        let mut slots = vec![Slot::Free];
        slots.extend((0..s).filter(|&b| b != j).map(|b| fixed[b].clone()));
        let bz = w_x(table, g, s, &slots)?;
        let zj = g_of(&points[j]);
        let b_at = zc(bz.eval(&zj)?);
        let db_at = zc(bz.derivative().eval(&zj)? / dx.eval(&zj)?);
        let dxj = x.clone() - zc(x.eval(&zj)?);
        p = p - db_at / dxj.clone() + (bz - b_at) / (dxj.clone() * dxj);
    }

    let mut cands = vec![g_of(&q(1)), g_of(&q(-1))];
    for c in points {
        cands.push(g_of(c));
        cands.push(g_of(&(q(1) / c)));
    }
    let (orders, rest) = p.strip_poles(&cands);
    let (_, rest0) = p.strip_poles(&[g_of(&q(0))]);
    let bad: Vec<String> = orders
        .iter()
        .zip(&cands)
        .filter(|(k, _)| **k > 0)
        .map(|(k, c)| format!("pole of order {k} at z = {c}"))
        .collect();
    let report_pts: Vec<String> = points.iter().map(|c| c.to_string()).collect();
    if !bad.is_empty() || rest0.degree() != Some(0) {
        let mut loc = bad.join(", ");
        if loc.is_empty() {
            loc = format!("denominator factor {rest} off the expected points");
        }
        return Err(TrError::LoopEquationViolation { g, n, location: loc });
    }
    let flipped = p.compose(&z.inv()?)?;
    if flipped != p {
        return Err(TrError::LoopEquationViolation { g, n, location: "not invariant under z -> 1/z".into() });
    }
    let deg = p.num().degree().unwrap_or(0);
    Ok(CheckReport {
        name: "loop".into(),
        g,
        n,
        points: report_pts,
        passed: true,
        detail: format!("polynomial in x of degree {}", deg as i64 - p.den().degree().unwrap_or(0) as i64),
    })
}

/// Generic rational points: distinct, away from 0 and ±1.
pub fn random_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(k);
    while out.len() < k {
        let p: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=7);
        let c = Q::new(p.into(), d.into());
        let bad = c.is_zero()
            || c == q(1)
            || c == q(-1)
            || out.iter().any(|o| *o == c || o * &c == q(1));
        if !bad {
            out.push(c);
        }
    }
    out
}

/// Every stable entry, specialized in each variable, has poles only at ±1 and decays like z^{−2}.
pub fn pole_structure_check(table: &TRTable, seed: u64) -> Result<Vec<CheckReport>, TrError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (g, n) in table.keys() {
        if euler(g, n) < 1 {
            continue;
        }
        let c = table.get(g, n).ok_or(TrError::DependencyMissing { g, n })?;
        let pts = random_points(&mut rng, n);
        for i in 0..n {
            let slots: Vec<Slot> =
                (0..n).map(|j| if j == i { Slot::Free } else { Slot::Fixed(pts[j].clone()) }).collect();
            let r = c.specialize(&slots)?;
            let (_, rest) = r.strip_poles(&[g_of(&q(1)), g_of(&q(-1))]);
            let dn = r.num().degree().map(|d| d as i64).unwrap_or(-1);
            let dd = r.den().degree().unwrap_or(0) as i64;
            if rest.degree() != Some(0) || dn > dd - 2 {
                return Err(TrError::PoleStructure {
                    g,
                    n,
                    detail: format!("variable {i}: residual denominator {rest}, degrees {dn}/{dd}"),
                });
            }
        }
        out.push(CheckReport {
            name: "poles".into(),
            g,
            n,
            points: pts.iter().map(|c| c.to_string()).collect(),
            passed: true,
            detail: format!("max pole order {}", c.max_pole_order()),
        });
    }
    Ok(out)
}

/// Transposition invariance, on the stored data and by specialization at random points.
pub fn symmetry_check(table: &TRTable, g: usize, n: usize, seed: u64) -> Result<CheckReport, TrError> {
    let c = table.compute(g, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_points(&mut rng, n);
    let base = c.evaluate(&pts)?;
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        let swapped: Vec<Q> = perm.iter().map(|&k| pts[k].clone()).collect();
        if !c.permuted_equals(&perm) || c.evaluate(&swapped)? != base {
            return Err(TrError::SymmetryFailure { g, n });
        }
    }
    Ok(CheckReport {
        name: "symmetry".into(),
        g,
        n,
        points: pts.iter().map(|c| c.to_string()).collect(),
        passed: true,
        detail: format!("value {base}"),
    })
}

/// dE_z(p) = (1 − z²)/(2(z − p)(pz − 1)) equals ½(1/(1/z − p) − 1/(z − p)) and is odd under z → 1/z.
pub fn kernel_parity_check(p: &Q) -> Result<bool, TrError> {
    let z = RatFunc::<Q>::var_fn(Var::Z);
    let pc = zc(p.clone());
    let one = zc(q(1));
    let de = (one.clone() - z.clone() * z.clone())
        / ((z.clone() - pc.clone()) * (pc.clone() * z.clone() - one.clone())).scale(&q(2));
    let alt = ((z.inv()? - pc.clone()).inv()? - (z.clone() - pc).inv()?).scale(&Q::new(1.into(), 2.into()));
    let flipped = de.compose(&z.inv()?)?;
    Ok(de == alt && flipped == -de)
}

/// W₂^(0)(x₁,x₂)x′(z₁)x′(z₂) + x′x′/(x₁ − x₂)² = 1/(z₁ − z₂)² in z₁ at fixed z₂.
pub fn w02_consistency(table: &TRTable, z2: &Q) -> Result<bool, TrError> {
    let un = table.uniformization();
    let slots = [Slot::Free, Slot::Fixed(z2.clone())];
    let w = w_x(table, 0, 2, &slots)?;
    let dx = lift(&un.dx);
    let x = lift(&un.x);
    let c2 = g_of(z2);
    let dx2 = zc(dx.eval(&c2)?);
    let dxx = x.clone() - zc(x.eval(&c2)?);
    let lhs = w * dx.clone() * dx2.clone() + dx * dx2 / (dxx.clone() * dxx);
    let d = RatFunc::var_fn(Var::Z) - zc(c2);
    Ok(lhs == (d.clone() * d).inv()?)
}
