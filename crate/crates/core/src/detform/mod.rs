//! Leading-order kernel K₀, the two-point function W₂^(0) and determinantal
//! combinatorics over supplied kernel values.

use num_complex::Complex64;
use num_traits::Zero as _;

use crate::exact::{q, q_to_f64, Field, Gauss, RatFunc, Var, Q};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DetError {
    #[error("coincident points x1 = x2")]
    CoincidentPoints,
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("n = {0} exceeds the enumeration cap of 7")]
    TooLarge(usize),
    #[error("kernel matrix shape: {0}")]
    Shape(String),
    #[error("x-form and z-form disagree")]
    FormMismatch,
}

/// Largest n handled by explicit permutation enumeration.
pub const MAX_N: usize = 7;

pub fn c64(g: &Gauss) -> Complex64 {
    Complex64::new(q_to_f64(&g.re), q_to_f64(&g.im))
}

/// x(z) = u₀(z² + 1)/(2z).
pub fn x_of(z: &Gauss, u0: &Gauss) -> Gauss {
    u0.clone() * (z.clone() * z.clone() + Gauss::one()) / (z.clone() * Gauss::from_i64(2))
}

fn check_z(z: &Gauss) -> Result<(), DetError> {
    for bad in [q(0), q(1), q(-1)] {
        if *z == Gauss::real(bad.clone()) {
            return Err(DetError::SingularPoint(format!("z = {bad}")));
        }
    }
    Ok(())
}

/// g(x(z))² = −i(z + 1)/(z − 1), a square root of (u₀ + x)/(u₀ − x).
pub fn g_squared(z: &Gauss) -> Gauss {
    -(Gauss::i() * (z.clone() + Gauss::one())) / (z.clone() - Gauss::one())
}

/// c·√r with the principal square root.
#[derive(Clone, Debug, PartialEq)]
pub struct Surd {
    pub coeff: Gauss,
    pub radicand: Gauss,
}

impl Surd {
    pub fn square(&self) -> Gauss {
        self.coeff.clone() * self.coeff.clone() * self.radicand.clone()
    }

    pub fn to_complex(&self) -> Complex64 {
        c64(&self.coeff) * c64(&self.radicand).sqrt()
    }
}

/// K₀(x₁, x₂) at x_i = x(z_i): [g₁/g₂ + g₂/g₁]/(2(x₁ − x₂)) = (g₁² + g₂²)/(2(x₁ − x₂)g₁²g₂²)·√(g₁²g₂²).
pub fn kernel_k0(z1: &Gauss, z2: &Gauss, u0: &Gauss) -> Result<Surd, DetError> {
    check_z(z1)?;
    check_z(z2)?;
    let (x1, x2) = (x_of(z1, u0), x_of(z2, u0));
    if x1 == x2 {
        return Err(DetError::CoincidentPoints);
    }
    let (s1, s2) = (g_squared(z1), g_squared(z2));
    let r = s1.clone() * s2.clone();
    let coeff = (s1 + s2) / (Gauss::from_i64(2) * (x1 - x2) * r.clone());
    Ok(Surd { coeff, radicand: r })
}

/// The defining display evaluated directly from x₁, x₂ with principal fourth roots,
/// returned on all four relative sheets g₁ → iᵏg₁.
pub fn kernel_k0_direct(x1: Complex64, x2: Complex64, u0: Complex64) -> [Complex64; 4] {
    let g = |x: Complex64| ((u0 + x) / (u0 - x)).powf(0.25);
    let (g1, g2) = (g(x1), g(x2));
    let i = Complex64::i();
    let mut out = [Complex64::zero(); 4];
    let mut rot = Complex64::new(1.0, 0.0);
    for slot in &mut out {
        let h = g1 * rot;
        *slot = (h / g2 + g2 / h) / (2.0 * (x1 - x2));
        rot *= i;
    }
    out
}

/// Both forms of W₂^(0) at one point pair.
#[derive(Clone, Debug, PartialEq)]
pub struct W2Leading {
    /// 4z₁²z₂²/(u₀²(z₁² − 1)(z₂² − 1)(z₁z₂ − 1)²).
    pub z_form: Gauss,
    /// (s − 2 + 1/s)/(4(x₁ − x₂)²) with s = g₁²/g₂².
    pub x_form: Gauss,
}

pub fn w2_leading(z1: &Gauss, z2: &Gauss, u0: &Gauss) -> Result<W2Leading, DetError> {
    check_z(z1)?;
    check_z(z2)?;
    let one = Gauss::one();
    let p = z1.clone() * z2.clone() - one.clone();
    if p.is_zero() {
        return Err(DetError::SingularPoint("z1·z2 = 1".into()));
    }
    let (x1, x2) = (x_of(z1, u0), x_of(z2, u0));
    if x1 == x2 {
        return Err(DetError::CoincidentPoints);
    }
    let sq = |z: &Gauss| z.clone() * z.clone();
    let z_form = Gauss::from_i64(4) * sq(z1) * sq(z2)
        / (sq(u0) * (sq(z1) - one.clone()) * (sq(z2) - one.clone()) * sq(&p));
    let s = g_squared(z1) / g_squared(z2);
    let dx = x1 - x2;
    let x_form = (s.clone() - Gauss::from_i64(2) + one / s) / (Gauss::from_i64(4) * sq(&dx));
    if x_form != z_form {
        return Err(DetError::FormMismatch);
    }
    Ok(W2Leading { z_form, x_form })
}

/// W₂^(0)x′(z₁)x′(z₂) + x′x′/(x₁ − x₂)² = 1/(z₁ − z₂)² as rational functions of z₁.
pub fn w2_differential_identity(z2: &Q, u0: &Q) -> bool {
    let z = RatFunc::<Q>::var_fn(Var::Z);
    let c = |v: Q| RatFunc::constant(v, Var::Z);
    let one = c(q(1));
    let x = (z.clone() * z.clone() + one.clone()) * c(u0 / q(2)) / z.clone();
    let dx = (z.clone() * z.clone() - one.clone()) * c(u0 / q(2)) / (z.clone() * z.clone());
    let x2 = u0 * (z2 * z2 + q(1)) / (q(2) * z2);
    let dx2 = u0 * (z2 * z2 - q(1)) / (q(2) * z2 * z2);
    let w = (z.clone() * z.clone()).scale(&(q(4) * z2 * z2))
        / ((z.clone() * z.clone() - one.clone())
            * c((z2 * z2 - q(1)) * u0 * u0)
            * (z.clone().scale(z2) - one.clone()).pow(2).expect("nonzero"));
    let d = x - c(x2);
    let lhs = w * dx.clone().scale(&dx2) + dx.scale(&dx2) / (d.clone() * d);
    let diff = z - c(z2.clone());
    lhs == (diff.clone() * diff).inv().expect("nonzero")
}

/// Kernel data at n points: K(x_i, x_j) off the diagonal, W₁ on it, −W₂ for 2-cycles.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix<F> {
    pub points: Vec<F>,
    pub offdiag: Vec<Vec<F>>,
    pub diag: Vec<F>,
    pub pairprod: Vec<Vec<F>>,
}

impl<F: Field> KernelMatrix<F> {
    pub fn new(points: Vec<F>, offdiag: Vec<Vec<F>>, diag: Vec<F>, pairprod: Vec<Vec<F>>) -> Result<Self, DetError> {
        let n = points.len();
        let square = |m: &Vec<Vec<F>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if diag.len() != n || !square(&offdiag) || !square(&pairprod) {
            return Err(DetError::Shape(format!("expected {n} points throughout")));
        }
        for i in 0..n {
            for j in 0..n {
                if pairprod[i][j] != pairprod[j][i] {
                    return Err(DetError::Shape(format!("pairprod not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(KernelMatrix { points, offdiag, diag, pairprod })
    }

    /// Fill the 2-cycle replacement from the connected two-point value, so that
    /// −W₂(x_i, x_j) = K_ij·K_ji + 1/(x_i − x_j)².
    pub fn from_kernel(points: Vec<F>, offdiag: Vec<Vec<F>>, diag: Vec<F>) -> Result<Self, DetError> {
        let n = points.len();
        let mut pairprod = vec![vec![F::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = points[i].clone() - points[j].clone();
                    if d.is_zero() {
                        return Err(DetError::CoincidentPoints);
                    }
                    pairprod[i][j] = offdiag[i][j].clone() * offdiag[j][i].clone() + F::one() / (d.clone() * d);
                }
            }
        }
        KernelMatrix::new(points, offdiag, diag, pairprod)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                go(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Cycle decomposition of a permutation given as images.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut k = perm[s];
        while k != s {
            seen[k] = true;
            c.push(k);
            k = perm[k];
        }
        out.push(c);
    }
    out
}

fn cycle_product<F: Field>(km: &KernelMatrix<F>, cyc: &[usize]) -> F {
    let mut p = F::one();
    for (a, b) in cyc.iter().zip(cyc.iter().cycle().skip(1)) {
        p = p * km.offdiag[*a][*b].clone();
    }
    p
}

/// Connected W_n on the indices in `subset` from the cycle sum.
pub fn connected_from_kernel<F: Field>(km: &KernelMatrix<F>, subset: &[usize]) -> Result<F, DetError> {
    let n = subset.len();
    if n == 0 || subset.iter().any(|&i| i >= km.len()) {
        return Err(DetError::Shape("subset must be a nonempty set of valid indices".into()));
    }
    if n > MAX_N {
        return Err(DetError::TooLarge(n));
    }
    if n == 1 {
        return Ok(km.diag[subset[0]].clone());
    }
    let mut sum = F::zero();
    for rest in permutations(n - 1) {
        let cyc: Vec<usize> = std::iter::once(subset[0]).chain(rest.iter().map(|&k| subset[k + 1])).collect();
        sum = sum + cycle_product(km, &cyc);
    }
    let sign = if n.is_multiple_of(2) { F::one() } else { -F::one() };
    let mut out = -(sign * sum);
    if n == 2 {
        let d = km.points[subset[0]].clone() - km.points[subset[1]].clone();
        out = out - F::one() / (d.clone() * d);
    }
    Ok(out)
}

/// det′: signed permutation sum with W₁ for fixed points and −W₂ for 2-cycles.
pub fn nonconnected_detprime<F: Field>(km: &KernelMatrix<F>) -> Result<F, DetError> {
    let n = km.len();
    if n == 0 {
        return Err(DetError::Shape("empty kernel matrix".into()));
    }
    if n > MAX_N {
        return Err(DetError::TooLarge(n));
    }
    let mut total = F::zero();
    for perm in permutations(n) {
        let cs = cycles(&perm);
        let odd = cs.iter().filter(|c| c.len() % 2 == 0).count() % 2 == 1;
        let mut term = F::one();
        for c in &cs {
            term = term
                * match c.len() {
                    1 => km.diag[c[0]].clone(),
                    2 => km.pairprod[c[0]][c[1]].clone(),
                    _ => cycle_product(km, c),
                };
        }
        total = if odd { total - term } else { total + term };
    }
    Ok(total)
}

/// All set partitions of 0..n.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for p in out {
            for b in 0..p.len() {
                let mut np = p.clone();
                np[b].push(k);
                next.push(np);
            }
            let mut np = p;
            np.push(vec![k]);
            next.push(np);
        }
        out = next;
    }
    out
}

/// Σ over set partitions of Π connected values: the moment side of the cumulant relation.
pub fn partition_sum<F: Field>(km: &KernelMatrix<F>) -> Result<F, DetError> {
    let mut total = F::zero();
    for p in set_partitions(km.len()) {
        let mut term = F::one();
        for block in &p {
            term = term * connected_from_kernel(km, block)?;
        }
        total = total + term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    fn gq(n: i64) -> Gauss {
        Gauss::from_i64(n)
    }

    #[test]
    fn w2_example() {
        let w = w2_leading(&gq(2), &gq(3), &gq(1)).unwrap();
        assert_eq!(w.z_form, Gauss::real(qf(6, 25)));
    }

    #[test]
    fn k0_sheets_and_antisymmetry() {
        let k = kernel_k0(&gq(2), &gq(3), &gq(1)).unwrap();
        let back = kernel_k0(&gq(3), &gq(2), &gq(1)).unwrap();
        assert_eq!(k.coeff, -back.coeff);
        let x = |z: i64| c64(&x_of(&gq(z), &gq(1)));
        let direct = kernel_k0_direct(x(2), x(3), Complex64::new(1.0, 0.0));
        let v = k.to_complex();
        assert!(direct.iter().any(|d| (d - v).norm() < 1e-12 * v.norm()));
    }

    #[test]
    fn small_n_examples() {
        let km = KernelMatrix::<Q>::from_kernel(
            vec![q(1), q(2), q(4)],
            vec![vec![q(0), q(1), q(1)], vec![q(1), q(0), q(1)], vec![q(1), q(1), q(0)]],
            vec![q(5), q(6), q(7)],
        )
        .unwrap();
        assert_eq!(connected_from_kernel(&km, &[0, 1, 2]).unwrap(), q(2));
        assert_eq!(connected_from_kernel(&km, &[1]).unwrap(), q(6));
        assert_eq!(connected_from_kernel(&km, &[0, 1]).unwrap(), q(-2));
        assert_eq!(nonconnected_detprime(&km).unwrap(), partition_sum(&km).unwrap());
    }
}
