//! Coefficient fields: exact rationals, Gaussian rationals and `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Q = BigRational;

/// Arithmetic contract shared by every coefficient domain.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_q(q: &Q) -> Self;
    /// True for fields where equality is decidable (gcd-based normalization is valid).
    fn is_exact() -> bool;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&q(n))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            k >>= 1;
        }
        acc
    }

    /// Integer power allowing negative exponents; `None` on 0^negative.
    fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.pow((-e) as u32))
        }
    }
}

/// Integer as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `num/den` as a rational. Panics on zero denominator.
pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// n! as a rational.
pub fn factorial(n: u32) -> Q {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Q::from_integer(acc)
}

/// Binomial coefficient C(n, k), zero outside 0 ≤ k ≤ n.
pub fn binomial(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return <Q as Zero>::zero();
    }
    factorial(n as u32) / (factorial(k as u32) * factorial((n - k) as u32))
}

/// Central coefficient (2k)!/(2^{2k}(k!)^2) of the expansion of (1-4w)^{-1/2}/… used throughout.
pub fn central(k: u32) -> Q {
    factorial(2 * k) / (Q::from_integer(BigInt::from(4).pow(k)) * factorial(k) * factorial(k))
}

/// Parse "p/q", an integer, or a finite decimal such as "-0.125" into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let t = s.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((int, frac)) = t.split_once('.') {
        if t.contains('/') || frac.is_empty() && int.is_empty() {
            return None;
        }
        let neg = int.starts_with('-');
        let int_abs = int.trim_start_matches(['-', '+']);
        let digits = format!("{int_abs}{frac}");
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let n = BigInt::from_str(&digits).ok()?;
        let d = BigInt::from(10).pow(frac.len() as u32);
        let v = Q::new(n, d);
        return Some(if neg { -v } else { v });
    }
    Q::from_str(t).ok()
}

/// Lossy conversion of a rational to `f64`.
pub fn q_to_f64(x: &Q) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale down huge operands before dividing.
            let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(1000) as usize;
            let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

impl Field for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn is_exact() -> bool {
        false
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Gauss {
    pub re: Q,
    pub im: Q,
}

impl Gauss {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }
    pub fn real(re: Q) -> Self {
        Gauss { re, im: <Q as Zero>::zero() }
    }
    pub fn i() -> Self {
        Gauss { re: <Q as Zero>::zero(), im: <Q as One>::one() }
    }
    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            return write!(f, "{}", self.re);
        }
        if Zero::is_zero(&self.re) {
            return write!(f, "{}*i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}*i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}*i", self.re, self.im)
        }
    }
}

impl Add for Gauss {
    type Output = Gauss;
    fn add(self, o: Gauss) -> Gauss {
        Gauss { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Gauss {
    type Output = Gauss;
    fn sub(self, o: Gauss) -> Gauss {
        Gauss { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Gauss {
    type Output = Gauss;
    fn mul(self, o: Gauss) -> Gauss {
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return Gauss::real(self.re * o.re);
        }
        Gauss {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for Gauss {
    type Output = Gauss;
    fn div(self, o: Gauss) -> Gauss {
        if Zero::is_zero(&o.im) {
            return Gauss { re: self.re / &o.re, im: self.im / &o.re };
        }
        let n = o.norm();
        let num = self * o.conj();
        Gauss { re: num.re / &n, im: num.im / n }
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl Field for Gauss {
    fn zero() -> Self {
        Gauss::real(<Q as Zero>::zero())
    }
    fn one() -> Self {
        Gauss::real(<Q as One>::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_q(q: &Q) -> Self {
        Gauss::real(q.clone())
    }
    fn is_exact() -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_inverse() {
        let a = Gauss::new(qf(3, 7), qf(-2, 5));
        assert_eq!(a.clone() / a.clone(), Gauss::one());
        assert_eq!(Gauss::i() * Gauss::i(), -Gauss::one());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6"), Some(qf(1, 2)));
        assert_eq!(parse_q("-0.125"), Some(qf(-1, 8)));
        assert_eq!(parse_q("7"), Some(q(7)));
        assert_eq!(parse_q("x"), None);
    }

    #[test]
    fn central_values() {
        assert_eq!(central(0), q(1));
        assert_eq!(central(1), qf(1, 2));
        assert_eq!(central(3), qf(5, 16));
    }

    #[test]
    fn gauss_display() {
        assert_eq!(Gauss::new(qf(1, 2), qf(-3, 4)).to_string(), "1/2-3/4*i");
        assert_eq!(Gauss::new(qf(1, 2), qf(3, 4)).to_string(), "1/2+3/4*i");
    }
}
