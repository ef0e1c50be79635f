//! Tagged scalar used at API and serialization boundaries.

use std::fmt;

use serde::{Serialize, Serializer};

use super::field::{q_to_f64, Gauss, Q};

/// One value from any of the three arithmetic regimes.
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Rational(Q),
    Gauss(Gauss),
    Float(f64),
}

impl Scalar {
    /// Collapse a Gaussian rational with zero imaginary part to `Rational`.
    pub fn from_gauss(g: Gauss) -> Self {
        if g.is_real() {
            Scalar::Rational(g.re)
        } else {
            Scalar::Gauss(g)
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        match self {
            Scalar::Rational(r) => Some(q_to_f64(r)),
            Scalar::Gauss(g) if g.is_real() => Some(q_to_f64(&g.re)),
            Scalar::Gauss(_) => None,
            Scalar::Float(f) => Some(*f),
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }
}

impl From<Q> for Scalar {
    fn from(r: Q) -> Self {
        Scalar::Rational(r)
    }
}

impl From<Gauss> for Scalar {
    fn from(g: Gauss) -> Self {
        Scalar::from_gauss(g)
    }
}

impl From<f64> for Scalar {
    fn from(f: f64) -> Self {
        Scalar::Float(f)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Gauss(g) => write!(f, "{g}"),
            Scalar::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Exact values become strings ("p/q", "p/q+r/s*i"); floats stay JSON numbers.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Float(x) => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}
