//! Exact rational scalars and vectors.
//!
//! Every coordinate, radius and tolerance in the crate is a [`Rational`].
//! Serialized form is the string `"p/q"` (an integer `"p"` is accepted on
//! input).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer lattice point. One-dimensional systems keep the second coordinate at 0.
pub type Cell = [i64; 2];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor_i64(&self) -> i64 {
        self.0.floor().to_integer().to_i64().expect("floor out of i64 range")
    }

    pub fn ceil_i64(&self) -> i64 {
        self.0.ceil().to_integer().to_i64().expect("ceil out of i64 range")
    }

    /// `self - floor(self)`, always in `[0, 1)`.
    pub fn fract(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Closest rational with the given denominator (round half away from zero).
    pub fn from_f64_with_denom(x: f64, denom: i64) -> Self {
        Rational::new((x * denom as f64).round() as i64, denom)
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn numer_string(&self) -> String {
        self.0.numer().to_string()
    }

    pub fn denom_string(&self) -> String {
        self.0.denom().to_string()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = p
            .parse()
            .map_err(|_| Error::parse("", format!("bad numerator in {s:?}")))?;
        let denom: BigInt = q
            .parse()
            .map_err(|_| Error::parse("", format!("bad denominator in {s:?}")))?;
        if !denom.is_positive() {
            return Err(Error::parse("", format!("denominator must be positive in {s:?}")));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| match e {
            Error::Parse { msg, .. } => serde::de::Error::custom(msg),
            other => serde::de::Error::custom(other),
        })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for `Rational::new(p, q)`.
pub fn q(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

/// A point of `R^d` with rational coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(pub Vec<Rational>);

impl Vector {
    pub fn zero(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn from_cell(cell: Cell, dim: usize) -> Self {
        Vector(cell[..dim].iter().map(|&x| Rational::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Vector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    /// Exact test `|self| <= bound` (Euclidean).
    pub fn norm_le(&self, bound: &Rational) -> bool {
        !bound.is_negative() && self.norm_sq() <= bound * bound
    }

    /// Exact test `|self| < bound` (Euclidean).
    pub fn norm_lt(&self, bound: &Rational) -> bool {
        bound.is_positive() && self.norm_sq() < bound * bound
    }

    /// Rational upper bound on the Euclidean norm (the l1 norm).
    pub fn norm_upper(&self) -> Rational {
        if self.dim() <= 1 {
            return self.0.first().map(Rational::abs).unwrap_or_default();
        }
        self.0.iter().map(Rational::abs).sum()
    }

    pub fn floor_cell(&self) -> Cell {
        let mut c = [0i64; 2];
        for (i, x) in self.0.iter().enumerate() {
            c[i] = x.floor_i64();
        }
        c
    }

    pub fn fract(&self) -> Vector {
        Vector(self.0.iter().map(Rational::fract).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(Rational::to_f64).collect()
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&Vector> for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|x| -x).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        let r: Rational = "6/8".parse().unwrap();
        assert_eq!(r, q(3, 4));
        assert_eq!(r.to_string(), "3/4");
        assert_eq!("-5".parse::<Rational>().unwrap(), Rational::from_int(-5));
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1/-2".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
    }

    #[test]
    fn floor_and_fract() {
        let r = q(-1, 4);
        assert_eq!(r.floor_i64(), -1);
        assert_eq!(r.fract(), q(3, 4));
        assert_eq!(q(7, 2).ceil_i64(), 4);
    }

    #[test]
    fn norm_comparisons_are_exact() {
        let v = Vector(vec![q(3, 10), q(4, 10)]);
        assert!(v.norm_le(&q(1, 2)));
        assert!(!v.norm_lt(&q(1, 2)));
        assert_eq!(v.norm_upper(), q(7, 10));
    }
}
